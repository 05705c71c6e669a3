#include "sgrace/erasure.hpp"

#include <cmath>
#include <sstream>

namespace sgrace {

namespace {

const char* const kGtTemplates[] = {
    "{}",         "a {}",          "the {}",         "{} scene",
    "{} photo",   "a photo of {}", "an image of {}", "{} close up",
};
constexpr int kGtTemplateCount = static_cast<int>(std::size(kGtTemplates));

std::string expand_template(const char* tmpl, const std::string& keyword) {
  std::string s(tmpl);
  auto pos = s.find("{}");
  s.replace(pos, 2, keyword);
  return s;
}

}  // namespace

ConceptSpec build_concept_spec(const RunConfig& cfg, const KeywordPool& pool, Rng& rng) {
  Tokenizer tok(cfg.encoder.vocab_size);
  ConceptSpec spec;
  spec.name = cfg.concept_name;
  spec.target_prompt = tok.tokenize(cfg.target_prompt);
  if (spec.target_prompt.ids.empty()) {
    throw Error("concept spec: target prompt tokenizes to nothing");
  }
  for (const auto& k : pool.relevant) spec.relevant_keywords.push_back(tok.tokenize(k));
  for (const auto& k : pool.unrelated) spec.unrelated_keywords.push_back(tok.tokenize(k));

  spec.gt_prompt_text.reserve(static_cast<size_t>(cfg.gt_prompt_count));
  for (int i = 0; i < cfg.gt_prompt_count; ++i) {
    const std::string& kw =
        pool.relevant[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(pool.relevant.size()) - 1))];
    const char* tmpl = kGtTemplates[rng.uniform_int(0, kGtTemplateCount - 1)];
    std::string prompt = expand_template(tmpl, kw);
    spec.gt_prompt_text.push_back(prompt);
    spec.gt_prompts.push_back(tok.tokenize(prompt));
  }
  return spec;
}

ErasureObjective erasure_objective(const EncoderPair& pair,
                                   std::span<const AdversarialSample> samples,
                                   const TokenSequence& target,
                                   std::span<const TokenSequence> anchors,
                                   const ErasureOptions& opts) {
  if (samples.empty()) throw Error("erasure_objective: no adversarial samples");
  bool anchor_active = opts.flags.use_l_anc && opts.beta > 0.0;
  if (anchor_active && anchors.empty()) {
    throw Error("erasure_objective: empty anchor list with beta > 0");
  }

  ErasureObjective out;
  out.theta_grad = Eigen::VectorXd::Zero(pair.current.param_count());

  Eigen::MatrixXd target_hidden =
      encode(pair.original, embed_tokens(pair.original, target).embeddings);

  double inv_s = 1.0 / static_cast<double>(samples.size());
  for (const auto& sample : samples) {
    const Eigen::MatrixXd& cprime = sample.soft_prompt.embeddings;
    EncodeTrace trace = encode_traced(pair.current, cprime);
    Eigen::MatrixXd original_hidden = encode(pair.original, cprime);

    Eigen::MatrixXd d_hidden = Eigen::MatrixXd::Zero(cprime.rows(), cprime.cols());
    SeqDistance sim = seq_sq_distance(trace.output, original_hidden, opts.loss_on);
    if (opts.flags.use_l_sim) {
      out.l_sim += inv_s * sim.value;
      d_hidden += inv_s * sim.d_lhs;
    }
    SeqDistance repel = seq_sq_distance(trace.output, target_hidden, opts.loss_on);
    out.l_repel += inv_s * repel.value;
    d_hidden -= opts.alpha * inv_s * repel.d_lhs;

    encode_vjp(pair.current, trace, d_hidden, nullptr, &out.theta_grad);
  }

  if (anchor_active) {
    double inv_a = 1.0 / static_cast<double>(anchors.size());
    for (const auto& toks : anchors) {
      SoftPrompt sp = embed_tokens(pair.current, toks);
      EncodeTrace trace = encode_traced(pair.current, sp.embeddings);
      Eigen::MatrixXd original_hidden =
          encode(pair.original, embed_tokens(pair.original, toks).embeddings);

      SeqDistance anc = seq_sq_distance(trace.output, original_hidden, opts.loss_on);
      out.l_anchor += inv_a * anc.value;

      Eigen::MatrixXd d_hidden = (opts.beta * inv_a) * anc.d_lhs;
      Eigen::MatrixXd d_input;
      encode_vjp(pair.current, trace, d_hidden, &d_input, &out.theta_grad);
      // The anchor path reaches theta through the embedding table as well.
      accumulate_embedding_grad(pair.current, toks, d_input, out.theta_grad);
    }
  }

  out.loss = out.l_sim - opts.alpha * out.l_repel + opts.beta * out.l_anchor;
  return out;
}

ErasureState run_erasure(const ConceptSpec& cspec, const RunConfig& cfg,
                         const KeywordPool& pool, const NoisePredictor& den, Rng& rng,
                         const RunHooks& hooks) {
  validate_config(cfg);

  ErasureState state{EncoderPair::fresh(cfg.encoder, static_cast<uint64_t>(cfg.seed)),
                     {}, 0, 0, {}, cfg};
  AdamOptimizer adam(state.pair.current.param_count(), cfg.lr_erase);

  NoiseSchedule schedule;
  LatentCluster cluster = LatentCluster::for_concept(cspec.name, den.latent_dim());

  Rng attack_root = rng.fork(0xa77ac4);
  Rng anchor_rng = rng.fork(0xa2c402);

  ErasureOptions opts{cfg.alpha, cfg.beta, cfg.ablation, cfg.loss_on};

  AttackRunOptions attack_opts;
  attack_opts.steps = cfg.attack_steps;
  attack_opts.lr = cfg.lr_attack;
  attack_opts.epsilon_bound = cfg.epsilon_bound;
  attack_opts.objective.use_sga_term = cfg.ablation.use_sga_term;
  attack_opts.objective.sga_weight = cfg.sga_weight;
  attack_opts.objective.loss_on = cfg.loss_on;

  for (int step = 0; step < cfg.total_steps; ++step) {
    if (step % cfg.cycle_length == 0) {
      int cycle = step / cfg.cycle_length;
      for (int s = 0; s < cfg.samples_per_cycle; ++s) {
        Rng ars = attack_root.fork(static_cast<uint64_t>(cycle) * 8192 + s);
        AdversarialSample sample =
            cfg.ablation.use_llm_init
                ? init_sample(pool, state.pair.current, cfg.concat_count, ars)
                : init_sample_random(pool, state.pair.current, cfg.concat_count, ars);
        ClusterBatchSource batches(cluster, schedule, cfg.attack_batch);
        sample = run_attack(state.pair, den, batches, std::move(sample),
                            cspec.target_prompt, attack_opts, ars);
        sample.cycle_index = cycle;
        state.samples.push_back(std::move(sample));
      }
      ++state.attack_phases;
    }

    std::vector<TokenSequence> anchors;
    anchors.reserve(static_cast<size_t>(cfg.anchor_batch));
    for (int a = 0; a < cfg.anchor_batch; ++a) {
      anchors.push_back(cspec.unrelated_keywords[static_cast<size_t>(anchor_rng.uniform_int(
          0, static_cast<int64_t>(cspec.unrelated_keywords.size()) - 1))]);
    }

    ErasureObjective obj =
        erasure_objective(state.pair, state.samples, cspec.target_prompt, anchors, opts);
    if (!std::isfinite(obj.loss)) {
      std::ostringstream msg;
      msg << "run_erasure: non-finite loss at step " << step;
      throw Error(msg.str());
    }
    state.history.l_sim.push_back(obj.l_sim);
    state.history.l_repel.push_back(obj.l_repel);
    state.history.l_anchor.push_back(obj.l_anchor);
    state.history.total.push_back(obj.loss);

    adam.step(state.pair.current, obj.theta_grad);
    state.step = step + 1;

    if ((step + 1) % cfg.cycle_length == 0 && hooks.on_cycle_end) {
      hooks.on_cycle_end(state, step / cfg.cycle_length);
    }
  }
  return state;
}

EvalReport evaluate_erasure(const EncoderPair& pair, const ConceptSpec& cspec,
                            double threshold) {
  if (cspec.gt_prompts.empty()) throw Error("evaluate_erasure: empty ground-truth set");

  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(pair.original.arch().dim);
  for (const auto& p : cspec.gt_prompts) {
    centroid += pooled_encode_tokens(pair.original, p);
  }
  centroid /= static_cast<double>(cspec.gt_prompts.size());

  int hits = 0;
  for (const auto& p : cspec.gt_prompts) {
    Eigen::VectorXd cur = pooled_encode_tokens(pair.current, p);
    if ((cur - centroid).norm() <= threshold) ++hits;
  }

  EvalReport report;
  report.gt_count = static_cast<int>(cspec.gt_prompts.size());
  report.toy_asr = static_cast<double>(hits) / static_cast<double>(report.gt_count);
  report.threshold = threshold;
  report.target_drift = (pooled_encode_tokens(pair.current, cspec.target_prompt) -
                         pooled_encode_tokens(pair.original, cspec.target_prompt))
                            .norm();
  double drift = 0.0;
  for (const auto& k : cspec.unrelated_keywords) {
    drift += (pooled_encode_tokens(pair.current, k) - pooled_encode_tokens(pair.original, k))
                 .norm();
  }
  report.anchor_drift = drift / static_cast<double>(cspec.unrelated_keywords.size());
  return report;
}

double default_detector_threshold(const TextEncoder& original, const ConceptSpec& cspec) {
  if (cspec.gt_prompts.empty()) throw Error("detector threshold: empty ground-truth set");
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(cspec.gt_prompts.size());
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(original.arch().dim);
  for (const auto& p : cspec.gt_prompts) {
    pts.push_back(pooled_encode_tokens(original, p));
    centroid += pts.back();
  }
  centroid /= static_cast<double>(pts.size());
  double max_r = 0.0;
  for (const auto& e : pts) max_r = std::max(max_r, (e - centroid).norm());
  return max_r;
}

}  // namespace sgrace
