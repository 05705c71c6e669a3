#include "sgrace/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sgrace/analytics.hpp"
#include "sgrace/erasure.hpp"
#include "sgrace/llm_client.hpp"
#include "sgrace/matrix_io.hpp"
#include "sgrace/run_io.hpp"

namespace sgrace {

using nlohmann::json;

namespace {

// Stream salts for the per-component rngs derived from the config seed.
constexpr uint64_t kSpecStream = 0x9705;
constexpr uint64_t kDenoiserStream = 0xde40;
constexpr uint64_t kRunStream = 0x40b1;
constexpr uint64_t kAttackCmdStream = 0xac;

constexpr int kDenoiserLatentDim = 8;
constexpr int kDenoiserHidden = 32;

RunConfig load_resolved(const CommandOptions& opts) {
  RunConfig cfg = load_config(opts.config_path);
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  return cfg;
}

KeywordPool resolve_pool(const RunConfig& cfg) {
  switch (cfg.pool_source) {
    case PoolSource::builtin: {
      KeywordPool pool = builtin_pool(cfg.concept_name);
      validate_pool(pool, cfg.relevant_pool_size, cfg.unrelated_pool_size);
      return pool;
    }
    case PoolSource::file:
      return load_pool(*cfg.pool_path, cfg.concept_name, cfg.relevant_pool_size,
                       cfg.unrelated_pool_size);
    case PoolSource::llm: {
      HttpLlmClient client(*cfg.llm);
      return fetch_pool_llm(client, cfg.concept_name, cfg.relevant_pool_size,
                            cfg.unrelated_pool_size);
    }
  }
  throw Error("unreachable pool source");
}

struct Pipeline {
  KeywordPool pool;
  ConceptSpec spec;
  ToyDenoiser denoiser;
  NoiseSchedule schedule;
};

Pipeline build_pipeline(const RunConfig& cfg) {
  KeywordPool pool = resolve_pool(cfg);
  Rng root(static_cast<uint64_t>(cfg.seed));
  Rng spec_rng = root.fork(kSpecStream);
  ConceptSpec spec = build_concept_spec(cfg, pool, spec_rng);
  Rng den_rng = root.fork(kDenoiserStream);
  NoiseSchedule schedule;
  ToyDenoiser den(kDenoiserLatentDim, cfg.encoder.dim, kDenoiserHidden, schedule.t_max,
                  den_rng);
  return Pipeline{std::move(pool), std::move(spec), std::move(den), schedule};
}

double resolve_threshold(const RunConfig& cfg, const TextEncoder& original,
                         const ConceptSpec& spec) {
  if (cfg.detector_threshold) return *cfg.detector_threshold;
  return default_detector_threshold(original, spec);
}

std::string loss_history_csv(const TermHistory& h) {
  std::ostringstream out;
  out.precision(17);
  out << "step,l_sim,l_repel,l_anchor,total\n";
  for (size_t i = 0; i < h.total.size(); ++i) {
    out << i << ',' << h.l_sim[i] << ',' << h.l_repel[i] << ',' << h.l_anchor[i] << ','
        << h.total[i] << '\n';
  }
  return out.str();
}

std::string trace_csv(std::span<const AdversarialSample> samples) {
  std::ostringstream out;
  out.precision(17);
  out << "sample,cycle,step,loss\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t s = 0; s < samples[i].loss_trace.size(); ++s) {
      out << i << ',' << samples[i].cycle_index << ',' << s << ','
          << samples[i].loss_trace[s] << '\n';
    }
  }
  return out.str();
}

json eval_json(const EvalReport& r) {
  return json{{"toy_asr", r.toy_asr},
              {"target_drift", r.target_drift},
              {"anchor_drift", r.anchor_drift},
              {"detector_threshold", r.threshold},
              {"gt_count", r.gt_count}};
}

// Pooled embeddings of the samples under the ORIGINAL encoder, one per row;
// the representation the pilot analysis compares against the GT space.
Eigen::MatrixXd pooled_rows(const TextEncoder& original,
                            std::span<const AdversarialSample> samples) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(samples.size()), original.arch().dim);
  for (size_t i = 0; i < samples.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) =
        pooled_encode(original, samples[i].soft_prompt.embeddings).transpose();
  }
  return rows;
}

}  // namespace

int cmd_erase(const CommandOptions& opts) {
  RunConfig cfg = load_resolved(opts);
  Pipeline pipe = build_pipeline(cfg);
  RunDir dir = RunDir::create(opts.out_dir);
  dir.write_text("resolved_config.json", serialize_config(cfg));

  {
    Eigen::VectorXd dp = pipe.denoiser.params();
    write_matrix(dir.file("denoiser.sgrc"),
                 Eigen::Map<const Eigen::MatrixXd>(dp.data(), 1, dp.size()));
  }

  EncoderPair fresh = EncoderPair::fresh(cfg.encoder, static_cast<uint64_t>(cfg.seed));
  double threshold = resolve_threshold(cfg, fresh.original, pipe.spec);
  EvalReport pre = evaluate_erasure(fresh, pipe.spec, threshold);

  std::string hash = config_hash(cfg);
  RunHooks hooks;
  hooks.on_cycle_end = [&](const ErasureState& state, int cycle) {
    char name[32];
    std::snprintf(name, sizeof(name), "checkpoints/cycle_%03d", cycle);
    write_checkpoint(dir.file(name), state.pair.current,
                     CheckpointMeta{cfg.encoder, state.step, hash, cfg.concept_name,
                                    cfg.seed});
  };

  Rng run_rng = Rng(static_cast<uint64_t>(cfg.seed)).fork(kRunStream);
  ErasureState state = run_erasure(pipe.spec, cfg, pipe.pool, pipe.denoiser, run_rng, hooks);

  EvalReport post = evaluate_erasure(state.pair, pipe.spec, threshold);

  dir.write_text("loss_history.csv", loss_history_csv(state.history));
  dir.write_text("attack_traces.csv", trace_csv(state.samples));

  json report;
  report["schema"] = "sgrace-run-report/v1";
  report["concept"] = cfg.concept_name;
  report["seed"] = cfg.seed;
  report["config_hash"] = hash;
  report["counters"] = {{"encoder_steps", state.step},
                        {"attack_phases", state.attack_phases},
                        {"samples_per_phase", cfg.samples_per_cycle},
                        {"total_samples", state.samples.size()},
                        {"attack_steps_per_sample", cfg.attack_steps},
                        {"lr_erase", cfg.lr_erase},
                        {"lr_attack", cfg.lr_attack}};
  report["metrics"] = {{"pre", eval_json(pre)}, {"post", eval_json(post)}};
  report["loss_history"] = {{"l_sim", state.history.l_sim},
                            {"l_repel", state.history.l_repel},
                            {"l_anchor", state.history.l_anchor},
                            {"total", state.history.total}};
  dir.write_text("report.json", report.dump(2) + "\n");
  dir.finalize();
  return 0;
}

int cmd_attack(const CommandOptions& opts) {
  RunConfig cfg = load_resolved(opts);
  AttackCmdConfig ac = cfg.attack.value_or(AttackCmdConfig{});
  Pipeline pipe = build_pipeline(cfg);
  RunDir dir = RunDir::create(opts.out_dir);
  dir.write_text("resolved_config.json", serialize_config(cfg));

  EncoderPair pair = EncoderPair::fresh(cfg.encoder, static_cast<uint64_t>(cfg.seed));
  if (ac.checkpoint) {
    pair.current.set_params(load_checkpoint(*ac.checkpoint, cfg.encoder));
  }

  LatentCluster cluster =
      LatentCluster::for_concept(pipe.spec.name, pipe.denoiser.latent_dim());

  AttackRunOptions aopts;
  aopts.steps = cfg.attack_steps;
  aopts.lr = cfg.lr_attack;
  aopts.epsilon_bound = cfg.epsilon_bound;
  aopts.objective.use_sga_term = cfg.ablation.use_sga_term;
  aopts.objective.sga_weight = cfg.sga_weight;
  aopts.objective.loss_on = cfg.loss_on;

  Rng root = Rng(static_cast<uint64_t>(cfg.seed)).fork(kAttackCmdStream);
  std::vector<AdversarialSample> samples;
  samples.reserve(static_cast<size_t>(ac.num_samples));
  for (int i = 0; i < ac.num_samples; ++i) {
    Rng ars = root.fork(static_cast<uint64_t>(i));
    ClusterBatchSource batches(cluster, pipe.schedule, cfg.attack_batch);
    AdversarialSample sample;
    if (ac.method == "race") {
      // Perturbation of the target concept itself, diffusion term only.
      SoftPrompt base = embed_tokens(pair.current, pipe.spec.target_prompt);
      sample.base = base.embeddings;
      sample.soft_prompt = std::move(base);
      sample = race_attack(pair, pipe.denoiser, batches, std::move(sample), ac.race_epsilon,
                           cfg.attack_steps, cfg.lr_attack, ars);
    } else {
      sample = cfg.ablation.use_llm_init
                   ? init_sample(pipe.pool, pair.current, cfg.concat_count, ars)
                   : init_sample_random(pipe.pool, pair.current, cfg.concat_count, ars);
      sample = run_attack(pair, pipe.denoiser, batches, std::move(sample),
                          pipe.spec.target_prompt, aopts, ars);
    }
    samples.push_back(std::move(sample));
  }

  for (size_t i = 0; i < samples.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "samples/sample_%03zu.sgrc", i);
    write_matrix(dir.file(name), samples[i].soft_prompt.embeddings);
    json meta;
    meta["seed_keywords"] = samples[i].seed_keywords;
    meta["cycle_index"] = samples[i].cycle_index;
    meta["loss_trace"] = samples[i].loss_trace;
    std::snprintf(name, sizeof(name), "samples/sample_%03zu.json", i);
    dir.write_text(name, meta.dump(2) + "\n");
  }
  write_matrix(dir.file("pooled.sgrc"), pooled_rows(pair.original, samples));
  dir.write_text("attack_traces.csv", trace_csv(samples));
  dir.finalize();
  return 0;
}

int cmd_analyze(const CommandOptions& opts) {
  RunConfig cfg = load_resolved(opts);
  if (!cfg.analyze || cfg.analyze->sample_sets.empty()) {
    throw Error("analyze: config has no analyze.sample_sets");
  }
  Pipeline pipe = build_pipeline(cfg);
  RunDir dir = RunDir::create(opts.out_dir);
  dir.write_text("resolved_config.json", serialize_config(cfg));

  EncoderPair pair = EncoderPair::fresh(cfg.encoder, static_cast<uint64_t>(cfg.seed));
  ConceptSpace gt = build_space(pair.original, pipe.spec.gt_prompts, "gt");
  double threshold = resolve_threshold(cfg, pair.original, pipe.spec);

  json sets = json::array();
  for (const auto& ref : cfg.analyze->sample_sets) {
    Eigen::MatrixXd pts = read_matrix(ref.path);
    if (pts.rows() < 1) throw Error("analyze: empty sample dump " + ref.path);
    if (pts.cols() != gt.dim()) {
      throw Error("analyze: dimension mismatch in " + ref.path);
    }
    ConceptSpace adv(ref.label, std::move(pts));
    FitReport rep = fit_report(gt, adv, threshold, cfg.analyze->pca_on_union);
    write_plot_csv(dir.file("plot_" + ref.label + ".csv"), rep);
    sets.push_back({{"label", ref.label},
                    {"sample_count", rep.sample_count},
                    {"cd", rep.cd},
                    {"toy_asr", rep.toy_asr},
                    {"absent_metrics", rep.absent_metrics}});
  }

  json report;
  report["schema"] = "sgrace-fit-report/v1";
  report["concept"] = cfg.concept_name;
  report["seed"] = cfg.seed;
  report["config_hash"] = config_hash(cfg);
  report["gt_count"] = gt.size();
  report["detector_threshold"] = threshold;
  report["sets"] = sets;
  dir.write_text("report.json", report.dump(2) + "\n");
  dir.finalize();
  return 0;
}

int cmd_eval(const CommandOptions& opts, std::ostream& out) {
  RunConfig cfg = load_resolved(opts);
  Pipeline pipe = build_pipeline(cfg);
  RunDir dir = RunDir::create(opts.out_dir);
  dir.write_text("resolved_config.json", serialize_config(cfg));

  EncoderPair pair = EncoderPair::fresh(cfg.encoder, static_cast<uint64_t>(cfg.seed));
  if (cfg.eval && cfg.eval->checkpoint) {
    pair.current.set_params(load_checkpoint(*cfg.eval->checkpoint, cfg.encoder));
  }

  double threshold = resolve_threshold(cfg, pair.original, pipe.spec);
  EvalReport report = evaluate_erasure(pair, pipe.spec, threshold);

  out << "toy_asr " << report.toy_asr << "\n"
      << "target_drift " << report.target_drift << "\n"
      << "anchor_drift " << report.anchor_drift << "\n";

  json j = eval_json(report);
  j["schema"] = "sgrace-eval/v1";
  j["concept"] = cfg.concept_name;
  j["seed"] = cfg.seed;
  j["config_hash"] = config_hash(cfg);
  dir.write_text("eval.json", j.dump(2) + "\n");
  dir.finalize();
  return 0;
}

int cmd_render_prompts(const CommandOptions& opts, std::ostream& out) {
  RunConfig cfg = load_resolved(opts);
  auto [relevant, unrelated] =
      render_llm_prompts(cfg.target_prompt, cfg.relevant_pool_size, cfg.unrelated_pool_size);
  out << relevant << "\n\n" << unrelated << "\n";
  if (!opts.out_dir.empty()) {
    RunDir dir = RunDir::create(opts.out_dir);
    dir.write_text("prompts.txt", relevant + "\n\n" + unrelated + "\n");
    dir.finalize();
  }
  return 0;
}

}  // namespace sgrace
