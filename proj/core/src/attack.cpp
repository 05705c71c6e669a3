#include "sgrace/attack.hpp"

#include <cmath>
#include <sstream>

namespace sgrace {

std::vector<NoisySample> ClusterBatchSource::next_batch(Rng& rng) {
  std::vector<NoisySample> batch;
  batch.reserve(static_cast<size_t>(batch_size_));
  for (int i = 0; i < batch_size_; ++i) {
    Eigen::VectorXd z0 = cluster_.draw(rng);
    int t = static_cast<int>(rng.uniform_int(1, schedule_.t_max));
    batch.push_back(forward_noise(schedule_, z0, t, rng));
  }
  return batch;
}

AdversarialSample init_sample(const KeywordPool& pool, const TextEncoder& enc, int m,
                              Rng& rng) {
  if (pool.relevant.empty()) throw Error("init_sample: empty relevant pool");
  if (m < 1) throw Error("init_sample: m must be >= 1");
  std::vector<std::string> picks;
  picks.reserve(static_cast<size_t>(m));
  std::string joined;
  for (int j = 0; j < m; ++j) {
    const std::string& k =
        pool.relevant[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(pool.relevant.size()) - 1))];
    picks.push_back(k);
    if (!joined.empty()) joined += ' ';
    joined += k;
  }
  TokenSequence toks = enc.tokenizer().tokenize(joined);
  SoftPrompt sp = embed_tokens(enc, toks);
  AdversarialSample sample;
  sample.base = sp.embeddings;
  sample.soft_prompt = std::move(sp);
  sample.seed_keywords = std::move(picks);
  return sample;
}

AdversarialSample init_sample_random(const KeywordPool& pool, const TextEncoder& enc, int m,
                                     Rng& rng) {
  if (pool.relevant.empty()) throw Error("init_sample: empty relevant pool");
  if (m < 1) throw Error("init_sample: m must be >= 1");
  // Match the length a keyword draw would produce, then replace every id with
  // a uniform random token.
  std::string joined;
  for (int j = 0; j < m; ++j) {
    const std::string& k =
        pool.relevant[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(pool.relevant.size()) - 1))];
    if (!joined.empty()) joined += ' ';
    joined += k;
  }
  size_t len = enc.tokenizer().tokenize(joined).ids.size();
  TokenSequence toks;
  toks.ids.reserve(len);
  for (size_t i = 0; i < len; ++i) {
    toks.ids.push_back(static_cast<TokenId>(
        rng.uniform_int(0, static_cast<int64_t>(enc.arch().vocab_size) - 1)));
  }
  SoftPrompt sp = embed_tokens(enc, toks);
  AdversarialSample sample;
  sample.base = sp.embeddings;
  sample.soft_prompt = std::move(sp);
  return sample;
}

AttackObjective attack_objective(const EncoderPair& pair, const NoisePredictor& den,
                                 const AdversarialSample& sample, const TokenSequence& target,
                                 std::span<const NoisySample> batch,
                                 const AttackObjectiveOptions& opts) {
  const Eigen::MatrixXd& cprime = sample.soft_prompt.embeddings;
  EncodeTrace trace = encode_traced(pair.current, cprime);
  Eigen::Index L = cprime.rows();
  double inv_l = 1.0 / static_cast<double>(L);

  Eigen::VectorXd cond = pool(trace.output).vector;
  auto [l_diff, d_cond] = diffusion_loss_grad(den, batch, cond);

  // dLoss/dHidden from the diffusion term: pooling broadcasts d_cond / L.
  Eigen::MatrixXd d_hidden = Eigen::MatrixXd::Zero(L, cprime.cols());
  d_hidden.rowwise() = (inv_l * d_cond).transpose();

  AttackObjective out;
  out.l_diffusion = l_diff;
  out.loss = l_diff;

  if (opts.use_sga_term) {
    Eigen::MatrixXd target_hidden =
        encode(pair.original, embed_tokens(pair.original, target).embeddings);
    SeqDistance sem = seq_sq_distance(trace.output, target_hidden, opts.loss_on);
    out.l_semantic = sem.value;
    out.loss += opts.sga_weight * sem.value;
    d_hidden += opts.sga_weight * sem.d_lhs;
  }

  encode_vjp(pair.current, trace, d_hidden, &out.grad, nullptr);
  return out;
}

namespace {

AdversarialSample descend(const EncoderPair& pair, const NoisePredictor& den,
                          BatchSource& batches, AdversarialSample sample,
                          const TokenSequence& target, const AttackRunOptions& opts,
                          Rng& rng) {
  if (opts.steps < 1) throw Error("run_attack: steps must be >= 1");
  sample.loss_trace.clear();
  sample.loss_trace.reserve(static_cast<size_t>(opts.steps) + 1);

  for (int step = 0; step < opts.steps; ++step) {
    std::vector<NoisySample> batch = batches.next_batch(rng);
    AttackObjective obj = attack_objective(pair, den, sample, target, batch, opts.objective);
    if (!std::isfinite(obj.loss)) {
      std::ostringstream msg;
      msg << "run_attack: non-finite loss at step " << step << " (diffusion=" << obj.l_diffusion
          << ", semantic=" << obj.l_semantic << ")";
      throw Error(msg.str());
    }
    sample.loss_trace.push_back(obj.loss);
    sample.soft_prompt.embeddings -= opts.lr * obj.grad;
    if (opts.epsilon_bound) {
      sample.soft_prompt.embeddings =
          sample.base + project_linf(sample.soft_prompt.embeddings - sample.base,
                                     *opts.epsilon_bound);
    }
  }

  std::vector<NoisySample> batch = batches.next_batch(rng);
  AttackObjective final_obj =
      attack_objective(pair, den, sample, target, batch, opts.objective);
  sample.loss_trace.push_back(final_obj.loss);
  return sample;
}

}  // namespace

AdversarialSample run_attack(const EncoderPair& pair, const NoisePredictor& den,
                             BatchSource& batches, AdversarialSample sample,
                             const TokenSequence& target, const AttackRunOptions& opts,
                             Rng& rng) {
  return descend(pair, den, batches, std::move(sample), target, opts, rng);
}

AdversarialSample race_attack(const EncoderPair& pair, const NoisePredictor& den,
                              BatchSource& batches, AdversarialSample sample, double epsilon,
                              int steps, double lr, Rng& rng) {
  if (epsilon < 0) throw Error("race_attack: epsilon must be >= 0");
  AttackRunOptions opts;
  opts.steps = steps;
  opts.lr = lr;
  opts.epsilon_bound = epsilon;
  opts.objective.use_sga_term = false;
  // Target is unused with the semantic term off.
  TokenSequence dummy;
  dummy.ids.push_back(0);
  return descend(pair, den, batches, std::move(sample), dummy, opts, rng);
}

Eigen::MatrixXd project_linf(const Eigen::MatrixXd& delta, double epsilon) {
  return delta.cwiseMax(-epsilon).cwiseMin(epsilon);
}

}  // namespace sgrace
