#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgrace/config.hpp"
#include "sgrace/diffusion.hpp"
#include "sgrace/encoder.hpp"
#include "sgrace/keywords.hpp"

namespace sgrace {

// A soft prompt c' = c + delta under optimization, with provenance.
struct AdversarialSample {
  SoftPrompt soft_prompt;        // c'
  Eigen::MatrixXd base;          // c, the initialization point
  std::vector<std::string> seed_keywords;
  int cycle_index = 0;
  std::vector<double> loss_trace;  // length attack_steps + 1 after optimization

  Eigen::MatrixXd delta() const { return soft_prompt.embeddings - base; }
};

// Supplies the (z_t, t, n) batch for each attack step.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual std::vector<NoisySample> next_batch(Rng& rng) = 0;
};

// Default source: clean latents from the concept's planted cluster, noised at
// a uniformly drawn timestep in [1, t_max].
class ClusterBatchSource final : public BatchSource {
 public:
  ClusterBatchSource(LatentCluster cluster, NoiseSchedule schedule, int batch_size)
      : cluster_(std::move(cluster)), schedule_(schedule), batch_size_(batch_size) {}

  std::vector<NoisySample> next_batch(Rng& rng) override;

 private:
  LatentCluster cluster_;
  NoiseSchedule schedule_;
  int batch_size_;
};

// Replays the same batch every step; used by the brute-force oracles.
class FixedBatchSource final : public BatchSource {
 public:
  explicit FixedBatchSource(std::vector<NoisySample> batch) : batch_(std::move(batch)) {}
  std::vector<NoisySample> next_batch(Rng&) override { return batch_; }

 private:
  std::vector<NoisySample> batch_;
};

// Draws m keywords i.i.d. uniform with replacement from the relevant pool,
// concatenates, tokenizes and embeds. delta starts at zero, so c' = c.
AdversarialSample init_sample(const KeywordPool& pool, const TextEncoder& enc, int m,
                              Rng& rng);

// Random-token initialization of the same length a keyword draw would give
// (the LLM-Init ablation). seed_keywords is left empty.
AdversarialSample init_sample_random(const KeywordPool& pool, const TextEncoder& enc, int m,
                                     Rng& rng);

struct AttackObjectiveOptions {
  bool use_sga_term = true;
  double sga_weight = 1.0;
  LossOn loss_on = LossOn::pooled;
};

struct AttackObjective {
  double loss = 0.0;
  double l_diffusion = 0.0;  // Eq-style L1: noise-prediction error
  double l_semantic = 0.0;   // proximity of c' to the target in concept space
  Eigen::MatrixXd grad;      // dLoss/dc'
};

// loss = diffusion_loss(den, batch, pool(T_theta(c'))) +
//        sga_weight * || pool(T_theta(c')) - pool(T(p)) ||^2,
// with the second term dropped when use_sga_term is false.
AttackObjective attack_objective(const EncoderPair& pair, const NoisePredictor& den,
                                 const AdversarialSample& sample, const TokenSequence& target,
                                 std::span<const NoisySample> batch,
                                 const AttackObjectiveOptions& opts = {});

struct AttackRunOptions {
  int steps = 10;
  double lr = 5e-3;
  std::optional<double> epsilon_bound;  // l-inf radius for delta, off by default
  AttackObjectiveOptions objective;
};

// Plain gradient descent on c', resampling the batch every step. The loss
// trace records the objective before each step plus a final evaluation.
AdversarialSample run_attack(const EncoderPair& pair, const NoisePredictor& den,
                             BatchSource& batches, AdversarialSample sample,
                             const TokenSequence& target, const AttackRunOptions& opts,
                             Rng& rng);

// The perturbation-only baseline: minimizes the diffusion term alone over
// delta with an l-inf projection at radius epsilon.
AdversarialSample race_attack(const EncoderPair& pair, const NoisePredictor& den,
                              BatchSource& batches, AdversarialSample sample, double epsilon,
                              int steps, double lr, Rng& rng);

// Projection of delta onto the l-inf ball of radius epsilon (idempotent).
Eigen::MatrixXd project_linf(const Eigen::MatrixXd& delta, double epsilon);

}  // namespace sgrace
