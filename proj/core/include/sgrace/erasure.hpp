#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sgrace/attack.hpp"
#include "sgrace/concept_spec.hpp"

namespace sgrace {

struct ErasureOptions {
  double alpha = 1.0;
  double beta = 1.0;
  AblationFlags flags;
  LossOn loss_on = LossOn::pooled;
};

// Recorded values are the effective (post-ablation) terms, so
// l_sim - alpha * l_repel + beta * l_anchor always recombines to loss.
struct ErasureObjective {
  double loss = 0.0;
  double l_sim = 0.0;     // keep T_theta(c') near T(c')
  double l_repel = 0.0;   // distance of T_theta(c') from T(p), entering with -alpha
  double l_anchor = 0.0;  // keep unrelated samples fixed
  Eigen::VectorXd theta_grad;
};

ErasureObjective erasure_objective(const EncoderPair& pair,
                                   std::span<const AdversarialSample> samples,
                                   const TokenSequence& target,
                                   std::span<const TokenSequence> anchors,
                                   const ErasureOptions& opts);

struct TermHistory {
  std::vector<double> l_sim, l_repel, l_anchor, total;
};

struct ErasureState {
  EncoderPair pair;
  std::vector<AdversarialSample> samples;  // append-only across cycles
  int step = 0;
  int attack_phases = 0;
  TermHistory history;
  RunConfig config;
};

struct RunHooks {
  // Called after the last training step of each cycle (checkpointing).
  std::function<void(const ErasureState&, int completed_cycle)> on_cycle_end;
};

// Algorithm: at the start of every cycle, generate samples_per_cycle fresh
// adversarial samples against the current encoder and append them; then run
// cycle_length optimizer steps on theta with anchors redrawn every step.
ErasureState run_erasure(const ConceptSpec& cspec, const RunConfig& cfg,
                         const KeywordPool& pool, const NoisePredictor& den, Rng& rng,
                         const RunHooks& hooks = {});

struct EvalReport {
  double toy_asr = 0.0;       // fraction of GT prompts still inside the detector ball
  double target_drift = 0.0;  // || pool(T_theta(p)) - pool(T(p)) ||
  double anchor_drift = 0.0;  // mean of the same over unrelated keywords
  double threshold = 0.0;
  int gt_count = 0;
};

// The desk-scale surrogate detector: a GT prompt still "hits" the concept if
// its current-encoder embedding lies within `threshold` of the original
// encoder's GT centroid.
EvalReport evaluate_erasure(const EncoderPair& pair, const ConceptSpec& cspec,
                            double threshold);

// Default threshold: the maximum distance of an original-encoder GT embedding
// from the GT centroid, so a fresh pair scores toy-ASR exactly 1.
double default_detector_threshold(const TextEncoder& original, const ConceptSpec& cspec);

}  // namespace sgrace
