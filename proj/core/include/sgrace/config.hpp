#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgrace/encoder.hpp"
#include "sgrace/types.hpp"

namespace sgrace {

struct AblationFlags {
  bool use_llm_init = true;
  bool use_sga_term = true;
  bool use_l_sim = true;
  bool use_l_anc = true;

  bool operator==(const AblationFlags&) const = default;
};

enum class PoolSource { builtin, file, llm };

// Chat-completion endpoint descriptor. The credential is read from the named
// environment variable, never stored in the config.
struct LlmEndpoint {
  std::string base_url;
  std::string model;
  std::string credential_env = "SGRACE_LLM_KEY";

  bool operator==(const LlmEndpoint&) const = default;
};

// Settings for the standalone `attack` command.
struct AttackCmdConfig {
  std::string method = "sga";  // "sga" or "race"
  int num_samples = 32;
  double race_epsilon = 0.1;
  std::optional<std::string> checkpoint;  // attack an erased encoder

  bool operator==(const AttackCmdConfig&) const = default;
};

// Settings for the `analyze` command: labeled pooled-embedding dumps to
// compare against the ground-truth concept space.
struct SampleSetRef {
  std::string label;
  std::string path;

  bool operator==(const SampleSetRef&) const = default;
};

struct AnalyzeCmdConfig {
  std::vector<SampleSetRef> sample_sets;
  bool pca_on_union = true;

  bool operator==(const AnalyzeCmdConfig&) const = default;
};

struct EvalCmdConfig {
  std::optional<std::string> checkpoint;  // absent: evaluate the fresh pair

  bool operator==(const EvalCmdConfig&) const = default;
};

// One file fully determines a run, including the seed.
struct RunConfig {
  std::string concept_name;
  std::string target_prompt;  // defaults to the lowercased concept name

  double alpha = 1.0;
  double beta = 1.0;

  int total_steps = 200;
  int cycle_length = 50;
  int samples_per_cycle = 8;
  int attack_steps = 10;
  std::optional<int64_t> total_samples;  // advertised count; validated if set

  double lr_erase = 1e-5;
  double lr_attack = 5e-3;
  int attack_batch = 4;
  std::optional<double> epsilon_bound;  // off by default
  double sga_weight = 1.0;              // equal weighting of the two attack terms

  int concat_count = 3;       // keywords concatenated per adversarial sample
  int relevant_pool_size = 50;
  int unrelated_pool_size = 50;
  int anchor_batch = 8;
  int gt_prompt_count = 200;

  int64_t seed = 0;
  AblationFlags ablation;
  LossOn loss_on = LossOn::pooled;

  PoolSource pool_source = PoolSource::builtin;
  std::optional<std::string> pool_path;

  EncoderArch encoder;
  std::optional<double> detector_threshold;  // default: max GT radius
  std::optional<LlmEndpoint> llm;

  std::optional<AttackCmdConfig> attack;
  std::optional<AnalyzeCmdConfig> analyze;
  std::optional<EvalCmdConfig> eval;

  bool operator==(const RunConfig&) const = default;
};

// Per-concept defaults: loss weights and keyword-pool sizes.
struct ConceptDefaults {
  double alpha;
  double beta;
  int relevant_size;   // N
  int unrelated_size;  // M
  const char* category;
};

// The nine supported concepts, keyed by canonical name.
const std::map<std::string, ConceptDefaults>& concept_defaults();

// Canonical name lookup, case-insensitive ("garbage truck" -> "Garbage Truck").
std::optional<std::string> canonical_concept(const std::string& name);

// Parse + validate, filling unspecified fields with per-concept defaults.
// Violations are rejected with the field name, never clamped.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);  // canonical form
void validate_config(const RunConfig& cfg);

// FNV-1a of the canonical serialization, as fixed-width hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace sgrace
