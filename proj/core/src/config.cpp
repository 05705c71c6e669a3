#include "sgrace/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgrace/hash.hpp"

namespace sgrace {

using nlohmann::json;

const std::map<std::string, ConceptDefaults>& concept_defaults() {
  // alpha/beta per concept; N=50,M=50 for NSFW and object erasure,
  // N=10,M=50 for artist styles.
  static const std::map<std::string, ConceptDefaults> table = {
      {"Nudity", {5.0 / 6.0, 1.0, 50, 50, "nsfw"}},
      {"Violence", {10.0 / 11.0, 12.0 / 11.0, 50, 50, "nsfw"}},
      {"Illegal Activity", {10.0 / 11.0, 12.0 / 11.0, 50, 50, "nsfw"}},
      {"Van Gogh", {5.0 / 6.0, 5.0 / 6.0, 10, 50, "artist"}},
      {"Picasso", {10.0 / 11.0, 20.0 / 11.0, 10, 50, "artist"}},
      {"Church", {1.0, 1.0, 50, 50, "object"}},
      {"Parachute", {5.0 / 6.0, 5.0 / 6.0, 50, 50, "object"}},
      {"Garbage Truck", {2.0 / 3.0, 1.0, 50, 50, "object"}},
      {"Tench", {2.0 / 3.0, 1.0, 50, 50, "object"}},
  };
  return table;
}

namespace {

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error("config: field '" + field + "': " + why);
}

void require_known_keys(const json& obj, const std::string& section,
                        std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(section.empty() ? it.key() : section + "." + it.key(), "unknown key");
  }
}

template <typename T>
void read_field(const json& obj, const std::string& section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(section.empty() ? key : section + "." + key, e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const std::string& section, const char* key,
              std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read_field(obj, section, key, v);
  out = v;
}

}  // namespace

std::optional<std::string> canonical_concept(const std::string& name) {
  std::string low = to_lower(name);
  for (const auto& [canon, _] : concept_defaults()) {
    if (to_lower(canon) == low) return canon;
  }
  return std::nullopt;
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: parse failure: ") + e.what());
  }
  if (!root.is_object()) throw Error("config: top level must be an object");

  require_known_keys(root, "",
                     {"concept", "target_prompt", "seed", "schedule", "optim", "loss",
                      "pool", "encoder", "detector_threshold", "llm", "attack", "analyze",
                      "eval"});

  RunConfig cfg;
  read_field(root, "", "concept", cfg.concept_name);
  if (cfg.concept_name.empty()) fail("concept", "required");

  bool alpha_set = false, beta_set = false, n_set = false, m_set = false;

  if (auto canon = canonical_concept(cfg.concept_name)) {
    cfg.concept_name = *canon;
    const auto& d = concept_defaults().at(*canon);
    cfg.alpha = d.alpha;
    cfg.beta = d.beta;
    cfg.relevant_pool_size = d.relevant_size;
    cfg.unrelated_pool_size = d.unrelated_size;
    alpha_set = beta_set = n_set = m_set = true;
  }
  cfg.target_prompt = to_lower(cfg.concept_name);
  read_field(root, "", "target_prompt", cfg.target_prompt);
  read_field(root, "", "seed", cfg.seed);

  if (root.contains("schedule")) {
    const json& s = root["schedule"];
    require_known_keys(s, "schedule",
                       {"total_steps", "cycle_length", "samples_per_cycle", "attack_steps",
                        "total_samples"});
    read_field(s, "schedule", "total_steps", cfg.total_steps);
    read_field(s, "schedule", "cycle_length", cfg.cycle_length);
    read_field(s, "schedule", "samples_per_cycle", cfg.samples_per_cycle);
    read_field(s, "schedule", "attack_steps", cfg.attack_steps);
    read_opt(s, "schedule", "total_samples", cfg.total_samples);
  }

  if (root.contains("optim")) {
    const json& s = root["optim"];
    require_known_keys(s, "optim",
                       {"lr_erase", "lr_attack", "attack_batch", "epsilon_bound"});
    read_field(s, "optim", "lr_erase", cfg.lr_erase);
    read_field(s, "optim", "lr_attack", cfg.lr_attack);
    read_field(s, "optim", "attack_batch", cfg.attack_batch);
    read_opt(s, "optim", "epsilon_bound", cfg.epsilon_bound);
  }

  if (root.contains("loss")) {
    const json& s = root["loss"];
    require_known_keys(s, "loss", {"alpha", "beta", "loss_on", "sga_weight", "ablation"});
    if (s.contains("alpha")) {
      read_field(s, "loss", "alpha", cfg.alpha);
      alpha_set = true;
    }
    if (s.contains("beta")) {
      read_field(s, "loss", "beta", cfg.beta);
      beta_set = true;
    }
    if (s.contains("loss_on")) {
      std::string mode = s["loss_on"].get<std::string>();
      if (mode == "pooled") cfg.loss_on = LossOn::pooled;
      else if (mode == "full_sequence") cfg.loss_on = LossOn::full_sequence;
      else fail("loss.loss_on", "must be 'pooled' or 'full_sequence'");
    }
    read_field(s, "loss", "sga_weight", cfg.sga_weight);
    if (s.contains("ablation")) {
      const json& a = s["ablation"];
      require_known_keys(a, "loss.ablation",
                         {"use_llm_init", "use_sga_term", "use_l_sim", "use_l_anc"});
      read_field(a, "loss.ablation", "use_llm_init", cfg.ablation.use_llm_init);
      read_field(a, "loss.ablation", "use_sga_term", cfg.ablation.use_sga_term);
      read_field(a, "loss.ablation", "use_l_sim", cfg.ablation.use_l_sim);
      read_field(a, "loss.ablation", "use_l_anc", cfg.ablation.use_l_anc);
    }
  }

  if (root.contains("pool")) {
    const json& s = root["pool"];
    require_known_keys(s, "pool",
                       {"source", "path", "relevant_size", "unrelated_size", "concat_count",
                        "anchor_batch", "gt_prompts"});
    if (s.contains("source")) {
      std::string src = s["source"].get<std::string>();
      if (src == "builtin") cfg.pool_source = PoolSource::builtin;
      else if (src == "file") cfg.pool_source = PoolSource::file;
      else if (src == "llm") cfg.pool_source = PoolSource::llm;
      else fail("pool.source", "must be 'builtin', 'file' or 'llm'");
    }
    read_opt(s, "pool", "path", cfg.pool_path);
    if (s.contains("relevant_size")) {
      read_field(s, "pool", "relevant_size", cfg.relevant_pool_size);
      n_set = true;
    }
    if (s.contains("unrelated_size")) {
      read_field(s, "pool", "unrelated_size", cfg.unrelated_pool_size);
      m_set = true;
    }
    read_field(s, "pool", "concat_count", cfg.concat_count);
    read_field(s, "pool", "anchor_batch", cfg.anchor_batch);
    read_field(s, "pool", "gt_prompts", cfg.gt_prompt_count);
  }

  if (root.contains("encoder")) {
    const json& s = root["encoder"];
    require_known_keys(s, "encoder",
                       {"vocab", "dim", "layers", "hidden", "max_seq_len", "emb_init",
                        "weight_init"});
    read_field(s, "encoder", "vocab", cfg.encoder.vocab_size);
    read_field(s, "encoder", "dim", cfg.encoder.dim);
    read_field(s, "encoder", "layers", cfg.encoder.layers);
    read_field(s, "encoder", "hidden", cfg.encoder.hidden);
    read_field(s, "encoder", "max_seq_len", cfg.encoder.max_seq_len);
    read_field(s, "encoder", "emb_init", cfg.encoder.emb_init);
    read_field(s, "encoder", "weight_init", cfg.encoder.weight_init);
  }

  read_opt(root, "", "detector_threshold", cfg.detector_threshold);

  if (root.contains("llm") && !root["llm"].is_null()) {
    const json& s = root["llm"];
    require_known_keys(s, "llm", {"base_url", "model", "credential_env"});
    LlmEndpoint ep;
    read_field(s, "llm", "base_url", ep.base_url);
    read_field(s, "llm", "model", ep.model);
    read_field(s, "llm", "credential_env", ep.credential_env);
    if (ep.base_url.empty()) fail("llm.base_url", "required when llm section present");
    cfg.llm = ep;
  }

  if (root.contains("attack") && !root["attack"].is_null()) {
    const json& s = root["attack"];
    require_known_keys(s, "attack", {"method", "num_samples", "race_epsilon", "checkpoint"});
    AttackCmdConfig ac;
    read_field(s, "attack", "method", ac.method);
    if (ac.method != "sga" && ac.method != "race") {
      fail("attack.method", "must be 'sga' or 'race'");
    }
    read_field(s, "attack", "num_samples", ac.num_samples);
    if (ac.num_samples < 1) fail("attack.num_samples", "must be positive");
    read_field(s, "attack", "race_epsilon", ac.race_epsilon);
    if (ac.race_epsilon < 0) fail("attack.race_epsilon", "must be >= 0");
    read_opt(s, "attack", "checkpoint", ac.checkpoint);
    cfg.attack = std::move(ac);
  }

  if (root.contains("analyze") && !root["analyze"].is_null()) {
    const json& s = root["analyze"];
    require_known_keys(s, "analyze", {"sample_sets", "pca_on_union"});
    AnalyzeCmdConfig an;
    if (s.contains("sample_sets")) {
      for (const auto& item : s["sample_sets"]) {
        require_known_keys(item, "analyze.sample_sets[]", {"label", "path"});
        SampleSetRef ref;
        read_field(item, "analyze.sample_sets[]", "label", ref.label);
        read_field(item, "analyze.sample_sets[]", "path", ref.path);
        if (ref.label.empty() || ref.path.empty()) {
          fail("analyze.sample_sets[]", "label and path required");
        }
        an.sample_sets.push_back(std::move(ref));
      }
    }
    read_field(s, "analyze", "pca_on_union", an.pca_on_union);
    cfg.analyze = std::move(an);
  }

  if (root.contains("eval") && !root["eval"].is_null()) {
    const json& s = root["eval"];
    require_known_keys(s, "eval", {"checkpoint"});
    EvalCmdConfig ev;
    read_opt(s, "eval", "checkpoint", ev.checkpoint);
    cfg.eval = std::move(ev);
  }

  if (!alpha_set || !beta_set) {
    fail("loss.alpha/beta", "unknown concept '" + cfg.concept_name +
                                "' has no defaults; alpha and beta must be given");
  }
  if (!n_set || !m_set) {
    fail("pool.relevant_size/unrelated_size",
         "unknown concept '" + cfg.concept_name + "' has no defaults; pool sizes required");
  }

  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("config: cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& cfg) {
  if (cfg.alpha < 0) fail("loss.alpha", "must be non-negative");
  if (cfg.beta < 0) fail("loss.beta", "must be non-negative");
  if (cfg.total_steps < 0) fail("schedule.total_steps", "must be >= 0");
  if (cfg.cycle_length <= 0) fail("schedule.cycle_length", "must be positive");
  if (cfg.samples_per_cycle <= 0) fail("schedule.samples_per_cycle", "must be positive");
  if (cfg.attack_steps <= 0) fail("schedule.attack_steps", "must be positive");
  if (cfg.total_steps % cfg.cycle_length != 0) {
    fail("schedule.cycle_length", "must divide total_steps (" +
                                      std::to_string(cfg.total_steps) + " % " +
                                      std::to_string(cfg.cycle_length) + " != 0)");
  }
  int64_t advertised =
      static_cast<int64_t>(cfg.total_steps / cfg.cycle_length) * cfg.samples_per_cycle;
  if (cfg.total_samples && *cfg.total_samples != advertised) {
    fail("schedule.total_samples",
         "advertised " + std::to_string(*cfg.total_samples) + " but schedule yields " +
             std::to_string(advertised));
  }
  if (cfg.lr_erase <= 0) fail("optim.lr_erase", "must be positive");
  if (cfg.lr_attack < 0) fail("optim.lr_attack", "must be non-negative");
  if (cfg.attack_batch <= 0) fail("optim.attack_batch", "must be positive");
  if (cfg.epsilon_bound && *cfg.epsilon_bound <= 0) {
    fail("optim.epsilon_bound", "must be positive when set");
  }
  if (cfg.sga_weight < 0) fail("loss.sga_weight", "must be non-negative");
  if (cfg.concat_count <= 0) fail("pool.concat_count", "must be positive");
  if (cfg.relevant_pool_size <= 0) fail("pool.relevant_size", "must be positive");
  if (cfg.unrelated_pool_size <= 0) fail("pool.unrelated_size", "must be positive");
  if (cfg.anchor_batch <= 0) fail("pool.anchor_batch", "must be positive");
  if (cfg.gt_prompt_count <= 0) fail("pool.gt_prompts", "must be positive");
  if (cfg.encoder.vocab_size == 0) fail("encoder.vocab", "must be positive");
  if (cfg.encoder.dim <= 0) fail("encoder.dim", "must be positive");
  if (cfg.encoder.layers < 0) fail("encoder.layers", "must be >= 0");
  if (cfg.encoder.hidden <= 0) fail("encoder.hidden", "must be positive");
  if (cfg.encoder.max_seq_len <= 0) fail("encoder.max_seq_len", "must be positive");
  if (cfg.detector_threshold && *cfg.detector_threshold < 0) {
    fail("detector_threshold", "must be non-negative when set");
  }
  if (cfg.pool_source == PoolSource::file && !cfg.pool_path) {
    fail("pool.path", "required when pool.source is 'file'");
  }
  if (cfg.pool_source == PoolSource::llm && !cfg.llm) {
    fail("llm", "endpoint section required when pool.source is 'llm'");
  }
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["concept"] = cfg.concept_name;
  root["target_prompt"] = cfg.target_prompt;
  root["seed"] = cfg.seed;
  json& sched = root["schedule"];
  sched["total_steps"] = cfg.total_steps;
  sched["cycle_length"] = cfg.cycle_length;
  sched["samples_per_cycle"] = cfg.samples_per_cycle;
  sched["attack_steps"] = cfg.attack_steps;
  if (cfg.total_samples) sched["total_samples"] = *cfg.total_samples;
  json& optim = root["optim"];
  optim["lr_erase"] = cfg.lr_erase;
  optim["lr_attack"] = cfg.lr_attack;
  optim["attack_batch"] = cfg.attack_batch;
  if (cfg.epsilon_bound) optim["epsilon_bound"] = *cfg.epsilon_bound;
  json& loss = root["loss"];
  loss["alpha"] = cfg.alpha;
  loss["beta"] = cfg.beta;
  loss["loss_on"] = cfg.loss_on == LossOn::pooled ? "pooled" : "full_sequence";
  loss["sga_weight"] = cfg.sga_weight;
  json& abl = loss["ablation"];
  abl["use_llm_init"] = cfg.ablation.use_llm_init;
  abl["use_sga_term"] = cfg.ablation.use_sga_term;
  abl["use_l_sim"] = cfg.ablation.use_l_sim;
  abl["use_l_anc"] = cfg.ablation.use_l_anc;
  json& pool = root["pool"];
  pool["source"] = cfg.pool_source == PoolSource::builtin ? "builtin"
                   : cfg.pool_source == PoolSource::file  ? "file"
                                                          : "llm";
  if (cfg.pool_path) pool["path"] = *cfg.pool_path;
  pool["relevant_size"] = cfg.relevant_pool_size;
  pool["unrelated_size"] = cfg.unrelated_pool_size;
  pool["concat_count"] = cfg.concat_count;
  pool["anchor_batch"] = cfg.anchor_batch;
  pool["gt_prompts"] = cfg.gt_prompt_count;
  json& enc = root["encoder"];
  enc["vocab"] = cfg.encoder.vocab_size;
  enc["dim"] = cfg.encoder.dim;
  enc["layers"] = cfg.encoder.layers;
  enc["hidden"] = cfg.encoder.hidden;
  enc["max_seq_len"] = cfg.encoder.max_seq_len;
  enc["emb_init"] = cfg.encoder.emb_init;
  enc["weight_init"] = cfg.encoder.weight_init;
  if (cfg.detector_threshold) root["detector_threshold"] = *cfg.detector_threshold;
  if (cfg.llm) {
    json& l = root["llm"];
    l["base_url"] = cfg.llm->base_url;
    l["model"] = cfg.llm->model;
    l["credential_env"] = cfg.llm->credential_env;
  }
  if (cfg.attack) {
    json& a = root["attack"];
    a["method"] = cfg.attack->method;
    a["num_samples"] = cfg.attack->num_samples;
    a["race_epsilon"] = cfg.attack->race_epsilon;
    if (cfg.attack->checkpoint) a["checkpoint"] = *cfg.attack->checkpoint;
  }
  if (cfg.analyze) {
    json& a = root["analyze"];
    a["sample_sets"] = json::array();
    for (const auto& ref : cfg.analyze->sample_sets) {
      a["sample_sets"].push_back({{"label", ref.label}, {"path", ref.path}});
    }
    a["pca_on_union"] = cfg.analyze->pca_on_union;
  }
  if (cfg.eval) {
    json& e = root["eval"];
    if (cfg.eval->checkpoint) e["checkpoint"] = *cfg.eval->checkpoint;
    else e["checkpoint"] = nullptr;
  }
  return root.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  uint64_t h = fnv1a64(serialize_config(cfg));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace sgrace
