#include "sgrace/run_io.hpp"

#include <fstream>
#include <vector>

#include <json.hpp>

#include "sgrace/hash.hpp"
#include "sgrace/matrix_io.hpp"

namespace sgrace {

using nlohmann::json;

uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for hashing: " + path.string());
  uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
    h = fnv1a64(std::string_view(buf, static_cast<size_t>(f.gcount())), h);
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool RunDir::is_complete(const std::filesystem::path& root) {
  auto manifest = root / "manifest.json";
  if (!std::filesystem::exists(manifest)) return false;
  std::ifstream f(manifest);
  if (!f) return false;
  try {
    json j;
    f >> j;
    return j.value("complete", false);
  } catch (const json::exception&) {
    return false;
  }
}

RunDir RunDir::create(const std::filesystem::path& root) {
  if (is_complete(root)) {
    throw Error("refusing to overwrite completed run directory: " + root.string());
  }
  std::filesystem::create_directories(root);
  return RunDir(root);
}

std::filesystem::path RunDir::file(const std::string& relative) const {
  std::filesystem::path p = root_ / relative;
  std::filesystem::create_directories(p.parent_path());
  return p;
}

void RunDir::write_text(const std::string& relative, const std::string& content) const {
  std::filesystem::path p = file(relative);
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
  if (!f) throw Error("write failed: " + p.string());
}

void RunDir::finalize() const {
  json artifacts = json::array();
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root_)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    json a;
    a["path"] = std::filesystem::relative(p, root_).generic_string();
    a["bytes"] = std::filesystem::file_size(p);
    a["fnv64"] = hex64(fnv1a_file(p));
    artifacts.push_back(a);
  }
  json manifest;
  manifest["schema"] = "sgrace-manifest/v1";
  manifest["complete"] = true;
  manifest["artifacts"] = artifacts;
  write_text("manifest.json", manifest.dump(2) + "\n");
}

void write_checkpoint(const std::filesystem::path& base, const TextEncoder& enc,
                      const CheckpointMeta& meta) {
  Eigen::VectorXd theta = enc.get_params();
  write_matrix(base.string() + ".sgrc",
               Eigen::Map<const Eigen::MatrixXd>(theta.data(), 1, theta.size()));
  json j;
  j["schema"] = "sgrace-checkpoint/v1";
  j["architecture"] = {{"vocab", meta.arch.vocab_size}, {"dim", meta.arch.dim},
                       {"layers", meta.arch.layers},    {"hidden", meta.arch.hidden},
                       {"max_seq_len", meta.arch.max_seq_len},
                       {"emb_init", meta.arch.emb_init},
                       {"weight_init", meta.arch.weight_init}};
  j["step"] = meta.step;
  j["config_hash"] = meta.config_hash;
  j["concept"] = meta.concept_name;
  j["seed"] = meta.seed;
  std::ofstream f(base.string() + ".json", std::ios::trunc);
  if (!f) throw Error("cannot write checkpoint metadata: " + base.string() + ".json");
  f << j.dump(2) << "\n";
}

Eigen::VectorXd load_checkpoint(const std::filesystem::path& base,
                                const EncoderArch& expected_arch) {
  std::filesystem::path meta_path = base.string() + ".json";
  std::ifstream f(meta_path);
  if (!f) throw Error("checkpoint metadata missing: " + meta_path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error("checkpoint metadata " + meta_path.string() + ": " + e.what());
  }
  const json& a = j.at("architecture");
  if (a.at("vocab").get<uint32_t>() != expected_arch.vocab_size ||
      a.at("dim").get<int>() != expected_arch.dim ||
      a.at("layers").get<int>() != expected_arch.layers ||
      a.at("hidden").get<int>() != expected_arch.hidden) {
    throw Error("checkpoint architecture mismatch: " + base.string());
  }
  Eigen::MatrixXd m = read_matrix(base.string() + ".sgrc");
  if (m.rows() != 1) throw Error("checkpoint dump must be 1 x P: " + base.string());
  return m.row(0).transpose();
}

}  // namespace sgrace
