#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sgrace/config.hpp"
#include "sgrace/encoder.hpp"

namespace sgrace {

uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hex64(uint64_t v);

// One run, one directory. finalize() writes a manifest listing every artifact
// with its size and checksum; a directory whose manifest says complete=true
// is never silently overwritten.
class RunDir {
 public:
  static RunDir create(const std::filesystem::path& root);
  static bool is_complete(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path file(const std::string& relative) const;

  void write_text(const std::string& relative, const std::string& content) const;
  void finalize() const;

 private:
  explicit RunDir(std::filesystem::path root) : root_(std::move(root)) {}
  std::filesystem::path root_;
};

struct CheckpointMeta {
  EncoderArch arch;
  int step = 0;
  std::string config_hash;
  std::string concept_name;
  int64_t seed = 0;
};

// Writes <base>.sgrc (flat parameters as a 1 x P dump) and <base>.json
// (architecture descriptor, step count, config hash).
void write_checkpoint(const std::filesystem::path& base, const TextEncoder& enc,
                      const CheckpointMeta& meta);

// Loads the parameter dump and validates the sidecar against the expected
// architecture. Returns the flat parameter vector (32-bit file precision).
Eigen::VectorXd load_checkpoint(const std::filesystem::path& base,
                                const EncoderArch& expected_arch);

}  // namespace sgrace
