#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "sgrace/config.hpp"

namespace sgrace {

struct CommandOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<int64_t> seed_override;
};

// Each command is fully determined by the config file plus the seed. All of
// them create the output directory, drop the resolved config there, and
// finish by writing a manifest. Errors surface as sgrace::Error.
int cmd_erase(const CommandOptions& opts);
int cmd_attack(const CommandOptions& opts);
int cmd_analyze(const CommandOptions& opts);
int cmd_eval(const CommandOptions& opts, std::ostream& out);
int cmd_render_prompts(const CommandOptions& opts, std::ostream& out);

}  // namespace sgrace
