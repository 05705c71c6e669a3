#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgrace/commands.hpp"
#include "sgrace/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semantics-guided adversarial concept erasure toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int64_t seed = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* cmd, bool out_required) {
    cmd->add_option("--config", config_path, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", out_dir, "Output run directory");
    if (out_required) out->required();
    cmd->add_option("--seed", seed, "Seed override")->each([&](const std::string&) {
      seed_given = true;
    });
  };

  auto* erase = app.add_subcommand("erase", "Run the adversarial erasure training loop");
  add_common(erase, true);
  auto* attack = app.add_subcommand("attack", "Generate and optimize adversarial samples");
  add_common(attack, true);
  auto* analyze = app.add_subcommand("analyze", "Compare sample sets against the GT space");
  add_common(analyze, true);
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint with the toy detector");
  add_common(eval, true);
  auto* render =
      app.add_subcommand("render-prompts", "Print the keyword-request prompt templates");
  add_common(render, false);

  CLI11_PARSE(app, argc, argv);

  sgrace::CommandOptions opts;
  opts.config_path = config_path;
  opts.out_dir = out_dir;
  if (seed_given) opts.seed_override = seed;

  try {
    if (erase->parsed()) return sgrace::cmd_erase(opts);
    if (attack->parsed()) return sgrace::cmd_attack(opts);
    if (analyze->parsed()) return sgrace::cmd_analyze(opts);
    if (eval->parsed()) return sgrace::cmd_eval(opts, std::cout);
    if (render->parsed()) return sgrace::cmd_render_prompts(opts, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
