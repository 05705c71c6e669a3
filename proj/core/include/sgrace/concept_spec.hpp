#pragma once

#include <string>
#include <vector>

#include "sgrace/config.hpp"
#include "sgrace/keywords.hpp"
#include "sgrace/rng.hpp"
#include "sgrace/tokenizer.hpp"
#include "sgrace/types.hpp"

namespace sgrace {

// Everything the pipeline needs to know about one erasure target: the prompt,
// the keyword pools in token form, and the ground-truth concept space prompts.
struct ConceptSpec {
  std::string name;
  TokenSequence target_prompt;
  std::vector<TokenSequence> relevant_keywords;
  std::vector<TokenSequence> unrelated_keywords;
  std::vector<std::string> gt_prompt_text;
  std::vector<TokenSequence> gt_prompts;
};

// Ground-truth prompts are seeded template expansions over the relevant pool
// ("a photo of {keyword}", "{keyword} scene", ...).
ConceptSpec build_concept_spec(const RunConfig& cfg, const KeywordPool& pool, Rng& rng);

}  // namespace sgrace
