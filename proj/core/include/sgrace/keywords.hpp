#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sgrace/types.hpp"

namespace sgrace {

enum class PoolProvenance { file, llm, builtin };

struct KeywordPool {
  std::string concept_name;
  std::vector<std::string> relevant;   // size N
  std::vector<std::string> unrelated;  // size M
  PoolProvenance provenance = PoolProvenance::builtin;
};

// Disjointness (case-insensitive), no unrelated entry equal to the concept
// itself, and minimum sizes. Throws on violation.
void validate_pool(const KeywordPool& pool, int min_relevant, int min_unrelated);

// Curated pools for the nine supported concepts; available offline.
KeywordPool builtin_pool(const std::string& concept_name);
bool has_builtin_pool(const std::string& concept_name);

// Loads a pool from disk and validates it against the configured sizes.
// Accepts either a JSON file {"relevant": [...], "unrelated": [...]} or a
// directory holding relevant.txt / unrelated.txt (UTF-8, one keyword per
// line, '#' comments).
KeywordPool load_pool(const std::filesystem::path& path, const std::string& concept_name,
                      int min_relevant, int min_unrelated);

// The two keyword-request prompts with N, M and the concept substituted.
// First: N keywords describing the concept. Second: M co-occurring but
// unrelated keywords.
std::pair<std::string, std::string> render_llm_prompts(const std::string& concept_name,
                                                       int n, int m);

// Comma-separated response -> trimmed, deduplicated keyword list.
std::vector<std::string> parse_keyword_response(const std::string& raw);

}  // namespace sgrace
