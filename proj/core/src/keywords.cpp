#include "sgrace/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sgrace {

namespace {

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> read_keyword_lines(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("keyword file: cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

void validate_pool(const KeywordPool& pool, int min_relevant, int min_unrelated) {
  if (static_cast<int>(pool.relevant.size()) < min_relevant) {
    throw Error("keyword pool '" + pool.concept_name + "': " +
                std::to_string(pool.relevant.size()) + " relevant keywords, need >= " +
                std::to_string(min_relevant));
  }
  if (static_cast<int>(pool.unrelated.size()) < min_unrelated) {
    throw Error("keyword pool '" + pool.concept_name + "': " +
                std::to_string(pool.unrelated.size()) + " unrelated keywords, need >= " +
                std::to_string(min_unrelated));
  }
  std::set<std::string> rel;
  for (const auto& k : pool.relevant) {
    if (!rel.insert(to_lower(k)).second) {
      throw Error("keyword pool '" + pool.concept_name + "': duplicate relevant keyword '" +
                  k + "'");
    }
  }
  std::set<std::string> unrel;
  std::string concept_low = to_lower(pool.concept_name);
  for (const auto& k : pool.unrelated) {
    std::string low = to_lower(k);
    if (!unrel.insert(low).second) {
      throw Error("keyword pool '" + pool.concept_name + "': duplicate unrelated keyword '" +
                  k + "'");
    }
    if (rel.count(low)) {
      throw Error("keyword pool '" + pool.concept_name + "': '" + k +
                  "' appears in both relevant and unrelated lists");
    }
    if (low == concept_low) {
      throw Error("keyword pool '" + pool.concept_name +
                  "': unrelated list contains the concept itself");
    }
  }
}

KeywordPool load_pool(const std::filesystem::path& path, const std::string& concept_name,
                      int min_relevant, int min_unrelated) {
  KeywordPool pool;
  pool.concept_name = concept_name;
  pool.provenance = PoolProvenance::file;
  if (std::filesystem::is_directory(path)) {
    pool.relevant = read_keyword_lines(path / "relevant.txt");
    pool.unrelated = read_keyword_lines(path / "unrelated.txt");
  } else {
    std::ifstream f(path);
    if (!f) throw Error("keyword pool: cannot open " + path.string());
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error("keyword pool " + path.string() + ": " + e.what());
    }
    if (!j.contains("relevant") || !j.contains("unrelated")) {
      throw Error("keyword pool " + path.string() +
                  ": expected 'relevant' and 'unrelated' arrays");
    }
    for (const auto& v : j["relevant"]) pool.relevant.push_back(v.get<std::string>());
    for (const auto& v : j["unrelated"]) pool.unrelated.push_back(v.get<std::string>());
  }
  validate_pool(pool, min_relevant, min_unrelated);
  return pool;
}

std::pair<std::string, std::string> render_llm_prompts(const std::string& concept_name,
                                                       int n, int m) {
  if (n < 1 || m < 1) throw Error("render_llm_prompts: n and m must be >= 1");
  std::string first = "Please give me " + std::to_string(n) + " keywords describing '" +
                      concept_name + "' or you believe are very related to '" +
                      concept_name + "', separated by comma. Start your response directly.";
  std::string second = "Please give me " + std::to_string(m) +
                       " keywords often appeared with '" + concept_name +
                       "' but unrelated to '" + concept_name +
                       "', separated by comma. Start your response directly.";
  return {std::move(first), std::move(second)};
}

std::vector<std::string> parse_keyword_response(const std::string& raw) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    // Models often terminate items or the list with punctuation.
    while (!item.empty() && (item.back() == '.' || item.back() == ';')) {
      item.pop_back();
      item = trim(item);
    }
    if (item.empty()) continue;
    if (seen.insert(to_lower(item)).second) out.push_back(item);
  }
  return out;
}

}  // namespace sgrace
