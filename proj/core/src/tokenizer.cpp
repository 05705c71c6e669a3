#include "sgrace/tokenizer.hpp"

#include <cctype>

#include "sgrace/hash.hpp"

namespace sgrace {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

TokenId Tokenizer::word_id(std::string_view word) const {
  std::string low;
  low.reserve(word.size());
  for (char c : word) low.push_back(lower(c));
  return static_cast<TokenId>(fnv1a64(low) % vocab_size_);
}

TokenSequence Tokenizer::tokenize(std::string_view text) const {
  TokenSequence out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.ids.push_back(word_id(text.substr(start, i - start)));
  }
  return out;
}

void validate_tokens(const TokenSequence& toks, uint32_t vocab_size, size_t max_len) {
  if (toks.ids.empty()) throw Error("token sequence: length must be >= 1");
  if (toks.ids.size() > max_len) {
    throw Error("token sequence: length " + std::to_string(toks.ids.size()) +
                " exceeds max " + std::to_string(max_len));
  }
  for (TokenId id : toks.ids) {
    if (id >= vocab_size) {
      throw Error("token sequence: id " + std::to_string(id) +
                  " out of vocabulary (V=" + std::to_string(vocab_size) + ")");
    }
  }
}

}  // namespace sgrace
