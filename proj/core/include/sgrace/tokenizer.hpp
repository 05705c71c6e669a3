#pragma once

#include <string>
#include <string_view>

#include "sgrace/types.hpp"

namespace sgrace {

// Whitespace-split, ASCII-lowercase, stable 64-bit hash modulo the vocabulary
// size. No vocabulary files, identical ids on every platform.
class Tokenizer {
 public:
  explicit Tokenizer(uint32_t vocab_size) : vocab_size_(vocab_size) {}

  uint32_t vocab_size() const { return vocab_size_; }

  TokenSequence tokenize(std::string_view text) const;

  // Single-word id (the hash of one lowercased token).
  TokenId word_id(std::string_view word) const;

 private:
  uint32_t vocab_size_;
};

}  // namespace sgrace
