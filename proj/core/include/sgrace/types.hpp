#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgrace {

using TokenId = uint32_t;

struct TokenSequence {
  std::vector<TokenId> ids;

  size_t length() const { return ids.size(); }
  bool operator==(const TokenSequence&) const = default;
};

// Throws if any id is out of vocabulary range or the sequence violates the
// length bounds (L >= 1, L <= max_len).
void validate_tokens(const TokenSequence& toks, uint32_t vocab_size, size_t max_len);

// A continuous token-embedding sequence (L x d). Attacks optimize these
// coordinates directly; discrete ids are kept only as provenance.
struct SoftPrompt {
  Eigen::MatrixXd embeddings;  // L x d
  std::optional<TokenSequence> source_token_ids;

  Eigen::Index length() const { return embeddings.rows(); }
  Eigen::Index dim() const { return embeddings.cols(); }
};

enum class PoolingMode { mean_final_hidden };

// Which representation the embedding-space losses act on.
enum class LossOn { pooled, full_sequence };

struct PooledEmbedding {
  Eigen::VectorXd vector;
  PoolingMode pooling_mode = PoolingMode::mean_final_hidden;
};

inline bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgrace
