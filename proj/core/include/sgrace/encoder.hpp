#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sgrace/rng.hpp"
#include "sgrace/tokenizer.hpp"
#include "sgrace/types.hpp"

namespace sgrace {

// Architecture descriptor of the toy reference encoder: hashed-vocabulary
// embedding table followed by `layers` blocks of {single-head self-attention,
// two-layer feed-forward with tanh}, residual connections, no normalization.
// The final hidden state is the last block's output.
struct EncoderArch {
  uint32_t vocab_size = 256;
  int dim = 32;
  int layers = 2;
  int hidden = 64;
  int max_seq_len = 64;
  double emb_init = 0.25;    // stddev of embedding-table entries
  double weight_init = 0.05; // stddev of block weights

  bool operator==(const EncoderArch&) const = default;
};

class TextEncoder {
 public:
  // Seeded random initialization. Biases start at zero.
  TextEncoder(const EncoderArch& arch, Rng& init_rng);

  // All block weights zero: with residual connections the encoder is the
  // identity map on soft prompts. Embedding table is still random-seeded.
  static TextEncoder identity(const EncoderArch& arch, Rng& init_rng);

  const EncoderArch& arch() const { return arch_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  Eigen::Index param_count() const;
  Eigen::VectorXd get_params() const;
  void set_params(const Eigen::VectorXd& theta);  // throws if frozen or wrong length

  // Plain gradient step: theta <- theta - lr * grad. Throws if frozen.
  void apply_grad_step(const Eigen::VectorXd& grad, double lr);

  const Eigen::MatrixXd& embedding_table() const { return embedding_; }

  struct Block {
    Eigen::MatrixXd wq, wk, wv;  // d x d
    Eigen::MatrixXd w1;          // d x h
    Eigen::VectorXd b1;          // h
    Eigen::MatrixXd w2;          // h x d
    Eigen::VectorXd b2;          // d
  };
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  EncoderArch arch_;
  Tokenizer tokenizer_;
  Eigen::MatrixXd embedding_;  // V x d
  std::vector<Block> blocks_;
  bool frozen_ = false;
};

// Frozen original T and trainable erased T_theta sharing architecture and
// initial parameters. `original` never changes over the pair's lifetime.
struct EncoderPair {
  TextEncoder original;
  TextEncoder current;

  static EncoderPair fresh(const EncoderArch& arch, uint64_t seed);
};

// Embedding-table lookup; the entry point that lets attacks optimize soft
// prompts in embedding space.
SoftPrompt embed_tokens(const TextEncoder& enc, const TokenSequence& toks);

// Forward pass caches for the hand-written backward pass.
struct EncodeTrace {
  struct BlockTrace {
    Eigen::MatrixXd x;      // block input, L x d
    Eigen::MatrixXd q, k, v;
    Eigen::MatrixXd probs;  // row-softmax of scores, L x L
    Eigen::MatrixXd y;      // x + attention, L x d
    Eigen::MatrixXd g;      // tanh activations, L x h
  };
  std::vector<BlockTrace> blocks;
  Eigen::MatrixXd output;  // final hidden states, L x d
};

Eigen::MatrixXd encode(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt);
inline Eigen::MatrixXd encode(const TextEncoder& enc, const SoftPrompt& sp) {
  return encode(enc, sp.embeddings);
}
EncodeTrace encode_traced(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt);

// Reverse-mode pass. d_out is dLoss/dOutput (L x d). Either destination may
// be null. d_params accumulates into the flat layout of get_params(); the
// embedding-table segment is only touched via accumulate_embedding_grad.
void encode_vjp(const TextEncoder& enc, const EncodeTrace& trace,
                const Eigen::MatrixXd& d_out, Eigen::MatrixXd* d_input,
                Eigen::VectorXd* d_params);

// Scatter a soft-prompt gradient into the embedding-table rows named by toks.
void accumulate_embedding_grad(const TextEncoder& enc, const TokenSequence& toks,
                               const Eigen::MatrixXd& d_rows, Eigen::VectorXd& d_params);

// Arithmetic mean over sequence positions of the final hidden state.
PooledEmbedding pool(const Eigen::MatrixXd& hidden);

// Squared embedding distance between two hidden-state stacks plus its
// gradient w.r.t. the left argument. Pooled mode compares mean vectors;
// full-sequence mode compares the full stacks when shapes match and falls
// back to pooled means for cross-length pairs.
struct SeqDistance {
  double value;
  Eigen::MatrixXd d_lhs;
};
SeqDistance seq_sq_distance(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                            LossOn mode);

// pool(encode(enc, sp)) as a vector.
Eigen::VectorXd pooled_encode(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt);
Eigen::VectorXd pooled_encode_tokens(const TextEncoder& enc, const TokenSequence& toks);

// Adam with bias correction; the erasure loop's optimizer.
class AdamOptimizer {
 public:
  AdamOptimizer(Eigen::Index n, double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
        m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

  void step(TextEncoder& enc, const Eigen::VectorXd& grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  Eigen::VectorXd m_, v_;
};

}  // namespace sgrace
