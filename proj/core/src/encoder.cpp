#include "sgrace/encoder.hpp"

#include <cmath>

namespace sgrace {

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = stddev * rng.normal();
  return m;
}

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd p(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    double mx = s.row(i).maxCoeff();
    Eigen::ArrayXd e = (s.row(i).array() - mx).exp();
    p.row(i) = e / e.sum();
  }
  return p;
}

// Flat layout: embedding table first (column-major), then per block
// wq, wk, wv, w1, b1, w2, b2, each column-major.
struct Cursor {
  Eigen::VectorXd& v;
  Eigen::Index pos = 0;
  void put(const Eigen::MatrixXd& m) {
    Eigen::Map<Eigen::VectorXd>(v.data() + pos, m.size()) =
        Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    pos += m.size();
  }
  void take(Eigen::MatrixXd& m) {
    Eigen::Map<const Eigen::VectorXd> src(v.data() + pos, m.size());
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = src;
    pos += m.size();
  }
  void take(Eigen::VectorXd& m) {
    m = v.segment(pos, m.size());
    pos += m.size();
  }
  void put_vec(const Eigen::VectorXd& m) {
    v.segment(pos, m.size()) = m;
    pos += m.size();
  }
};

}  // namespace

TextEncoder::TextEncoder(const EncoderArch& arch, Rng& init_rng)
    : arch_(arch), tokenizer_(arch.vocab_size) {
  embedding_ = random_matrix(arch.vocab_size, arch.dim, arch.emb_init, init_rng);
  blocks_.resize(arch.layers);
  for (auto& b : blocks_) {
    b.wq = random_matrix(arch.dim, arch.dim, arch.weight_init, init_rng);
    b.wk = random_matrix(arch.dim, arch.dim, arch.weight_init, init_rng);
    b.wv = random_matrix(arch.dim, arch.dim, arch.weight_init, init_rng);
    b.w1 = random_matrix(arch.dim, arch.hidden, arch.weight_init, init_rng);
    b.b1 = Eigen::VectorXd::Zero(arch.hidden);
    b.w2 = random_matrix(arch.hidden, arch.dim, arch.weight_init, init_rng);
    b.b2 = Eigen::VectorXd::Zero(arch.dim);
  }
}

TextEncoder TextEncoder::identity(const EncoderArch& arch, Rng& init_rng) {
  TextEncoder enc(arch, init_rng);
  for (auto& b : enc.blocks_) {
    b.wq.setZero();
    b.wk.setZero();
    b.wv.setZero();
    b.w1.setZero();
    b.b1.setZero();
    b.w2.setZero();
    b.b2.setZero();
  }
  return enc;
}

Eigen::Index TextEncoder::param_count() const {
  Eigen::Index d = arch_.dim, h = arch_.hidden;
  Eigen::Index per_block = 3 * d * d + d * h + h + h * d + d;
  return static_cast<Eigen::Index>(arch_.vocab_size) * d + arch_.layers * per_block;
}

Eigen::VectorXd TextEncoder::get_params() const {
  Eigen::VectorXd theta(param_count());
  Cursor c{theta};
  c.put(embedding_);
  for (const auto& b : blocks_) {
    c.put(b.wq);
    c.put(b.wk);
    c.put(b.wv);
    c.put(b.w1);
    c.put_vec(b.b1);
    c.put(b.w2);
    c.put_vec(b.b2);
  }
  return theta;
}

void TextEncoder::set_params(const Eigen::VectorXd& theta) {
  if (frozen_) throw Error("encoder: mutation attempted on frozen encoder");
  if (theta.size() != param_count()) {
    throw Error("encoder: parameter length " + std::to_string(theta.size()) +
                " != " + std::to_string(param_count()));
  }
  Eigen::VectorXd copy = theta;
  Cursor c{copy};
  c.take(embedding_);
  for (auto& b : blocks_) {
    c.take(b.wq);
    c.take(b.wk);
    c.take(b.wv);
    c.take(b.w1);
    c.take(b.b1);
    c.take(b.w2);
    c.take(b.b2);
  }
}

void TextEncoder::apply_grad_step(const Eigen::VectorXd& grad, double lr) {
  if (frozen_) throw Error("encoder: mutation attempted on frozen encoder");
  if (grad.size() != param_count()) {
    throw Error("encoder: gradient length " + std::to_string(grad.size()) +
                " != " + std::to_string(param_count()));
  }
  Eigen::VectorXd theta = get_params();
  theta -= lr * grad;
  set_params(theta);
}

EncoderPair EncoderPair::fresh(const EncoderArch& arch, uint64_t seed) {
  Rng init(splitmix64(seed ^ 0x5347524143454e43ull));  // encoder-init stream
  TextEncoder original(arch, init);
  TextEncoder current = original;
  original.freeze();
  return EncoderPair{std::move(original), std::move(current)};
}

SoftPrompt embed_tokens(const TextEncoder& enc, const TokenSequence& toks) {
  validate_tokens(toks, enc.arch().vocab_size, static_cast<size_t>(enc.arch().max_seq_len));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(toks.ids.size()), enc.arch().dim);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m.row(i) = enc.embedding_table().row(toks.ids[static_cast<size_t>(i)]);
  }
  return SoftPrompt{std::move(m), toks};
}

EncodeTrace encode_traced(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt) {
  const auto& arch = enc.arch();
  if (soft_prompt.cols() != arch.dim) {
    throw Error("encode: input dim " + std::to_string(soft_prompt.cols()) +
                " != encoder dim " + std::to_string(arch.dim));
  }
  if (soft_prompt.rows() < 1) throw Error("encode: empty soft prompt");
  double scale = 1.0 / std::sqrt(static_cast<double>(arch.dim));

  EncodeTrace trace;
  trace.blocks.reserve(enc.blocks().size());
  Eigen::MatrixXd x = soft_prompt;
  for (const auto& b : enc.blocks()) {
    EncodeTrace::BlockTrace bt;
    bt.x = x;
    bt.q = x * b.wq;
    bt.k = x * b.wk;
    bt.v = x * b.wv;
    bt.probs = row_softmax(scale * (bt.q * bt.k.transpose()));
    bt.y = x + bt.probs * bt.v;
    bt.g = ((bt.y * b.w1).rowwise() + b.b1.transpose()).array().tanh();
    x = bt.y + ((bt.g * b.w2).rowwise() + b.b2.transpose());
    trace.blocks.push_back(std::move(bt));
  }
  trace.output = std::move(x);
  return trace;
}

Eigen::MatrixXd encode(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt) {
  return encode_traced(enc, soft_prompt).output;
}

void encode_vjp(const TextEncoder& enc, const EncodeTrace& trace,
                const Eigen::MatrixXd& d_out, Eigen::MatrixXd* d_input,
                Eigen::VectorXd* d_params) {
  const auto& arch = enc.arch();
  double scale = 1.0 / std::sqrt(static_cast<double>(arch.dim));
  Eigen::Index d = arch.dim, h = arch.hidden;
  Eigen::Index emb_size = static_cast<Eigen::Index>(arch.vocab_size) * d;
  Eigen::Index per_block = 3 * d * d + d * h + h + h * d + d;

  if (d_params && d_params->size() != enc.param_count()) {
    throw Error("encode_vjp: d_params has wrong length");
  }

  Eigen::MatrixXd dz = d_out;
  for (int bi = static_cast<int>(trace.blocks.size()) - 1; bi >= 0; --bi) {
    const auto& b = enc.blocks()[static_cast<size_t>(bi)];
    const auto& bt = trace.blocks[static_cast<size_t>(bi)];

    // z = y + (g w2 + b2); g = tanh(y w1 + b1)
    Eigen::MatrixXd dy = dz;
    const Eigen::MatrixXd& df = dz;
    Eigen::MatrixXd dg = df * b.w2.transpose();
    Eigen::MatrixXd du = dg.array() * (1.0 - bt.g.array().square());
    dy += du * b.w1.transpose();

    // y = x + p v
    Eigen::MatrixXd dx = dy;
    const Eigen::MatrixXd& da = dy;
    Eigen::MatrixXd dp = da * bt.v.transpose();
    Eigen::MatrixXd dv = bt.probs.transpose() * da;

    // softmax rows: ds_i = p_i .* (dp_i - dot(dp_i, p_i))
    Eigen::MatrixXd ds(dp.rows(), dp.cols());
    for (Eigen::Index i = 0; i < dp.rows(); ++i) {
      double dot = dp.row(i).dot(bt.probs.row(i));
      ds.row(i) = bt.probs.row(i).array() * (dp.row(i).array() - dot);
    }

    Eigen::MatrixXd dq = scale * (ds * bt.k);
    Eigen::MatrixXd dk = scale * (ds.transpose() * bt.q);
    dx += dq * b.wq.transpose() + dk * b.wk.transpose() + dv * b.wv.transpose();

    if (d_params) {
      Eigen::Index base = emb_size + bi * per_block;
      auto add = [&](const Eigen::MatrixXd& g, Eigen::Index& off) {
        Eigen::Map<Eigen::VectorXd>(d_params->data() + off, g.size()) +=
            Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
        off += g.size();
      };
      Eigen::Index off = base;
      Eigen::MatrixXd dwq = bt.x.transpose() * dq;
      Eigen::MatrixXd dwk = bt.x.transpose() * dk;
      Eigen::MatrixXd dwv = bt.x.transpose() * dv;
      Eigen::MatrixXd dw1 = bt.y.transpose() * du;
      Eigen::VectorXd db1 = du.colwise().sum();
      Eigen::MatrixXd dw2 = bt.g.transpose() * df;
      Eigen::VectorXd db2 = df.colwise().sum();
      add(dwq, off);
      add(dwk, off);
      add(dwv, off);
      add(dw1, off);
      d_params->segment(off, h) += db1;
      off += h;
      add(dw2, off);
      d_params->segment(off, d) += db2;
      off += d;
    }
    dz = std::move(dx);
  }
  if (d_input) *d_input = std::move(dz);
}

void accumulate_embedding_grad(const TextEncoder& enc, const TokenSequence& toks,
                               const Eigen::MatrixXd& d_rows, Eigen::VectorXd& d_params) {
  Eigen::Index d = enc.arch().dim;
  Eigen::Index v = enc.arch().vocab_size;
  if (d_rows.rows() != static_cast<Eigen::Index>(toks.ids.size()) || d_rows.cols() != d) {
    throw Error("accumulate_embedding_grad: shape mismatch");
  }
  // Table is stored column-major in the flat layout: (row r, col c) -> c*V + r.
  for (Eigen::Index i = 0; i < d_rows.rows(); ++i) {
    Eigen::Index r = toks.ids[static_cast<size_t>(i)];
    for (Eigen::Index c = 0; c < d; ++c) d_params[c * v + r] += d_rows(i, c);
  }
}

PooledEmbedding pool(const Eigen::MatrixXd& hidden) {
  if (hidden.rows() < 1) throw Error("pool: empty hidden state");
  return PooledEmbedding{hidden.colwise().mean().transpose(),
                         PoolingMode::mean_final_hidden};
}

SeqDistance seq_sq_distance(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                            LossOn mode) {
  if (lhs.cols() != rhs.cols()) throw Error("seq_sq_distance: dimension mismatch");
  if (mode == LossOn::full_sequence && lhs.rows() == rhs.rows()) {
    Eigen::MatrixXd diff = lhs - rhs;
    return {diff.squaredNorm(), 2.0 * diff};
  }
  Eigen::VectorXd diff = pool(lhs).vector - pool(rhs).vector;
  double inv_l = 1.0 / static_cast<double>(lhs.rows());
  Eigen::MatrixXd d(lhs.rows(), lhs.cols());
  d.rowwise() = (2.0 * inv_l * diff).transpose();
  return {diff.squaredNorm(), std::move(d)};
}

Eigen::VectorXd pooled_encode(const TextEncoder& enc, const Eigen::MatrixXd& soft_prompt) {
  return pool(encode(enc, soft_prompt)).vector;
}

Eigen::VectorXd pooled_encode_tokens(const TextEncoder& enc, const TokenSequence& toks) {
  return pooled_encode(enc, embed_tokens(enc, toks).embeddings);
}

void AdamOptimizer::step(TextEncoder& enc, const Eigen::VectorXd& grad) {
  if (grad.size() != m_.size()) throw Error("adam: gradient length mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_.array() + (1.0 - beta2_) * grad.array().square();
  double c1 = 1.0 - std::pow(beta1_, t_);
  double c2 = 1.0 - std::pow(beta2_, t_);
  Eigen::VectorXd update =
      (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_) * lr_;
  Eigen::VectorXd theta = enc.get_params();
  theta -= update;
  enc.set_params(theta);
}

}  // namespace sgrace
