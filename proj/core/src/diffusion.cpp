#include "sgrace/diffusion.hpp"

#include <cmath>

#include "sgrace/hash.hpp"

namespace sgrace {

double NoiseSchedule::beta(int t) const {
  if (t < 1 || t > t_max) throw Error("schedule: t out of range [1, t_max]");
  if (t_max == 1) return beta_min;
  return beta_min + (beta_max - beta_min) * static_cast<double>(t - 1) /
                        static_cast<double>(t_max - 1);
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t < 0 || t > t_max) throw Error("schedule: t out of range [0, t_max]");
  double prod = 1.0;
  for (int s = 1; s <= t; ++s) prod *= 1.0 - beta(s);
  return prod;
}

NoisySample forward_noise(const NoiseSchedule& sched, const Eigen::VectorXd& z0, int t,
                          Rng& rng) {
  if (t < 0 || t > sched.t_max) {
    throw Error("forward_noise: t=" + std::to_string(t) + " out of range [0, " +
                std::to_string(sched.t_max) + "]");
  }
  Eigen::VectorXd n(z0.size());
  for (Eigen::Index i = 0; i < n.size(); ++i) n[i] = rng.normal();
  double ab = sched.alpha_bar(t);
  NoisySample s;
  s.z_t = std::sqrt(ab) * z0 + std::sqrt(1.0 - ab) * n;
  s.t = t;
  s.n = std::move(n);
  s.z_0 = z0;
  return s;
}

ToyDenoiser::ToyDenoiser(int latent_dim, int cond_dim, int hidden, int t_max)
    : d_z_(latent_dim), d_c_(cond_dim), hidden_(hidden), t_max_(t_max) {}

ToyDenoiser::ToyDenoiser(int latent_dim, int cond_dim, int hidden, int t_max, Rng& init_rng)
    : ToyDenoiser(latent_dim, cond_dim, hidden, t_max) {
  int in = d_z_ + kTimeDim + d_c_;
  double s1 = 1.0 / std::sqrt(static_cast<double>(in));
  double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  w1_.resize(hidden, in);
  for (Eigen::Index r = 0; r < w1_.rows(); ++r)
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) w1_(r, c) = s1 * init_rng.normal();
  b1_ = Eigen::VectorXd::Zero(hidden);
  w2_.resize(d_z_, hidden);
  for (Eigen::Index r = 0; r < w2_.rows(); ++r)
    for (Eigen::Index c = 0; c < w2_.cols(); ++c) w2_(r, c) = s2 * init_rng.normal();
  b2_ = Eigen::VectorXd::Zero(d_z_);
}

ToyDenoiser ToyDenoiser::zero(int latent_dim, int cond_dim, int hidden, int t_max) {
  ToyDenoiser d(latent_dim, cond_dim, hidden, t_max);
  int in = d.d_z_ + kTimeDim + d.d_c_;
  d.w1_ = Eigen::MatrixXd::Zero(hidden, in);
  d.b1_ = Eigen::VectorXd::Zero(hidden);
  d.w2_ = Eigen::MatrixXd::Zero(latent_dim, hidden);
  d.b2_ = Eigen::VectorXd::Zero(latent_dim);
  return d;
}

Eigen::VectorXd ToyDenoiser::input_vec(const Eigen::VectorXd& z_t, int t,
                                       const Eigen::VectorXd& cond) const {
  if (z_t.size() != d_z_) throw Error("denoiser: latent dim mismatch");
  if (cond.size() != d_c_) throw Error("denoiser: conditioning dim mismatch");
  Eigen::VectorXd in(d_z_ + kTimeDim + d_c_);
  in.head(d_z_) = z_t;
  // Sinusoidal timestep features.
  double tt = static_cast<double>(t);
  for (int j = 0; j < kTimeDim / 2; ++j) {
    double freq = std::pow(10000.0, -2.0 * j / kTimeDim);
    in[d_z_ + 2 * j] = std::sin(tt * freq);
    in[d_z_ + 2 * j + 1] = std::cos(tt * freq);
  }
  in.tail(d_c_) = cond;
  return in;
}

Eigen::VectorXd ToyDenoiser::predict(const Eigen::VectorXd& z_t, int t,
                                     const Eigen::VectorXd& cond) const {
  Eigen::VectorXd u = w1_ * input_vec(z_t, t, cond) + b1_;
  return w2_ * u.array().tanh().matrix() + b2_;
}

Eigen::VectorXd ToyDenoiser::cond_vjp(const Eigen::VectorXd& z_t, int t,
                                      const Eigen::VectorXd& cond,
                                      const Eigen::VectorXd& d_out) const {
  Eigen::VectorXd u = w1_ * input_vec(z_t, t, cond) + b1_;
  Eigen::ArrayXd g = u.array().tanh();
  Eigen::VectorXd du = (w2_.transpose() * d_out).array() * (1.0 - g.square());
  Eigen::VectorXd din = w1_.transpose() * du;
  return din.tail(d_c_);
}

Eigen::VectorXd ToyDenoiser::params() const {
  Eigen::VectorXd p(w1_.size() + b1_.size() + w2_.size() + b2_.size());
  Eigen::Index off = 0;
  Eigen::Map<Eigen::VectorXd>(p.data() + off, w1_.size()) =
      Eigen::Map<const Eigen::VectorXd>(w1_.data(), w1_.size());
  off += w1_.size();
  p.segment(off, b1_.size()) = b1_;
  off += b1_.size();
  Eigen::Map<Eigen::VectorXd>(p.data() + off, w2_.size()) =
      Eigen::Map<const Eigen::VectorXd>(w2_.data(), w2_.size());
  off += w2_.size();
  p.segment(off, b2_.size()) = b2_;
  return p;
}

double diffusion_loss(const NoisePredictor& den, std::span<const NoisySample> batch,
                      const Eigen::VectorXd& cond) {
  if (batch.empty()) throw Error("diffusion_loss: empty batch");
  double total = 0.0;
  for (const auto& s : batch) {
    total += (s.n - den.predict(s.z_t, s.t, cond)).squaredNorm();
  }
  return total / static_cast<double>(batch.size());
}

std::pair<double, Eigen::VectorXd> diffusion_loss_grad(const NoisePredictor& den,
                                                       std::span<const NoisySample> batch,
                                                       const Eigen::VectorXd& cond) {
  if (batch.empty()) throw Error("diffusion_loss: empty batch");
  double total = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(cond.size());
  for (const auto& s : batch) {
    Eigen::VectorXd resid = s.n - den.predict(s.z_t, s.t, cond);
    total += resid.squaredNorm();
    grad += den.cond_vjp(s.z_t, s.t, cond, -2.0 * resid);
  }
  double inv = 1.0 / static_cast<double>(batch.size());
  return {total * inv, grad * inv};
}

LatentCluster LatentCluster::for_concept(std::string_view concept_name, int latent_dim,
                                         double center_scale, double sigma) {
  // Center is a pure function of the concept name.
  Rng rng(fnv1a64(concept_name));
  LatentCluster c;
  c.center.resize(latent_dim);
  for (Eigen::Index i = 0; i < latent_dim; ++i) c.center[i] = center_scale * rng.normal();
  c.sigma = sigma;
  return c;
}

Eigen::VectorXd LatentCluster::draw(Rng& rng) const {
  Eigen::VectorXd z(center.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = center[i] + sigma * rng.normal();
  return z;
}

}  // namespace sgrace
