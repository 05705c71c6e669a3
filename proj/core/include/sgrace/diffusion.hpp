#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "sgrace/rng.hpp"
#include "sgrace/types.hpp"

namespace sgrace {

// Linear beta schedule; alpha_bar(t) is the cumulative product of (1 - beta).
// t = 0 is the clean endpoint: alpha_bar(0) = 1.
struct NoiseSchedule {
  int t_max = 50;
  double beta_min = 1e-4;
  double beta_max = 2e-2;

  double beta(int t) const;       // t in [1, t_max]
  double alpha_bar(int t) const;  // t in [0, t_max]
};

struct NoisySample {
  Eigen::VectorXd z_t;
  int t = 0;
  Eigen::VectorXd n;    // injected noise
  Eigen::VectorXd z_0;  // clean latent
};

// z_t = sqrt(alpha_bar_t) z_0 + sqrt(1 - alpha_bar_t) n, n ~ N(0, I).
// t = 0 is allowed and returns z_t = z_0.
NoisySample forward_noise(const NoiseSchedule& sched, const Eigen::VectorXd& z0, int t,
                          Rng& rng);

// Noise-prediction interface. Pure in (z_t, t, cond); differentiable in cond.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual int latent_dim() const = 0;
  virtual int cond_dim() const = 0;
  virtual Eigen::VectorXd predict(const Eigen::VectorXd& z_t, int t,
                                  const Eigen::VectorXd& cond) const = 0;
  // J_cond^T * d_out for the prediction at (z_t, t, cond).
  virtual Eigen::VectorXd cond_vjp(const Eigen::VectorXd& z_t, int t,
                                   const Eigen::VectorXd& cond,
                                   const Eigen::VectorXd& d_out) const = 0;
};

// Frozen two-layer tanh MLP on [z_t; sinusoidal(t); cond]. Parameters are
// seeded at construction and never change.
class ToyDenoiser final : public NoisePredictor {
 public:
  ToyDenoiser(int latent_dim, int cond_dim, int hidden, int t_max, Rng& init_rng);

  // All-zero weights; predicts the zero vector everywhere.
  static ToyDenoiser zero(int latent_dim, int cond_dim, int hidden, int t_max);

  int latent_dim() const override { return d_z_; }
  int cond_dim() const override { return d_c_; }
  Eigen::VectorXd predict(const Eigen::VectorXd& z_t, int t,
                          const Eigen::VectorXd& cond) const override;
  Eigen::VectorXd cond_vjp(const Eigen::VectorXd& z_t, int t, const Eigen::VectorXd& cond,
                           const Eigen::VectorXd& d_out) const override;

  // Flat parameter dump for the reproducibility checkpoint.
  Eigen::VectorXd params() const;

  static constexpr int kTimeDim = 8;

 private:
  ToyDenoiser(int latent_dim, int cond_dim, int hidden, int t_max);
  Eigen::VectorXd input_vec(const Eigen::VectorXd& z_t, int t,
                            const Eigen::VectorXd& cond) const;

  int d_z_, d_c_, hidden_, t_max_;
  Eigen::MatrixXd w1_;  // hidden x in
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;  // d_z x hidden
  Eigen::VectorXd b2_;
};

// Mean over the batch of ||n - predict(z_t, t, cond)||^2.
double diffusion_loss(const NoisePredictor& den, std::span<const NoisySample> batch,
                      const Eigen::VectorXd& cond);

// Loss plus its gradient with respect to cond.
std::pair<double, Eigen::VectorXd> diffusion_loss_grad(const NoisePredictor& den,
                                                       std::span<const NoisySample> batch,
                                                       const Eigen::VectorXd& cond);

// Desk-scale surrogate for target-image latents: a seeded Gaussian cluster
// around a concept-specific center.
struct LatentCluster {
  Eigen::VectorXd center;
  double sigma = 0.5;

  static LatentCluster for_concept(std::string_view concept_name, int latent_dim,
                                   double center_scale = 1.0, double sigma = 0.5);
  Eigen::VectorXd draw(Rng& rng) const;
};

}  // namespace sgrace
