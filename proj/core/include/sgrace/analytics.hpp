#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sgrace/encoder.hpp"
#include "sgrace/types.hpp"

namespace sgrace {

// A labeled set of pooled embeddings with a cached centroid.
class ConceptSpace {
 public:
  ConceptSpace(std::string label, Eigen::MatrixXd points);  // rows are points

  const std::string& label() const { return label_; }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& centroid() const { return centroid_; }
  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }

  void add_point(const Eigen::VectorXd& p);  // recomputes the centroid

 private:
  std::string label_;
  Eigen::MatrixXd points_;
  Eigen::VectorXd centroid_;
};

// Pooled final-hidden-state embedding per prompt.
ConceptSpace build_space(const TextEncoder& enc, std::span<const TokenSequence> prompts,
                         const std::string& label);

// Euclidean distance between the two centroids.
double centroid_distance(const ConceptSpace& a, const ConceptSpace& b);

struct PcaProjection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // k x d, orthonormal rows
  Eigen::VectorXd variances;   // length k, non-increasing

  Eigen::MatrixXd project(const Eigen::MatrixXd& points) const;    // n x k
  Eigen::MatrixXd unproject(const Eigen::MatrixXd& coords) const;  // n x d
};

// Top-k eigenvectors of the sample covariance. Deterministic sign convention:
// the largest-magnitude entry of each component is made positive. Degenerate
// input (all points identical) yields zero variances.
PcaProjection fit_pca(const Eigen::MatrixXd& points, int k);

struct FitReport {
  std::string gt_label;
  std::string adversarial_label;
  int sample_count = 0;        // adversarial set size
  double cd = 0.0;             // centroid distance to GT
  double toy_asr = 0.0;        // fraction of adversarial points inside the detector ball
  double detector_threshold = 0.0;
  Eigen::MatrixXd gt_coords;   // 2-D PCA coordinates
  Eigen::MatrixXd adv_coords;
  // FID and image-text similarity need full-scale image generation and are
  // deliberately absent from this report.
  std::string absent_metrics = "FID, CLIP-score (out of scope: no image pipeline)";
};

// Pure function of its inputs. PCA is fit on the union of both sets by
// default; pass fit_on_union=false to fit on GT alone and project both.
FitReport fit_report(const ConceptSpace& gt, const ConceptSpace& adversarial,
                     double detector_threshold, bool fit_on_union = true);

// Plot-data file: CSV with header set_label,pc1,pc2.
void write_plot_csv(const std::filesystem::path& path, const FitReport& report);

}  // namespace sgrace
