#include "sgrace/analytics.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>

namespace sgrace {

ConceptSpace::ConceptSpace(std::string label, Eigen::MatrixXd points)
    : label_(std::move(label)), points_(std::move(points)) {
  if (points_.rows() < 1) throw Error("concept space '" + label_ + "': no points");
  centroid_ = points_.colwise().mean().transpose();
}

void ConceptSpace::add_point(const Eigen::VectorXd& p) {
  if (p.size() != points_.cols()) throw Error("concept space: dimension mismatch");
  points_.conservativeResize(points_.rows() + 1, Eigen::NoChange);
  points_.row(points_.rows() - 1) = p.transpose();
  centroid_ = points_.colwise().mean().transpose();
}

ConceptSpace build_space(const TextEncoder& enc, std::span<const TokenSequence> prompts,
                         const std::string& label) {
  if (prompts.empty()) throw Error("build_space: empty prompt list");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(prompts.size()), enc.arch().dim);
  for (size_t i = 0; i < prompts.size(); ++i) {
    pts.row(static_cast<Eigen::Index>(i)) = pooled_encode_tokens(enc, prompts[i]).transpose();
  }
  return ConceptSpace(label, std::move(pts));
}

double centroid_distance(const ConceptSpace& a, const ConceptSpace& b) {
  if (a.dim() != b.dim()) throw Error("centroid_distance: dimension mismatch");
  return (a.centroid() - b.centroid()).norm();
}

PcaProjection fit_pca(const Eigen::MatrixXd& points, int k) {
  Eigen::Index n = points.rows(), d = points.cols();
  if (n < 2) throw Error("fit_pca: need at least 2 points");
  if (k < 1 || k > d) throw Error("fit_pca: k must be in [1, d]");

  Eigen::VectorXd mean = points.colwise().mean().transpose();
  Eigen::MatrixXd centered = points.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("fit_pca: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top k in descending order.
  PcaProjection proj;
  proj.mean = std::move(mean);
  proj.components.resize(k, d);
  proj.variances.resize(k);
  for (int i = 0; i < k; ++i) {
    Eigen::Index src = d - 1 - i;
    Eigen::VectorXd comp = solver.eigenvectors().col(src);
    // Sign convention: largest-magnitude entry positive.
    Eigen::Index arg = 0;
    comp.cwiseAbs().maxCoeff(&arg);
    if (comp[arg] < 0) comp = -comp;
    proj.components.row(i) = comp.transpose();
    proj.variances[i] = std::max(solver.eigenvalues()[src], 0.0);
  }
  return proj;
}

Eigen::MatrixXd PcaProjection::project(const Eigen::MatrixXd& points) const {
  return (points.rowwise() - mean.transpose()) * components.transpose();
}

Eigen::MatrixXd PcaProjection::unproject(const Eigen::MatrixXd& coords) const {
  return (coords * components).rowwise() + mean.transpose();
}

FitReport fit_report(const ConceptSpace& gt, const ConceptSpace& adversarial,
                     double detector_threshold, bool fit_on_union) {
  if (gt.dim() != adversarial.dim()) throw Error("fit_report: dimension mismatch");

  FitReport report;
  report.gt_label = gt.label();
  report.adversarial_label = adversarial.label();
  report.sample_count = static_cast<int>(adversarial.size());
  report.cd = centroid_distance(gt, adversarial);
  report.detector_threshold = detector_threshold;

  int hits = 0;
  for (Eigen::Index i = 0; i < adversarial.size(); ++i) {
    if ((adversarial.points().row(i).transpose() - gt.centroid()).norm() <=
        detector_threshold) {
      ++hits;
    }
  }
  report.toy_asr = static_cast<double>(hits) / static_cast<double>(adversarial.size());

  int k = static_cast<int>(std::min<Eigen::Index>(2, gt.dim()));
  PcaProjection proj;
  if (fit_on_union) {
    Eigen::MatrixXd all(gt.size() + adversarial.size(), gt.dim());
    all.topRows(gt.size()) = gt.points();
    all.bottomRows(adversarial.size()) = adversarial.points();
    proj = fit_pca(all, k);
  } else {
    proj = fit_pca(gt.points(), k);
  }
  report.gt_coords = proj.project(gt.points());
  report.adv_coords = proj.project(adversarial.points());
  return report;
}

void write_plot_csv(const std::filesystem::path& path, const FitReport& report) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("plot csv: cannot open " + path.string());
  f << "set_label,pc1,pc2\n";
  f.precision(17);
  auto emit = [&](const std::string& label, const Eigen::MatrixXd& coords) {
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
      f << label << ',' << coords(i, 0) << ',' << (coords.cols() > 1 ? coords(i, 1) : 0.0)
        << '\n';
    }
  };
  emit(report.gt_label, report.gt_coords);
  emit(report.adversarial_label, report.adv_coords);
  if (!f) throw Error("plot csv: write failed: " + path.string());
}

}  // namespace sgrace
