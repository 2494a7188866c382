#include "pdcov/roc.hpp"

#include <algorithm>
#include <utility>

#include "pdcov/error.hpp"

namespace pdcov {

namespace {

RocSummary roc_of(std::vector<std::pair<double, bool>> scored) {
  std::size_t positives = 0;
  for (const auto& [v, edge] : scored) {
    if (!(v > 0.0 && v <= 1.0)) throw InvalidInput("p-values must lie in (0, 1]");
    positives += edge ? 1 : 0;
  }
  const std::size_t negatives = scored.size() - positives;
  if (positives == 0) throw InvalidInput("truth has no edges; AUC undefined");
  if (negatives == 0) throw InvalidInput("truth has no non-edges; AUC undefined");

  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  RocSummary out;
  out.points.push_back({0.0, 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  for (std::size_t k = 0; k < scored.size();) {
    const double t = scored[k].first;
    while (k < scored.size() && scored[k].first == t) {
      (scored[k].second ? tp : fp) += 1;
      ++k;
    }
    out.points.push_back({t, fp / nn, tp / np});
  }
  if (out.points.back().threshold < 1.0) out.points.push_back({1.0, 1.0, 1.0});
  out.auc = trapezoid_auc(out.points);
  return out;
}

}  // namespace

RocSummary roc_from_pvalues(const Eigen::MatrixXd& p, const Adjacency& truth) {
  const Index d = p.rows();
  if (p.cols() != d || truth.rows() != d || truth.cols() != d) {
    throw InvalidInput("p-value and truth matrices must be square and the same size");
  }
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) scored.emplace_back(p(i, j), truth(i, j) != 0);
  }
  RocSummary out = roc_of(std::move(scored));
  out.truth = truth;
  return out;
}

RocSummary roc_from_pvalues(std::span<const double> p, std::span<const int> labels) {
  if (p.size() != labels.size()) throw InvalidInput("p-values and labels differ in length");
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) scored.emplace_back(p[k], labels[k] != 0);
  return roc_of(std::move(scored));
}

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].fpr - points[k - 1].fpr) *
            (points[k].tpr + points[k - 1].tpr) / 2.0;
  }
  return area;
}

namespace {

// TPR of the upper envelope at `fpr`, linear between ROC points.
double tpr_at(const std::vector<RocPoint>& pts, double fpr) {
  std::size_t k = 0;
  while (k < pts.size() && pts[k].fpr <= fpr) ++k;
  if (k == 0) return 0.0;
  const RocPoint& lo = pts[k - 1];
  if (k == pts.size() || lo.fpr == fpr) return lo.tpr;
  const RocPoint& hi = pts[k];
  const double w = (fpr - lo.fpr) / (hi.fpr - lo.fpr);
  return lo.tpr + w * (hi.tpr - lo.tpr);
}

}  // namespace

std::vector<RocPoint> average_roc(std::span<const RocSummary> curves,
                                  std::size_t grid_size) {
  if (curves.empty()) throw InvalidInput("no ROC curves to average");
  if (grid_size < 2) throw InvalidInput("ROC grid needs at least 2 points");
  std::vector<RocPoint> out(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double fpr = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    double sum = 0.0;
    for (const auto& c : curves) sum += tpr_at(c.points, fpr);
    out[g] = {fpr, fpr, sum / static_cast<double>(curves.size())};
  }
  return out;
}

}  // namespace pdcov
