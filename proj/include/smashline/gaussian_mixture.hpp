#pragma once

#include <Eigen/Dense>
#include <vector>

#include "smashline/deformation.hpp"

namespace smashline {

// weight / sqrt(2 pi v) * exp(-(x - mean)^2 / (2 v)); complex weights are
// allowed (the triangular coupling constants are complex for N >= 3).
struct GaussianTerm {
  Complex weight{0.0, 0.0};
  double mean = 0.0;
  double variance = 1.0;  // > 0
};

// A finite complex-weighted sum of normalized Gaussians. Closed under the
// drifted heat flow, which is what makes the Duhamel construction exact in
// space (time is handled by quadrature).
class GaussianMixture {
 public:
  GaussianMixture() = default;

  static GaussianMixture gaussian(Complex weight, double mean, double variance);

  const std::vector<GaussianTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Complex total_weight() const;

  void add(const GaussianTerm& t);
  void add_scaled(const GaussianMixture& m, Complex s);

  // Evolution under d_t u = c u_x ... in drift form: mean += drift*tau,
  // variance += 2*alpha*tau. Requires the resulting variance to stay > 0.
  GaussianMixture evolved(double drift, double alpha, double tau) const;

  Complex evaluate(double x) const;
  Eigen::VectorXcd sample(const Eigen::VectorXd& xs) const;

  // Merges terms with (mean, variance) equal to within `tol` and drops
  // exact-zero weights; keeps quadrature sums from growing without bound.
  void compact(double tol = 1e-13);

 private:
  std::vector<GaussianTerm> terms_;
};

}  // namespace smashline
