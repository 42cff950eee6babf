#include "smashline/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smashline {

GaussianMixture GaussianMixture::gaussian(Complex weight, double mean,
                                          double variance) {
  GaussianMixture m;
  m.add({weight, mean, variance});
  return m;
}

Complex GaussianMixture::total_weight() const {
  Complex w{0.0, 0.0};
  for (const GaussianTerm& t : terms_) w += t.weight;
  return w;
}

void GaussianMixture::add(const GaussianTerm& t) {
  if (!(t.variance > 0.0)) {
    throw ValidationError("gaussian mixture: variance must be > 0");
  }
  if (t.weight == Complex{0.0, 0.0}) return;
  terms_.push_back(t);
}

void GaussianMixture::add_scaled(const GaussianMixture& m, Complex s) {
  if (s == Complex{0.0, 0.0}) return;
  terms_.reserve(terms_.size() + m.terms_.size());
  for (const GaussianTerm& t : m.terms_) {
    terms_.push_back({t.weight * s, t.mean, t.variance});
  }
}

GaussianMixture GaussianMixture::evolved(double drift, double alpha,
                                         double tau) const {
  GaussianMixture out;
  out.terms_.reserve(terms_.size());
  for (const GaussianTerm& t : terms_) {
    out.add({t.weight, t.mean + drift * tau, t.variance + 2.0 * alpha * tau});
  }
  return out;
}

Complex GaussianMixture::evaluate(double x) const {
  Complex v{0.0, 0.0};
  for (const GaussianTerm& t : terms_) {
    const double z = x - t.mean;
    v += t.weight * std::exp(-z * z / (2.0 * t.variance)) /
         std::sqrt(2.0 * std::numbers::pi * t.variance);
  }
  return v;
}

Eigen::VectorXcd GaussianMixture::sample(const Eigen::VectorXd& xs) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(xs.size());
  for (const GaussianTerm& t : terms_) {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * t.variance);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double z = xs(i) - t.mean;
      out(i) += t.weight * (norm * std::exp(-z * z / (2.0 * t.variance)));
    }
  }
  return out;
}

void GaussianMixture::compact(double tol) {
  if (terms_.size() < 2) return;
  std::sort(terms_.begin(), terms_.end(),
            [](const GaussianTerm& a, const GaussianTerm& b) {
              if (a.mean != b.mean) return a.mean < b.mean;
              return a.variance < b.variance;
            });
  std::vector<GaussianTerm> merged;
  merged.reserve(terms_.size());
  for (const GaussianTerm& t : terms_) {
    if (!merged.empty()) {
      GaussianTerm& last = merged.back();
      const bool same_mean =
          std::abs(last.mean - t.mean) <= tol * (1.0 + std::abs(t.mean));
      const bool same_var =
          std::abs(last.variance - t.variance) <= tol * (1.0 + t.variance);
      if (same_mean && same_var) {
        last.weight += t.weight;
        continue;
      }
    }
    merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const GaussianTerm& t) {
                                return t.weight == Complex{0.0, 0.0};
                              }),
               merged.end());
  terms_ = std::move(merged);
}

}  // namespace smashline
