#include "transl2e/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace transl2e {

namespace {

constexpr double kInvSqrtTwoPi = 0.3989422804014327;  // 1 / sqrt(2 pi)
constexpr int kGridPoints = 512;

// linearly interpolated quantile of sorted values (R type 7)
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double trapezoid(const Eigen::VectorXd& values, double step) {
  const Eigen::Index n = values.size();
  double s = 0.5 * (values[0] + values[n - 1]);
  for (Eigen::Index i = 1; i + 1 < n; ++i) s += values[i];
  return s * step;
}

}  // namespace

DensityEstimate kde_fit(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("kde: empty sample set");
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("kde: non-finite sample");
  }
  const double n = static_cast<double>(samples.size());

  double sd = 0.0;
  if (samples.size() > 1) {
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / (n - 1.0));
  }

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  const double spread = std::min(sd, iqr / 1.34);
  const double bw = std::max(1e-3, 0.9 * spread * std::pow(n, -0.2));
  return DensityEstimate{samples, bw};
}

double kde_eval(const DensityEstimate& d, double x) {
  if (d.samples.empty() || !(d.bandwidth > 0.0)) {
    throw std::invalid_argument("kde: invalid estimate");
  }
  const double b = d.bandwidth;
  double s = 0.0;
  for (double si : d.samples) {
    const double z = (x - si) / b;
    s += std::exp(-0.5 * z * z);
  }
  return s * kInvSqrtTwoPi / (static_cast<double>(d.samples.size()) * b);
}

Eigen::VectorXd kde_eval(const DensityEstimate& d, const Eigen::VectorXd& points) {
  Eigen::VectorXd out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out[i] = kde_eval(d, points[i]);
  return out;
}

double hellinger_on_grid(const std::function<double(double)>& f0,
                         const std::function<double(double)>& f1, double lo,
                         double hi, int n_points) {
  if (!(hi > lo) || n_points < 2) {
    throw std::invalid_argument("hellinger: degenerate grid");
  }
  const double step = (hi - lo) / static_cast<double>(n_points - 1);
  Eigen::VectorXd a(n_points), b(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x = lo + step * static_cast<double>(i);
    a[i] = f0(x);
    b[i] = f1(x);
  }
  const double mass_a = trapezoid(a, step);
  const double mass_b = trapezoid(b, step);
  // renormalize to unit mass on the window; skip when a density has no mass
  // on the grid at all (its product term is identically zero anyway)
  if (mass_a > 0.0) a /= mass_a;
  if (mass_b > 0.0) b /= mass_b;
  Eigen::VectorXd root(n_points);
  for (int i = 0; i < n_points; ++i) root[i] = std::sqrt(a[i] * b[i]);
  const double affinity = trapezoid(root, step);
  const double h2 = std::max(0.0, 1.0 - affinity);
  return std::clamp(std::sqrt(h2), 0.0, 1.0);
}

HellingerResult hellinger(const DensityEstimate& f0, const DensityEstimate& fk) {
  if (f0.samples.empty() || fk.samples.empty() || !(f0.bandwidth > 0.0) ||
      !(fk.bandwidth > 0.0)) {
    throw std::invalid_argument("hellinger: invalid estimate");
  }
  const double b_max = std::max(f0.bandwidth, fk.bandwidth);
  double lo = f0.samples[0], hi = f0.samples[0];
  for (double v : f0.samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : fk.samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 3.0 * b_max;
  hi += 3.0 * b_max;
  if (!(hi > lo)) {  // unreachable with a positive bandwidth; defensive
    const bool same_singletons = f0.samples.size() == 1 && fk.samples.size() == 1 &&
                                 f0.samples[0] == fk.samples[0];
    if (same_singletons) return HellingerResult{0.0, kGridPoints, lo, hi};
    lo -= 3.0 * b_max;
    hi += 3.0 * b_max;
  }

  HellingerResult res;
  res.grid_points = kGridPoints;
  res.grid_lo = lo;
  res.grid_hi = hi;
  res.distance = hellinger_on_grid([&](double x) { return kde_eval(f0, x); },
                                   [&](double x) { return kde_eval(fk, x); }, lo, hi,
                                   kGridPoints);
  return res;
}

}  // namespace transl2e
