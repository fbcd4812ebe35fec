#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace transl2e {

// Gaussian-kernel density estimate over a sample of reals.
struct DensityEstimate {
  std::vector<double> samples;
  double bandwidth = 0.0;
};

// Silverman bandwidth 0.9 min(sd, IQR/1.34) n^{-1/5}, floored at 1e-3 so
// degenerate (all-equal) samples still give a usable estimate.
DensityEstimate kde_fit(const std::vector<double>& samples);

double kde_eval(const DensityEstimate& d, double x);
Eigen::VectorXd kde_eval(const DensityEstimate& d, const Eigen::VectorXd& points);

struct HellingerResult {
  double distance = 0.0;  // in [0, 1]
  int grid_points = 0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
};

// Hellinger distance sqrt(1 - int sqrt(f0 fk)) on a 512-point trapezoid grid
// spanning the union of both sample sets plus 3 bandwidths either side. Each
// density is renormalized to unit mass on the grid before the product.
HellingerResult hellinger(const DensityEstimate& f0, const DensityEstimate& fk);

// Grid integrator over arbitrary densities; the public hellinger() uses it
// with the two KDEs and tests can pass exact densities.
double hellinger_on_grid(const std::function<double(double)>& f0,
                         const std::function<double(double)>& f1, double lo,
                         double hi, int n_points);

}  // namespace transl2e
