#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "transl2e/density.hpp"
#include "transl2e/rng.hpp"

using namespace transl2e;

namespace {

double normal_pdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

// closed-form Hellinger distance between two Gaussians
double gaussian_hellinger(double mu1, double s1, double mu2, double s2) {
  const double v = s1 * s1 + s2 * s2;
  const double bc = std::sqrt(2.0 * s1 * s2 / v) * std::exp(-(mu1 - mu2) * (mu1 - mu2) / (4.0 * v));
  return std::sqrt(1.0 - bc);
}

// the Silverman rule recomputed independently from the raw sample
double silverman_oracle(std::vector<double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double pos = p * (n - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[std::min(lo + 1, v.size() - 1)] * frac;
  };
  const double iqr = q(0.75) - q(0.25);
  return std::max(1e-3, 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2));
}

}  // namespace

TEST_CASE("kde bandwidth") {
  // single sample: floored bandwidth, still a valid estimate
  const DensityEstimate single = kde_fit({0.0});
  CHECK(single.bandwidth == 1e-3);

  // all-equal samples hit the floor too
  CHECK(kde_fit({0.7, 0.7, 0.7, 0.7}).bandwidth == 1e-3);

  // Silverman formula against an independent recomputation on N(0,1) draws
  Rng rng(8201);
  std::vector<double> draws(10000);
  for (double& v : draws) v = rng.normal();
  const DensityEstimate d = kde_fit(draws);
  CHECK(d.bandwidth == doctest::Approx(silverman_oracle(draws)).epsilon(1e-12));
  // formula value for sd ~ 1, IQR ~ 1.35: 0.9 * ~1 * 10000^(-1/5) ~ 0.14
  CHECK(d.bandwidth > 0.12);
  CHECK(d.bandwidth < 0.18);

  CHECK_THROWS_AS(kde_fit({}), std::invalid_argument);
}

TEST_CASE("kde evaluation") {
  DensityEstimate d;
  d.samples = {0.0};
  d.bandwidth = 1.0;
  CHECK(kde_eval(d, 0.0) == doctest::Approx(0.3989423).epsilon(1e-6));
  CHECK(kde_eval(d, 1.0) == doctest::Approx(0.2419707).epsilon(1e-6));

  // far from every sample the density decays below 1e-80
  DensityEstimate tight = kde_fit({0.0, 0.1, 0.2});
  const double far = 0.2 + 25.0 * tight.bandwidth;
  CHECK(kde_eval(tight, far) < 1e-80);

  // symmetric samples give a symmetric estimate
  DensityEstimate sym;
  sym.samples = {-1.0, 1.0};
  sym.bandwidth = 0.5;
  CHECK(kde_eval(sym, 0.3) == doctest::Approx(kde_eval(sym, -0.3)).epsilon(1e-14));
}

TEST_CASE("kde mass inside its evaluation window") {
  Rng rng(8202);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<double> samples(30 + rng.below(200));
    const double center = 4.0 * (rng.uniform() - 0.5);
    const double spread = 0.2 + 2.0 * rng.uniform();
    for (double& v : samples) v = center + spread * rng.normal();
    const DensityEstimate d = kde_fit(samples);

    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn - 3.0 * d.bandwidth;
    const double hi = *mx + 3.0 * d.bandwidth;
    const int n_pts = 512;
    const double step = (hi - lo) / (n_pts - 1);
    double integral = 0.5 * (kde_eval(d, lo) + kde_eval(d, hi));
    for (int i = 1; i + 1 < n_pts; ++i) integral += kde_eval(d, lo + i * step);
    integral *= step;
    CHECK(integral >= 0.95);
    CHECK(integral <= 1.0);
  }
}

TEST_CASE("hellinger endpoints") {
  Rng rng(8203);
  std::vector<double> samples(200);
  for (double& v : samples) v = rng.uniform();
  const DensityEstimate a = kde_fit(samples);
  const DensityEstimate b = kde_fit(samples);
  CHECK(hellinger(a, b).distance < 1e-6);

  std::vector<double> left(50), right(50);
  for (double& v : left) v = -100.0 + 1e-4 * rng.normal();
  for (double& v : right) v = 100.0 + 1e-4 * rng.normal();
  CHECK(hellinger(kde_fit(left), kde_fit(right)).distance > 0.999);
}

TEST_CASE("grid integrator reproduces the Gaussian closed form") {
  Rng rng(8204);
  for (int rep = 0; rep < 20; ++rep) {
    const double mu1 = 4.0 * (rng.uniform() - 0.5);
    const double mu2 = 4.0 * (rng.uniform() - 0.5);
    const double s1 = 0.5 + 1.5 * rng.uniform();
    const double s2 = 0.5 + 1.5 * rng.uniform();
    const double lo = std::min(mu1, mu2) - 8.0 * std::max(s1, s2);
    const double hi = std::max(mu1, mu2) + 8.0 * std::max(s1, s2);
    const double grid = hellinger_on_grid(
        [&](double x) { return normal_pdf(x, mu1, s1); },
        [&](double x) { return normal_pdf(x, mu2, s2); }, lo, hi, 512);
    CHECK(std::abs(grid - gaussian_hellinger(mu1, s1, mu2, s2)) < 1e-3);
  }

  // the quoted N(0,1) vs N(1,1) pair
  const double h = hellinger_on_grid([&](double x) { return normal_pdf(x, 0, 1); },
                                     [&](double x) { return normal_pdf(x, 1, 1); },
                                     -9.0, 10.0, 512);
  CHECK(std::sqrt(1.0 - std::exp(-0.125)) == doctest::Approx(0.342787).epsilon(1e-5));
  CHECK(h == doctest::Approx(0.342787).epsilon(1e-3));
}

TEST_CASE("hellinger symmetry, range, location invariance") {
  Rng rng(8205);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> a(5 + rng.below(40)), b(5 + rng.below(40));
    const double mu_a = 3.0 * (rng.uniform() - 0.5), sd_a = 0.1 + rng.uniform();
    const double mu_b = 3.0 * (rng.uniform() - 0.5), sd_b = 0.1 + rng.uniform();
    for (double& v : a) v = mu_a + sd_a * rng.normal();
    for (double& v : b) v = mu_b + sd_b * rng.normal();
    const DensityEstimate fa = kde_fit(a), fb = kde_fit(b);

    const double ab = hellinger(fa, fb).distance;
    const double ba = hellinger(fb, fa).distance;
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }

  // shifting both sample sets together leaves the distance unchanged
  std::vector<double> a(60), b(60);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = 0.8 + 1.3 * rng.normal();
  const double base = hellinger(kde_fit(a), kde_fit(b)).distance;
  const double shift = 17.25;
  std::vector<double> a2 = a, b2 = b;
  for (double& v : a2) v += shift;
  for (double& v : b2) v += shift;
  const double moved = hellinger(kde_fit(a2), kde_fit(b2)).distance;
  CHECK(std::abs(base - moved) < 1e-9);
}
