#include "transl2e/cross_validation.hpp"

#include <cmath>
#include <stdexcept>

#include "transl2e/l2e.hpp"
#include "transl2e/parallel.hpp"
#include "transl2e/rng.hpp"

namespace transl2e {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("cv: empty lambda grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("cv: lambdas must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw std::invalid_argument("cv: lambda grid must be strictly decreasing");
    }
  }
}

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), data.n_cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
    out.y[static_cast<Eigen::Index>(i)] = data.y[rows[i]];
  }
  return out;
}

// fits along the decreasing grid with warm starts, reporting each iterate
std::vector<FitResult> path_fits(const Dataset& data, const PenaltySpec& proto,
                                 const std::vector<double>& grid,
                                 const SolverOptions& opts) {
  std::vector<FitResult> fits;
  fits.reserve(grid.size());
  PenaltySpec pen = proto;
  SolverOptions o = opts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pen.lambda = grid[i];
    if (i > 0) {
      o.init = SolverOptions::Init::provided;
      o.beta0 = fits.back().beta;
      o.tau0 = fits.back().tau;
    }
    fits.push_back(fit_structured_l2e(data, pen, o));
  }
  return fits;
}

}  // namespace

namespace detail {

std::vector<std::vector<Eigen::Index>> fold_partition(Eigen::Index n, int folds,
                                                      std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cv: need at least 2 folds");
  if (n / folds < 2) throw std::invalid_argument("cv: fold size below 2 observations");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<std::vector<Eigen::Index>> parts(static_cast<std::size_t>(folds));
  const Eigen::Index base = n / folds;
  const Eigen::Index rem = n % folds;
  Eigen::Index at = 0;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index len = base + (f < rem ? 1 : 0);
    parts[static_cast<std::size_t>(f)].assign(idx.begin() + at, idx.begin() + at + len);
    at += len;
  }
  return parts;
}

}  // namespace detail

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) {
    // log10 from 1 down to -4
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, 1.0 - 5.0 * i / 19.0);
  }
  return grid;
}

CvResult cross_validate(const Dataset& data, const PenaltySpec& proto,
                        const std::vector<double>& lambda_grid, int folds,
                        const SolverOptions& opts, std::uint64_t seed) {
  data.validate();
  check_grid(lambda_grid);
  const auto parts = detail::fold_partition(data.n_rows(), folds, seed);

  CvResult res;
  res.table.lambdas = lambda_grid;
  res.table.fold_scores.resize(folds, static_cast<Eigen::Index>(lambda_grid.size()));

  parallel_for(static_cast<std::size_t>(folds), [&](std::size_t f) {
    std::vector<Eigen::Index> train_rows;
    train_rows.reserve(static_cast<std::size_t>(data.n_rows()));
    for (std::size_t g = 0; g < parts.size(); ++g) {
      if (g == f) continue;
      train_rows.insert(train_rows.end(), parts[g].begin(), parts[g].end());
    }
    const Dataset train = take_rows(data, train_rows);
    const Dataset val = take_rows(data, parts[f]);
    const auto fits = path_fits(train, proto, lambda_grid, opts);
    for (std::size_t l = 0; l < fits.size(); ++l) {
      res.table.fold_scores(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(l)) =
          l2e_loss(fits[l].beta, fits[l].tau, val);
    }
  });

  res.table.mean_scores.resize(lambda_grid.size());
  std::size_t best = 0;
  for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
    res.table.mean_scores[l] =
        res.table.fold_scores.col(static_cast<Eigen::Index>(l)).mean();
    // strict comparison keeps the largest lambda on ties (grid is decreasing)
    if (res.table.mean_scores[l] < res.table.mean_scores[best]) best = l;
  }
  res.best_lambda = lambda_grid[best];
  return res;
}

FitResult fit_l2e_cv(const Dataset& data, const PenaltySpec& proto,
                     const std::vector<double>& lambda_grid, int folds,
                     const SolverOptions& opts, std::uint64_t seed) {
  if (proto.kind == PenaltyKind::none) {
    PenaltySpec pen = proto;
    pen.lambda = 0.0;
    return fit_structured_l2e(data, pen, opts);
  }
  const CvResult cv = cross_validate(data, proto, lambda_grid, folds, opts, seed);
  std::vector<double> head;
  for (double l : lambda_grid) {
    head.push_back(l);
    if (l == cv.best_lambda) break;
  }
  auto fits = path_fits(data, proto, head, opts);
  return std::move(fits.back());
}

Eigen::VectorXd ls_lasso_cv(const Dataset& data,
                            const std::vector<double>& lambda_grid, int folds,
                            std::uint64_t seed) {
  data.validate();
  check_grid(lambda_grid);
  const auto parts = detail::fold_partition(data.n_rows(), folds, seed);

  Eigen::MatrixXd scores(folds, static_cast<Eigen::Index>(lambda_grid.size()));
  parallel_for(static_cast<std::size_t>(folds), [&](std::size_t f) {
    std::vector<Eigen::Index> train_rows;
    for (std::size_t g = 0; g < parts.size(); ++g) {
      if (g == f) continue;
      train_rows.insert(train_rows.end(), parts[g].begin(), parts[g].end());
    }
    const Dataset train = take_rows(data, train_rows);
    const Dataset val = take_rows(data, parts[f]);
    PenaltySpec pen{PenaltyKind::lasso, 0.0, {}};
    for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
      pen.lambda = lambda_grid[l];
      const Eigen::VectorXd beta = ls_penalized_fit(train, pen);
      scores(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(l)) =
          (val.y - val.X * beta).squaredNorm() / static_cast<double>(val.n_rows());
    }
  });

  std::size_t best = 0;
  double best_score = scores.col(0).mean();
  for (std::size_t l = 1; l < lambda_grid.size(); ++l) {
    const double s = scores.col(static_cast<Eigen::Index>(l)).mean();
    if (s < best_score) {
      best_score = s;
      best = l;
    }
  }
  PenaltySpec pen{PenaltyKind::lasso, lambda_grid[best], {}};
  return ls_penalized_fit(data, pen);
}

}  // namespace transl2e
