#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trust/dataset.hpp"
#include "trust/matrix.hpp"
#include "trust/rng.hpp"

namespace trust {

enum class SyntheticFamily { kCorrelated, kFriedman, kMax, kSparse, kSteps };

struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::kFriedman;
  std::size_t n = 500;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

inline const char* family_name(SyntheticFamily f) {
  switch (f) {
    case SyntheticFamily::kCorrelated: return "correlated";
    case SyntheticFamily::kFriedman: return "friedman";
    case SyntheticFamily::kMax: return "max";
    case SyntheticFamily::kSparse: return "sparse";
    case SyntheticFamily::kSteps: return "steps";
  }
  return "?";
}

inline SyntheticFamily parse_family(const std::string& s) {
  if (s == "correlated") return SyntheticFamily::kCorrelated;
  if (s == "friedman") return SyntheticFamily::kFriedman;
  if (s == "max") return SyntheticFamily::kMax;
  if (s == "sparse") return SyntheticFamily::kSparse;
  if (s == "steps") return SyntheticFamily::kSteps;
  throw std::invalid_argument("unknown synthetic family: " + s);
}

inline std::size_t family_features(SyntheticFamily f) {
  switch (f) {
    case SyntheticFamily::kCorrelated: return 8;   // 4 signal + 4 noise
    case SyntheticFamily::kFriedman: return 10;    // 5 signal + 5 noise
    case SyntheticFamily::kMax: return 4;          // 2 signal + 2 noise
    case SyntheticFamily::kSparse: return 50;      // active set {1..5}
    case SyntheticFamily::kSteps: return 4;        // 2 signal + 2 noise
  }
  return 0;
}

// Ground-truth coefficients of the sparse family: 5 active, 45 zero. The
// magnitude is chosen so the linear signal dominates both noise levels used
// in the benchmarks.
inline std::vector<double> sparse_true_coefficients() {
  std::vector<double> beta(50, 0.0);
  for (std::size_t j = 0; j < 5; ++j) beta[j] = 50.0;
  return beta;
}

namespace detail {

// Covariance of the four signal variables in the correlated family.
inline const Matrix& correlated_covariance() {
  static const Matrix cov = [] {
    Matrix m(4, 4);
    const double v[4][4] = {{1.0, -0.3, 0.5, 0.2},
                            {-0.3, 1.0, 0.6, 0.5},
                            {0.5, 0.6, 1.0, 0.8},
                            {0.2, 0.5, 0.8, 1.0}};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = v[i][j];
    return m;
  }();
  return cov;
}

inline const Matrix& correlated_cholesky() {
  static const Matrix l = [] {
    auto f = cholesky(correlated_covariance());
    if (!f) throw std::logic_error("correlated covariance is not positive definite");
    return *f;
  }();
  return l;
}

}  // namespace detail

// Noise-free response of each family, evaluated on one covariate row.
inline double synthetic_signal(SyntheticFamily family, std::span<const double> x) {
  switch (family) {
    case SyntheticFamily::kCorrelated:
      return x[0] * x[1] * x[1] + x[1] * std::exp(x[2]) - x[2] * x[3] * x[3] * x[3] +
             std::floor(x[0]) * std::cos(x[3]);
    case SyntheticFamily::kFriedman:
      return 10.0 * std::sin(M_PI * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
             10.0 * x[3] + 5.0 * x[4];
    case SyntheticFamily::kMax:
      return 5.0 * std::max(1.0 + x[0] + x[1], 0.0);
    case SyntheticFamily::kSparse: {
      const auto beta = sparse_true_coefficients();
      double s = 0.0;
      for (std::size_t j = 0; j < beta.size(); ++j) s += beta[j] * x[j];
      return s;
    }
    case SyntheticFamily::kSteps:
      return 10.0 * std::ceil((x[0] + x[1]) / 2.0);
  }
  throw std::invalid_argument("unknown synthetic family");
}

// Draws one of the five synthetic datasets. Per row the covariates are drawn
// first (signal variables, then noise variables), then the response noise,
// in a fixed order so a seed pins the whole table. Features are named
// x1..xp, the target "y".
inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate_synthetic: n must be >= 1");
  if (!(spec.noise_sd > 0.0)) throw std::invalid_argument("generate_synthetic: noise_sd must be > 0");

  const std::size_t p = family_features(spec.family);
  Dataset d;
  d.n_rows = spec.n;
  d.target_name = "y";
  d.target.resize(spec.n);
  d.columns.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    d.feature_names.push_back("x" + std::to_string(j + 1));
    d.columns[j].kind = ColumnKind::kNumeric;
    d.columns[j].values.resize(spec.n);
    d.columns[j].missing.assign(spec.n, 0);
  }

  Rng rng(spec.seed);
  std::vector<double> x(p);
  for (std::size_t i = 0; i < spec.n; ++i) {
    switch (spec.family) {
      case SyntheticFamily::kCorrelated: {
        std::array<double, 4> z;
        for (double& v : z) v = rng.normal();
        const Matrix& l = detail::correlated_cholesky();
        for (std::size_t r = 0; r < 4; ++r) {
          double s = 0.0;
          for (std::size_t c = 0; c <= r; ++c) s += l(r, c) * z[c];
          x[r] = s;
        }
        for (std::size_t j = 4; j < 8; ++j) x[j] = rng.normal();
        break;
      }
      case SyntheticFamily::kFriedman:
        for (std::size_t j = 0; j < 10; ++j) x[j] = rng.uniform();
        break;
      case SyntheticFamily::kMax:
      case SyntheticFamily::kSteps:
        for (std::size_t j = 0; j < 4; ++j) x[j] = rng.normal();
        break;
      case SyntheticFamily::kSparse:
        for (std::size_t j = 0; j < 50; ++j) x[j] = rng.normal();
        break;
    }
    for (std::size_t j = 0; j < p; ++j) d.columns[j].values[i] = x[j];
    d.target[i] = synthetic_signal(spec.family, x) + spec.noise_sd * rng.normal();
  }
  return d;
}

}  // namespace trust
