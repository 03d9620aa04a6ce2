#pragma once

// Independent reference computations used only by the tests. None of these
// go through NormOracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "latticelab/core.hpp"

namespace oracle {

inline double pnorm(const std::vector<double>& x, double p, const std::vector<double>& w = {}) {
  double acc = 0.0;
  double mx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = std::abs(x[k]) * (w.empty() ? 1.0 : w[k]);
    mx = std::max(mx, v);
    acc += std::pow(v, p);
  }
  return std::isinf(p) ? mx : std::pow(acc, 1.0 / p);
}

// Partial-sum basis v_k = e_1 + ... + e_k with ||sum a_k v_k|| = ||(a_k / k)||_2.
// Back substitution: a_k = x_k - x_{k+1}, a_n = x_n.
inline double vbasis(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = x[k] - (k + 1 < n ? x[k + 1] : 0.0);
    const double t = a / static_cast<double>(k + 1);
    acc += t * t;
  }
  return std::sqrt(acc);
}

// Exact restriction constant of the partial-sum pullback: the largest
// operator norm over A of D T^{-1} P_A T D^{-1} in l2.
inline double vbasis_restriction_constant(std::size_t n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = 1.0 / static_cast<double>(i + 1);
    for (std::size_t k = i; k < n; ++k) t(i, k) = 1.0;
  }
  const Eigen::MatrixXd tinv = t.inverse();
  const Eigen::MatrixXd dinv = d.inverse();
  double best = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, i) = (mask >> i) & 1u ? 1.0 : 0.0;
    const Eigen::MatrixXd m = d * tinv * p * t * dinv;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

// base_k * sum of the coefficients of the pieces covering k, left to right.
inline std::vector<double> direct_sum(const latticelab::SimpleRep& rep) {
  const std::size_t n = rep.base.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    bool covered = false;
    double acc = 0.0;
    for (const auto& piece : rep.pieces) {
      if (!piece.set.contains(k)) continue;
      acc = covered ? acc + piece.coefficient : piece.coefficient;
      covered = true;
    }
    out[k] = covered ? acc * rep.base[k] : 0.0;
  }
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace oracle
