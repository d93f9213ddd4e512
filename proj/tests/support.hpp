#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <span>

#include <doctest.h>

#include "fkp/error.hpp"

#include "fkp/grid.hpp"
#include "fkp/solver.hpp"

namespace fkp::test {

// Code of the fkp::Error thrown by fn; fails the test when nothing is thrown.
template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no fkp::Error thrown");
  return ErrorCode::invalid_argument;
}

// Message of the fkp::Error thrown by fn.
template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("no fkp::Error thrown");
  return {};
}

inline RealField random_field(const SpectralGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(g.size());
  for (double& x : v) x = dist(rng);
  return {g, std::move(v)};
}

template <typename Fn>
RealField sample(const SpectralGrid& g, Fn&& fn) {
  std::vector<double> v(g.size());
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) v[g.index(ix, iy)] = fn(g.x(ix), g.y(iy));
  }
  return {g, std::move(v)};
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const RealField& a, const RealField& b) {
  return max_diff(a.values(), b.values());
}

// Small grid on which every alpha used in the tests converges in well under a second.
inline SpectralGrid small_grid() { return SpectralGrid::square(256, 32.0); }

inline SolverConfig small_config(double alpha, double c = 1.0) {
  SolverConfig cfg;
  cfg.params.alpha = alpha;
  cfg.params.c = c;
  cfg.grid = small_grid();
  cfg.max_iter = 400;
  return cfg;
}

// Converged small-grid solutions, solved once per alpha.
inline const SolveResult& small_solution(double alpha) {
  static std::map<double, SolveResult> cache;
  auto it = cache.find(alpha);
  if (it == cache.end()) it = cache.emplace(alpha, solve(small_config(alpha))).first;
  return it->second;
}

}  // namespace fkp::test
