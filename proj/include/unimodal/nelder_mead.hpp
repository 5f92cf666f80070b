#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "unimodal/error.hpp"

namespace unimodal {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  /// Converged once max f - min f over the simplex is at most this.
  double tolerance = 1e-12;
  /// Initial simplex edge along each coordinate; size must match x0.
  std::vector<double> initial_step;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with the Nelder-Mead simplex method.
///
/// Non-finite function values are treated as +inf, so the simplex contracts
/// away from them.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) {
    throw ArgumentError("nelder_mead needs at least one coordinate");
  }
  if (options.initial_step.size() != dim) {
    throw ArgumentError("nelder_mead initial_step size must match the start point");
  }

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double value = f(x);
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> vertex(dim + 1, x0);
  std::vector<double> value(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    vertex[i + 1][i] += options.initial_step[i];
  }
  for (std::size_t i = 0; i <= dim; ++i) {
    value[i] = eval(vertex[i]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> reflected(dim);
  std::vector<double> trial(dim);
  auto along = [&](std::vector<double>& out, double t, const std::vector<double>& toward) {
    for (std::size_t j = 0; j < dim; ++j) {
      out[j] = centroid[j] + t * (toward[j] - centroid[j]);
    }
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (value[worst] - value[best] <= options.tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iterations) {
      break;
    }
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        centroid[j] += vertex[i][j];
      }
    }
    for (double& c : centroid) {
      c /= static_cast<double>(dim);
    }

    along(reflected, -options.reflection, vertex[worst]);
    const double f_reflected = eval(reflected);

    if (f_reflected < value[best]) {
      along(trial, options.expansion, reflected);
      const double f_expanded = eval(trial);
      if (f_expanded < f_reflected) {
        vertex[worst] = trial;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }

    bool accepted = false;
    if (f_reflected < value[worst]) {
      along(trial, options.contraction, reflected);
      const double f_contracted = eval(trial);
      if (f_contracted <= f_reflected) {
        vertex[worst] = trial;
        value[worst] = f_contracted;
        accepted = true;
      }
    } else {
      along(trial, options.contraction, vertex[worst]);
      const double f_contracted = eval(trial);
      if (f_contracted < value[worst]) {
        vertex[worst] = trial;
        value[worst] = f_contracted;
        accepted = true;
      }
    }
    if (accepted) continue;

    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        vertex[i][j] = vertex[best][j] + options.shrink * (vertex[i][j] - vertex[best][j]);
      }
      value[i] = eval(vertex[i]);
    }
  }

  const auto best_it = std::min_element(value.begin(), value.end());
  const auto best_index = static_cast<std::size_t>(best_it - value.begin());
  result.x = vertex[best_index];
  result.value = *best_it;
  return result;
}

} // namespace unimodal
