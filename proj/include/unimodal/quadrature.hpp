#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "unimodal/error.hpp"

namespace unimodal {

/// Integration settings over [cutoff, 1 - cutoff].
struct QuadratureSpec {
  std::size_t node_count = 2001;
  double endpoint_cutoff = 1e-8;

  void validate() const {
    if (node_count < 3 || node_count % 2 == 0) {
      throw ArgumentError("quadrature node_count must be odd and >= 3 (got " + std::to_string(node_count) + ")");
    }
    if (!(endpoint_cutoff > 0.0 && endpoint_cutoff < 0.5)) {
      throw ArgumentError("quadrature endpoint_cutoff must lie in (0, 0.5)");
    }
  }
};

/// Nodes and weights of a composite Simpson rule.
///
/// The rule is uniform in t on [0, 1] and mapped to x by the quintic
/// smoothstep x = c + (1 - 2c) t^3 (10 - 15 t + 6 t^2). The map has vanishing
/// first and second derivatives at both ends, which grades the nodes towards
/// the endpoints where Beta-type integrands behave like x^(a-1) log x.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit QuadratureRule(const QuadratureSpec& spec) {
    spec.validate();
    const std::size_t n = spec.node_count;
    const double c = spec.endpoint_cutoff;
    const double h = 1.0 / static_cast<double>(n - 1);
    nodes.resize(n);
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * h;
      const double smooth = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
      const double jacobian = 30.0 * t * t * (1.0 - t) * (1.0 - t);
      double simpson = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      nodes[i] = c + (1.0 - 2.0 * c) * smooth;
      weights[i] = simpson * h / 3.0 * (1.0 - 2.0 * c) * jacobian;
    }
    // The Jacobian vanishes at t = 0 and t = 1; keep the endpoints themselves
    // exactly on the cutoff.
    nodes.front() = c;
    nodes.back() = 1.0 - c;
  }

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (weights[i] != 0.0) {
        sum += weights[i] * f(nodes[i]);
      }
    }
    return sum;
  }

  /// Weighted sum over precomputed node values.
  double sum(const std::vector<double>& values) const {
    double out = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += weights[i] * values[i];
    }
    return out;
  }
};

} // namespace unimodal
