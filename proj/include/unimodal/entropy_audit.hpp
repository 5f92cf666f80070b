#pragma once

// Numerical check that the MaxEnt and Beta shapes maximize differential
// entropy H = -int p log p subject to a mass constraint and two weighted
// boundary constraints int f p, int g p, where
//
//   MaxEnt:  f(x) = 1/x,      g(x) = 1/(1-x)
//   Beta:    f(x) = log x,    g(x) = log(1-x)
//
// Both log p are linear combinations of {1, f, g}, so any perturbation that
// keeps the three constraint integrals fixed must lower H.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "unimodal/error.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/quadrature.hpp"
#include "unimodal/random.hpp"

namespace unimodal {

struct ConstraintIntegrals {
  double c1 = 0.0; ///< mass
  double c2 = 0.0; ///< int f p
  double c3 = 0.0; ///< int g p
};

struct AuditReport {
  double entropy = 0.0;
  ConstraintIntegrals constraints;
  int perturbation_trials = 0;
  int perturbation_failures = 0;
  /// Trials whose projected perturbation stayed degenerate after all redraws.
  int perturbation_skipped = 0;
  /// False for Beta with a or b equal to 1, where the perturbation test is not run.
  bool audited = true;
  /// Largest H(p + delta) - H(p) seen over all trials (negative for a maximizer).
  double max_entropy_change = -std::numeric_limits<double>::infinity();
};

inline constexpr double kPerturbationScale = 1e-3;
inline constexpr double kEntropyGainTolerance = 1e-9;
inline constexpr int kPerturbationDegree = 8;
inline constexpr int kMaxRedraws = 10;

namespace detail {

inline void require_entropy_family(const ShapeParams& params) {
  if (params.kind() != ModelKind::MaxEnt && params.kind() != ModelKind::Beta) {
    throw UnsupportedFamilyError(std::string("entropy audit is defined for MaxEnt and Beta only, not ") +
                                 std::string(kind_name(params.kind())));
  }
}

/// Unit-mass density and constraint weights sampled on the quadrature nodes.
struct NodeDensity {
  std::vector<double> log_p;
  std::vector<double> p;
  std::vector<double> f;
  std::vector<double> g;
};

inline NodeDensity node_density(const ShapeParams& params, const QuadratureRule& rule) {
  require_entropy_family(params);
  const std::size_t n = rule.size();
  const double log_peak = log_shape_value(params, mode(params));
  NodeDensity out;
  out.log_p.resize(n);
  out.p.resize(n);
  out.f.resize(n);
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.log_p[i] = log_shape_value(params, rule.nodes[i]) - log_peak;
    out.p[i] = std::exp(out.log_p[i]);
  }
  const double log_mass = std::log(rule.sum(out.p));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    out.log_p[i] -= log_mass;
    out.p[i] = std::exp(out.log_p[i]);
    if (params.kind() == ModelKind::MaxEnt) {
      out.f[i] = 1.0 / x;
      out.g[i] = 1.0 / (1.0 - x);
    } else {
      out.f[i] = std::log(x);
      out.g[i] = std::log1p(-x);
    }
  }
  return out;
}

/// -sum w p log p with 0 log 0 = 0.
inline double entropy_on_nodes(const QuadratureRule& rule, const std::vector<double>& p, const std::vector<double>& log_p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      h -= rule.weights[i] * p[i] * log_p[i];
    }
  }
  return h;
}

/// Shifted Legendre polynomials P_0..P_degree at x in [0, 1].
inline std::array<double, kPerturbationDegree + 1> legendre_basis(double x) {
  std::array<double, kPerturbationDegree + 1> out{};
  const double s = 2.0 * x - 1.0;
  out[0] = 1.0;
  out[1] = s;
  for (int k = 1; k < kPerturbationDegree; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * s * out[k] - k * out[k - 1]) / (k + 1.0);
  }
  return out;
}

} // namespace detail

/// Differential entropy of the unit-mass shape over [cutoff, 1 - cutoff].
inline double entropy_of(const ShapeParams& params, const QuadratureSpec& quad = {}) {
  detail::require_entropy_family(params);
  const QuadratureRule rule(quad);
  const auto density = detail::node_density(params, rule);
  return detail::entropy_on_nodes(rule, density.p, density.log_p);
}

inline ConstraintIntegrals constraint_integrals(const ShapeParams& params, const QuadratureSpec& quad = {}) {
  detail::require_entropy_family(params);
  const QuadratureRule rule(quad);
  const auto density = detail::node_density(params, rule);
  ConstraintIntegrals out;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double wp = rule.weights[i] * density.p[i];
    out.c1 += wp;
    out.c2 += wp * density.f[i];
    out.c3 += wp * density.g[i];
  }
  return out;
}

/// Tests local maximality of the entropy under constraint-preserving perturbations.
///
/// Each trial draws a random degree-8 polynomial q, projects it onto the
/// complement of span{1, f, g} in the p-weighted inner product, and perturbs
/// p by delta = t p q. The projection makes int delta, int f delta and
/// int g delta vanish; the multiplicative form keeps delta zero wherever p is.
/// t is chosen so max |delta| = 1e-3 max p, reduced if needed to keep p + delta >= 0.
inline AuditReport perturbation_audit(const ShapeParams& params, const QuadratureSpec& quad, int trials, std::uint64_t seed) {
  detail::require_entropy_family(params);
  if (trials < 0) {
    throw ArgumentError("trials must be nonnegative");
  }
  const QuadratureRule rule(quad);
  const auto density = detail::node_density(params, rule);
  const std::size_t n = rule.size();

  AuditReport report;
  report.entropy = detail::entropy_on_nodes(rule, density.p, density.log_p);
  report.constraints = constraint_integrals(params, quad);
  if (params.kind() == ModelKind::Beta && (params[0] <= 1.0 || params[1] <= 1.0)) {
    report.audited = false;
    return report;
  }

  // Weighted inner product <u, v> = sum w p u v.
  std::vector<double> wp(n);
  for (std::size_t i = 0; i < n; ++i) {
    wp[i] = rule.weights[i] * density.p[i];
  }
  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += wp[i] * u[i] * v[i];
    }
    return s;
  };
  auto remove_span = [&](std::vector<double>& u, const std::vector<std::vector<double>>& basis) {
    // Two passes of modified Gram-Schmidt; f = 1/x spans many orders of magnitude.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : basis) {
        const double c = dot(u, e);
        for (std::size_t i = 0; i < n; ++i) {
          u[i] -= c * e[i];
        }
      }
    }
  };

  std::vector<std::vector<double>> basis;
  for (const std::vector<double>& raw : {std::vector<double>(n, 1.0), density.f, density.g}) {
    std::vector<double> e = raw;
    remove_span(e, basis);
    const double norm = std::sqrt(dot(e, e));
    if (norm > 0.0 && std::isfinite(norm)) {
      for (double& value : e) {
        value /= norm;
      }
      basis.push_back(std::move(e));
    }
  }

  const double max_p = *std::max_element(density.p.begin(), density.p.end());
  std::vector<std::array<double, kPerturbationDegree + 1>> legendre(n);
  for (std::size_t i = 0; i < n; ++i) {
    legendre[i] = detail::legendre_basis(rule.nodes[i]);
  }

  std::vector<double> q(n);
  std::vector<double> perturbed_p(n);
  std::vector<double> perturbed_log_p(n);
  for (int trial = 0; trial < trials; ++trial) {
    bool drawn = false;
    for (int redraw = 0; redraw <= kMaxRedraws && !drawn; ++redraw) {
      RandomStream rng(hash_seed(seed, {static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(redraw)}));
      std::array<double, kPerturbationDegree + 1> coeffs{};
      for (double& c : coeffs) {
        c = rng.normal();
      }
      for (std::size_t i = 0; i < n; ++i) {
        double value = 0.0;
        for (int k = 0; k <= kPerturbationDegree; ++k) {
          value += coeffs[k] * legendre[i][k];
        }
        q[i] = value;
      }
      const double before = std::sqrt(dot(q, q));
      remove_span(q, basis);
      const double after = std::sqrt(dot(q, q));
      drawn = before > 0.0 && after > 1e-8 * before;
    }
    if (!drawn) {
      ++report.perturbation_skipped;
      continue;
    }

    double max_delta = 0.0;
    double max_negative_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_delta = std::max(max_delta, std::abs(density.p[i] * q[i]));
      if (density.p[i] > 0.0 && q[i] < 0.0) {
        max_negative_q = std::max(max_negative_q, -q[i]);
      }
    }
    double scale = kPerturbationScale * max_p / max_delta;
    if (max_negative_q > 0.0) {
      scale = std::min(scale, 1.0 / max_negative_q);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double factor = scale * q[i];
      perturbed_p[i] = density.p[i] * (1.0 + factor);
      perturbed_log_p[i] = factor <= -1.0 ? -std::numeric_limits<double>::infinity() : density.log_p[i] + std::log1p(factor);
    }
    const double change = detail::entropy_on_nodes(rule, perturbed_p, perturbed_log_p) - report.entropy;
    report.max_entropy_change = std::max(report.max_entropy_change, change);
    ++report.perturbation_trials;
    if (change > kEntropyGainTolerance) {
      ++report.perturbation_failures;
    }
  }
  return report;
}

} // namespace unimodal
