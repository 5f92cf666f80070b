#pragma once

// Least-squares fitting of a model family to a sampled series.
//
// Bounded parameters are optimized in unconstrained coordinates:
//   positive       u = log(v)
//   lower bound 1  u = log(v - 1)
//   free           u = v
// The amplitude never enters the optimizer. For a shape s evaluated on the
// series abscissae the loss-minimizing amplitude is sum(y s) / sum(s^2), so
// each loss evaluation solves for it in closed form.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "unimodal/error.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/nelder_mead.hpp"
#include "unimodal/random.hpp"

namespace unimodal {

struct FitConfig {
  int starts = 16;
  int max_iterations = 2000;
  double simplex_tolerance = 1e-12;
  std::uint64_t seed = 0;

  void validate() const {
    if (starts < 1) throw ArgumentError("starts must be at least 1");
    if (max_iterations < 1) throw ArgumentError("max_iterations must be at least 1");
    if (!(simplex_tolerance > 0.0)) throw ArgumentError("simplex_tolerance must be positive");
  }
};

struct FitResult {
  CurveModel model;
  double rms = 0.0;
  std::vector<double> start_losses;
  int iterations_used = 0;
  bool converged = false;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Every start ended with a non-finite loss, or the series has no peak.
class FitFailureError : public Error {
public:
  FitFailureError(const std::string& what, std::vector<double> start_losses)
      : Error(what), start_losses_(std::move(start_losses)) {}

  const std::vector<double>& start_losses() const noexcept { return start_losses_; }

private:
  std::vector<double> start_losses_;
};

/// How a parameter is sampled for start points and synthetic generation.
struct ParameterRange {
  enum class Scale { Linear, Log };
  enum class Map { Identity, Log, LogAboveOne };

  double lo;
  double hi;
  Scale scale;
  /// Added after sampling; Beta exponents are sampled on [0.05, 50] and shifted by 1.
  double offset;
  Map map;
  /// Initial simplex edge in the unconstrained coordinate.
  double step;

  double sample_at(double unit) const {
    const double u = scale == Scale::Log ? std::exp(std::log(lo) + unit * (std::log(hi) - std::log(lo))) : lo + unit * (hi - lo);
    return offset + u;
  }
};

/// Documented start and generation ranges per family.
inline std::span<const ParameterRange> parameter_ranges(ModelKind kind) {
  using S = ParameterRange::Scale;
  using M = ParameterRange::Map;
  static const std::array<ParameterRange, 3> richards = {{
      {2.0, 100.0, S::Log, 0.0, M::Log, 0.3},
      {0.0, 1.0, S::Linear, 0.0, M::Identity, 0.05},
      {0.1, 10.0, S::Log, 0.0, M::Log, 0.3},
  }};
  static const std::array<ParameterRange, 3> skewnormal = {{
      {0.0, 1.0, S::Linear, 0.0, M::Identity, 0.05},
      {0.02, 1.0, S::Log, 0.0, M::Log, 0.3},
      {-20.0, 20.0, S::Linear, 0.0, M::Identity, 1.0},
  }};
  static const std::array<ParameterRange, 3> gengamma = {{
      {0.05, 2.0, S::Log, 0.0, M::Log, 0.3},
      {1.1, 30.0, S::Log, 0.0, M::LogAboveOne, 0.3},
      {0.3, 10.0, S::Log, 0.0, M::Log, 0.3},
  }};
  static const std::array<ParameterRange, 2> maxent = {{
      {0.05, 50.0, S::Log, 0.0, M::Log, 0.3},
      {0.05, 50.0, S::Log, 0.0, M::Log, 0.3},
  }};
  static const std::array<ParameterRange, 2> beta = {{
      {0.05, 50.0, S::Log, 1.0, M::LogAboveOne, 0.3},
      {0.05, 50.0, S::Log, 1.0, M::LogAboveOne, 0.3},
  }};
  switch (kind) {
  case ModelKind::Richards:
    return richards;
  case ModelKind::Skewnormal:
    return skewnormal;
  case ModelKind::GenGamma:
    return gengamma;
  case ModelKind::MaxEnt:
    return maxent;
  case ModelKind::Beta:
    return beta;
  }
  return {};
}

namespace detail {

inline double encode(ParameterRange::Map map, double v) {
  switch (map) {
  case ParameterRange::Map::Identity:
    return v;
  case ParameterRange::Map::Log:
    return std::log(v);
  case ParameterRange::Map::LogAboveOne:
    return std::log(v - 1.0);
  }
  return v;
}

inline double decode(ParameterRange::Map map, double u) {
  switch (map) {
  case ParameterRange::Map::Identity:
    return u;
  case ParameterRange::Map::Log:
    return std::exp(u);
  case ParameterRange::Map::LogAboveOne:
    return 1.0 + std::exp(u);
  }
  return u;
}

/// Observed argmax and half-maximum width, used to seed the first start.
struct PeakSummary {
  double location;
  double width;
};

inline PeakSummary summarize_peak(const SampledSeries& s) {
  const auto top = static_cast<std::size_t>(std::max_element(s.ys.begin(), s.ys.end()) - s.ys.begin());
  const double half = 0.5 * s.ys[top];
  double lo = s.xs[top];
  double hi = s.xs[top];
  for (std::size_t i = top; i-- > 0 && s.ys[i] >= half;) lo = s.xs[i];
  for (std::size_t i = top + 1; i < s.size() && s.ys[i] >= half; ++i) hi = s.xs[i];
  const double spacing = (s.xs.back() - s.xs.front()) / static_cast<double>(std::max<std::size_t>(s.size() - 1, 1));
  return {std::clamp(s.xs[top], 0.05, 0.95), std::clamp(hi - lo + spacing, 0.02, 1.0)};
}

/// A moment-matched start: same peak location and curvature as the data.
inline std::vector<double> heuristic_start(ModelKind kind, const SampledSeries& series) {
  const auto [m, w] = summarize_peak(series);
  const double sigma = w / 2.3548;
  const double var = sigma * sigma;
  switch (kind) {
  case ModelKind::MaxEnt: {
    const double s2 = m * (1.0 - m) / (2.0 * var);
    return {std::clamp(m * m * s2, 0.05, 50.0), std::clamp((1.0 - m) * (1.0 - m) * s2, 0.05, 50.0)};
  }
  case ModelKind::Beta: {
    const double k = std::min(m * (1.0 - m) / var, 100.0);
    return {1.0 + std::max(m * k, 0.05), 1.0 + std::max((1.0 - m) * k, 0.05)};
  }
  case ModelKind::Richards:
    return {std::clamp(3.5255 / w, 2.0, 100.0), m, 1.0};
  case ModelKind::Skewnormal:
    return {m, std::clamp(sigma, 0.02, 1.0), 0.0};
  case ModelKind::GenGamma: {
    const double d = std::clamp(1.0 + m * m / (2.0 * var), 1.1, 30.0);
    return {m / std::sqrt((d - 1.0) / 2.0), d, 2.0};
  }
  }
  return {};
}

/// Loss evaluator with per-abscissa logarithms cached.
class ProfiledLoss {
public:
  ProfiledLoss(const SampledSeries& series, ModelKind kind)
      : series_(series), kind_(kind), ranges_(parameter_ranges(kind)), log_shape_(series.size()), shape_(series.size()) {}

  /// Decodes unconstrained coordinates; nullopt when the decoded vector is invalid.
  std::optional<std::array<double, kMaxShapeParams>> decode_params(std::span<const double> u) const {
    std::array<double, kMaxShapeParams> v{};
    for (std::size_t i = 0; i < u.size(); ++i) {
      v[i] = decode(ranges_[i].map, u[i]);
    }
    if (parameter_violation(kind_, std::span<const double>(v.data(), u.size()))) {
      return std::nullopt;
    }
    return v;
  }

  /// RMS residual with the optimal amplitude; +inf when undefined.
  double operator()(std::span<const double> u) {
    const auto v = decode_params(u);
    if (!v) {
      return std::numeric_limits<double>::infinity();
    }
    double amplitude = 0.0;
    return loss(v->data(), amplitude);
  }

  /// Loss plus the grid-normalized amplitude and the grid log-maximum.
  double loss(const double* v, double& amplitude) {
    const std::size_t n = series_.size();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      log_shape_[i] = log_shape_unchecked(kind_, v, series_.xs[i]);
      if (std::isnan(log_shape_[i])) {
        return std::numeric_limits<double>::infinity();
      }
      top = std::max(top, log_shape_[i]);
    }
    if (!std::isfinite(top)) {
      return std::numeric_limits<double>::infinity();
    }
    log_top_ = top;
    double sy = 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      shape_[i] = std::exp(log_shape_[i] - top);
      sy += series_.ys[i] * shape_[i];
      ss += shape_[i] * shape_[i];
    }
    amplitude = std::max(sy / ss, 0.0);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = series_.ys[i] - amplitude * shape_[i];
      sse += r * r;
    }
    return std::sqrt(sse / static_cast<double>(n));
  }

  double log_top() const noexcept { return log_top_; }

private:
  const SampledSeries& series_;
  ModelKind kind_;
  std::span<const ParameterRange> ranges_;
  std::vector<double> log_shape_;
  std::vector<double> shape_;
  double log_top_ = 0.0;
};

inline void check_series(const SampledSeries& series) {
  if (series.xs.size() != series.ys.size()) {
    throw ArgumentError("series xs and ys differ in length");
  }
  if (series.size() < 2) {
    throw ArgumentError("series needs at least 2 points (got " + std::to_string(series.size()) + ")");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series.xs[i] >= 0.0 && series.xs[i] <= 1.0)) {
      throw ArgumentError("series abscissa outside [0, 1] at index " + std::to_string(i));
    }
    if (!std::isfinite(series.ys[i])) {
      throw ArgumentError("series value not finite at index " + std::to_string(i));
    }
  }
}

} // namespace detail

/// sqrt(mean((y - model(x))^2)).
inline double rms_loss(const SampledSeries& observed, const CurveModel& model) {
  detail::check_series(observed);
  const UnitPeakCurve curve(model);
  double sse = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double r = observed.ys[i] - curve(observed.xs[i]);
    sse += r * r;
  }
  return std::sqrt(sse / static_cast<double>(observed.size()));
}

/// Start points in parameter space: a data-matched point first, then a seeded
/// Latin hypercube over the documented ranges. The first k points do not depend
/// on how many starts follow them beyond the hypercube size.
inline std::vector<std::vector<double>> start_points(ModelKind kind, const SampledSeries& series, int starts, std::uint64_t seed) {
  const auto ranges = parameter_ranges(kind);
  const std::size_t dim = ranges.size();
  std::vector<std::vector<double>> points;
  points.push_back(detail::heuristic_start(kind, series));

  const std::size_t cube = static_cast<std::size_t>(starts - 1);
  if (cube == 0) {
    return points;
  }
  // One stratum permutation per dimension.
  std::vector<std::vector<std::size_t>> strata(dim, std::vector<std::size_t>(cube));
  for (std::size_t d = 0; d < dim; ++d) {
    std::iota(strata[d].begin(), strata[d].end(), std::size_t{0});
    RandomStream rng(hash_seed(seed, {0x5374726174ULL, d}));
    for (std::size_t i = cube; i > 1; --i) {
      std::swap(strata[d][i - 1], strata[d][rng.below(i)]);
    }
  }
  for (std::size_t s = 0; s < cube; ++s) {
    RandomStream rng(hash_seed(seed, {0x4a6974746572ULL, s + 1}));
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const double unit = (static_cast<double>(strata[d][s]) + rng.uniform()) / static_cast<double>(cube);
      p[d] = ranges[d].sample_at(unit);
    }
    points.push_back(std::move(p));
  }
  return points;
}

/// Fits one family by multi-start Nelder-Mead on the profiled RMS loss.
inline FitResult fit(const SampledSeries& observed, ModelKind kind, const FitConfig& config = {}) {
  config.validate();
  detail::check_series(observed);
  if (*std::max_element(observed.ys.begin(), observed.ys.end()) <= 0.0) {
    throw FitFailureError("series has no positive values; there is no peak to fit", {});
  }

  const auto ranges = parameter_ranges(kind);
  const std::size_t dim = ranges.size();
  detail::ProfiledLoss loss(observed, kind);

  NelderMeadOptions options;
  options.max_iterations = static_cast<std::size_t>(config.max_iterations);
  options.tolerance = config.simplex_tolerance;
  options.initial_step.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    options.initial_step[d] = ranges[d].step;
  }

  const auto points = start_points(kind, observed, config.starts, config.seed);
  std::vector<double> start_losses;
  start_losses.reserve(points.size());
  NelderMeadResult best;
  std::size_t best_start = points.size();
  for (std::size_t s = 0; s < points.size(); ++s) {
    std::vector<double> u(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      u[d] = detail::encode(ranges[d].map, points[s][d]);
    }
    auto run = nelder_mead([&](const std::vector<double>& x) { return loss(x); }, std::move(u), options);
    start_losses.push_back(run.value);
    // Strict comparison keeps the lowest start index on exact ties.
    if (std::isfinite(run.value) && (best_start == points.size() || run.value < best.value)) {
      best = std::move(run);
      best_start = s;
    }
  }
  if (best_start == points.size()) {
    throw FitFailureError("all " + std::to_string(points.size()) + " starts ended with a non-finite loss", start_losses);
  }

  const auto values = *loss.decode_params(best.x);
  ShapeParams params(kind, std::span<const double>(values.data(), dim));
  double grid_amplitude = 0.0;
  loss.loss(values.data(), grid_amplitude);
  const double amplitude = grid_amplitude * std::exp(log_shape_value(params, mode(params)) - loss.log_top());
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw FitFailureError("best fit has a degenerate amplitude", start_losses);
  }
  return FitResult{CurveModel(std::move(params), amplitude), best.value, std::move(start_losses),
                   static_cast<int>(best.iterations), best.converged};
}

} // namespace unimodal
