#pragma once

// The five unimodal model families, expressed as shape functions on [0, 1].
//
// Shapes are unnormalized; evaluate() rescales them so the curve maximum on
// [0, 1] equals the model amplitude. Every family also has a log-shape used
// wherever the direct value can underflow.
//
//   MaxEnt      exp(-a/x - b/(1-x))                         a, b > 0
//   Beta        x^(a-1) (1-x)^(b-1)                         a, b >= 1
//   Richards    k u (1 + nu u)^-(1 + 1/nu),  u = e^-k(x-t0)  k, nu > 0
//   Skewnormal  phi(z) Phi(alpha z),  z = (x - xi)/omega     omega > 0
//   GenGamma    x^(d-1) exp(-(x/alpha)^p)                   alpha, p > 0, d > 1
//
// Richards is the derivative of the generalized logistic growth curve, so the
// family is a single bump rather than a sigmoid.

#include <algorithm>
#include <array>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unimodal/error.hpp"

namespace unimodal {

enum class ModelKind { Richards, Skewnormal, GenGamma, MaxEnt, Beta };

/// All families in cross-comparison table order.
inline constexpr std::array<ModelKind, 5> kAllKinds = {ModelKind::Richards, ModelKind::Skewnormal, ModelKind::GenGamma,
                                                      ModelKind::MaxEnt, ModelKind::Beta};

inline constexpr std::size_t kMaxShapeParams = 3;

constexpr std::size_t parameter_count(ModelKind kind) noexcept {
  switch (kind) {
  case ModelKind::MaxEnt:
  case ModelKind::Beta:
    return 2;
  case ModelKind::Richards:
  case ModelKind::Skewnormal:
  case ModelKind::GenGamma:
    return 3;
  }
  return 0;
}

constexpr std::size_t kind_index(ModelKind kind) noexcept { return static_cast<std::size_t>(kind); }

/// Display name ("MaxEnt").
constexpr std::string_view kind_name(ModelKind kind) noexcept {
  switch (kind) {
  case ModelKind::Richards:
    return "Richards";
  case ModelKind::Skewnormal:
    return "Skewnormal";
  case ModelKind::GenGamma:
    return "GenGamma";
  case ModelKind::MaxEnt:
    return "MaxEnt";
  case ModelKind::Beta:
    return "Beta";
  }
  return "?";
}

/// Command-line / file identifier ("maxent").
constexpr std::string_view kind_slug(ModelKind kind) noexcept {
  switch (kind) {
  case ModelKind::Richards:
    return "richards";
  case ModelKind::Skewnormal:
    return "skewnormal";
  case ModelKind::GenGamma:
    return "gengamma";
  case ModelKind::MaxEnt:
    return "maxent";
  case ModelKind::Beta:
    return "beta";
  }
  return "?";
}

/// Case-insensitive lookup by slug or display name.
inline std::optional<ModelKind> parse_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ModelKind kind : kAllKinds) {
    if (lower == kind_slug(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

inline std::span<const std::string_view> parameter_names(ModelKind kind) noexcept {
  static constexpr std::array<std::string_view, 3> richards = {"k", "t0", "nu"};
  static constexpr std::array<std::string_view, 3> skewnormal = {"xi", "omega", "alpha"};
  static constexpr std::array<std::string_view, 3> gengamma = {"alpha", "d", "p"};
  static constexpr std::array<std::string_view, 2> ab = {"a", "b"};
  switch (kind) {
  case ModelKind::Richards:
    return richards;
  case ModelKind::Skewnormal:
    return skewnormal;
  case ModelKind::GenGamma:
    return gengamma;
  case ModelKind::MaxEnt:
  case ModelKind::Beta:
    return ab;
  }
  return {};
}

/// Returns a description of the first violated bound, or nullopt when valid.
inline std::optional<std::string> parameter_violation(ModelKind kind, std::span<const double> values) {
  if (values.size() != parameter_count(kind)) {
    return std::string(kind_name(kind)) + " takes " + std::to_string(parameter_count(kind)) + " parameters, got " +
           std::to_string(values.size());
  }
  const auto names = parameter_names(kind);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      return std::string(kind_name(kind)) + " parameter " + std::string(names[i]) + " must be finite";
    }
  }
  auto fail = [&](std::size_t i, std::string_view bound) -> std::optional<std::string> {
    return std::string(kind_name(kind)) + " requires " + std::string(names[i]) + std::string(bound) + " (got " +
           std::to_string(values[i]) + ")";
  };
  switch (kind) {
  case ModelKind::MaxEnt:
    if (!(values[0] > 0.0)) return fail(0, " > 0");
    if (!(values[1] > 0.0)) return fail(1, " > 0");
    break;
  case ModelKind::Beta:
    if (!(values[0] >= 1.0)) return fail(0, " >= 1");
    if (!(values[1] >= 1.0)) return fail(1, " >= 1");
    break;
  case ModelKind::Richards:
    if (!(values[0] > 0.0)) return fail(0, " > 0");
    if (!(values[2] > 0.0)) return fail(2, " > 0");
    break;
  case ModelKind::Skewnormal:
    if (!(values[1] > 0.0)) return fail(1, " > 0");
    break;
  case ModelKind::GenGamma:
    if (!(values[0] > 0.0)) return fail(0, " > 0");
    if (!(values[1] > 1.0)) return fail(1, " > 1");
    if (!(values[2] > 0.0)) return fail(2, " > 0");
    break;
  }
  return std::nullopt;
}

/// Validated shape parameters of one family.
class ShapeParams {
public:
  ShapeParams(ModelKind kind, std::span<const double> values) : kind_(kind), size_(values.size()) {
    if (auto violation = parameter_violation(kind, values)) {
      throw ParameterBoundsError(*violation);
    }
    std::copy(values.begin(), values.end(), values_.begin());
  }

  ShapeParams(ModelKind kind, std::initializer_list<double> values)
      : ShapeParams(kind, std::span<const double>(values.begin(), values.size())) {}

  static ShapeParams maxent(double a, double b) { return {ModelKind::MaxEnt, {a, b}}; }
  static ShapeParams beta(double a, double b) { return {ModelKind::Beta, {a, b}}; }
  static ShapeParams richards(double k, double t0, double nu) { return {ModelKind::Richards, {k, t0, nu}}; }
  static ShapeParams skewnormal(double xi, double omega, double alpha) { return {ModelKind::Skewnormal, {xi, omega, alpha}}; }
  static ShapeParams gengamma(double alpha, double d, double p) { return {ModelKind::GenGamma, {alpha, d, p}}; }

  ModelKind kind() const noexcept { return kind_; }
  std::span<const double> values() const noexcept { return {values_.data(), size_}; }
  std::size_t size() const noexcept { return size_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const ShapeParams& lhs, const ShapeParams& rhs) noexcept {
    return lhs.kind_ == rhs.kind_ && lhs.size_ == rhs.size_ && std::equal(lhs.values().begin(), lhs.values().end(), rhs.values().begin());
  }

private:
  ModelKind kind_;
  std::size_t size_;
  std::array<double, kMaxShapeParams> values_{};
};

/// Shape parameters plus the curve height at its peak.
class CurveModel {
public:
  CurveModel(ShapeParams params, double amplitude) : params_(std::move(params)), amplitude_(amplitude) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
      throw ParameterBoundsError("amplitude must be positive and finite (got " + std::to_string(amplitude) + ")");
    }
  }

  const ShapeParams& params() const noexcept { return params_; }
  ModelKind kind() const noexcept { return params_.kind(); }
  double amplitude() const noexcept { return amplitude_; }

  friend bool operator==(const CurveModel&, const CurveModel&) = default;

private:
  ShapeParams params_;
  double amplitude_;
};

/// Abscissae in [0, 1] with ordinate values.
struct SampledSeries {
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t size() const noexcept { return xs.size(); }
  friend bool operator==(const SampledSeries&, const SampledSeries&) = default;
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kEndpointCutoff = 1e-300;

inline void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ArgumentError("abscissa must lie in [0, 1] (got " + std::to_string(x) + ")");
  }
}

/// log(1 + e^y) without overflow.
inline double softplus(double y) noexcept { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

/// log of the standard normal CDF, accurate far into the lower tail.
inline double log_normal_cdf(double t) noexcept {
  if (t > -35.0) {
    return std::log(0.5 * std::erfc(-t / std::numbers::sqrt2));
  }
  // Asymptotic Mills-ratio expansion; the truncation error is below 1e-13 here.
  const double inv2 = 1.0 / (t * t);
  const double series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2 * (1.0 - 7.0 * inv2)));
  return -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-t) + std::log(series);
}

inline double normal_pdf(double z) noexcept { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_cdf(double t) noexcept { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

/// Log-shape without the range check, for hot loops over validated grids.
inline double log_shape_unchecked(ModelKind kind, const double* v, double x) noexcept {
  switch (kind) {
  case ModelKind::MaxEnt:
    if (x <= kEndpointCutoff || 1.0 - x <= kEndpointCutoff) return kNegInf;
    return -v[0] / x - v[1] / (1.0 - x);
  case ModelKind::Beta: {
    double out = 0.0;
    if (v[0] != 1.0) out += (v[0] - 1.0) * std::log(x);
    if (v[1] != 1.0) out += (v[1] - 1.0) * std::log1p(-x);
    return out;
  }
  case ModelKind::Richards: {
    const double z = -v[0] * (x - v[1]);
    return std::log(v[0]) + z - (1.0 + 1.0 / v[2]) * softplus(z + std::log(v[2]));
  }
  case ModelKind::Skewnormal: {
    const double z = (x - v[0]) / v[1];
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) + log_normal_cdf(v[2] * z);
  }
  case ModelKind::GenGamma:
    if (x <= 0.0) return kNegInf;
    return (v[1] - 1.0) * std::log(x) - std::pow(x / v[0], v[2]);
  }
  return kNegInf;
}

} // namespace detail

/// Natural log of the unnormalized shape; -inf where the shape is zero.
inline double log_shape_value(const ShapeParams& params, double x) {
  detail::check_unit(x);
  return detail::log_shape_unchecked(params.kind(), params.values().data(), x);
}

/// The unnormalized shape value at x in [0, 1].
inline double shape_value(const ShapeParams& params, double x) {
  detail::check_unit(x);
  const auto v = params.values();
  switch (params.kind()) {
  case ModelKind::MaxEnt:
    if (x <= detail::kEndpointCutoff || 1.0 - x <= detail::kEndpointCutoff) return 0.0;
    return std::exp(-v[0] / x - v[1] / (1.0 - x));
  case ModelKind::Beta:
    return std::pow(x, v[0] - 1.0) * std::pow(1.0 - x, v[1] - 1.0);
  case ModelKind::Skewnormal: {
    const double z = (x - v[0]) / v[1];
    return detail::normal_pdf(z) * detail::normal_cdf(v[2] * z);
  }
  case ModelKind::GenGamma:
    return std::pow(x, v[1] - 1.0) * std::exp(-std::pow(x / v[0], v[2]));
  case ModelKind::Richards:
    return std::exp(detail::log_shape_unchecked(params.kind(), v.data(), x));
  }
  return 0.0;
}

inline constexpr std::size_t kModeScanPoints = 4097;
inline constexpr double kModeTolerance = 1e-10;

/// Argmax of the shape on [0, 1]: grid scan followed by golden-section refinement.
inline double numeric_mode(const ShapeParams& params) {
  const ModelKind kind = params.kind();
  const double* v = params.values().data();
  auto f = [&](double x) { return detail::log_shape_unchecked(kind, v, x); };

  constexpr std::size_t n = kModeScanPoints;
  std::size_t best = 0;
  double best_value = detail::kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    const double value = f(x);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  if (best_value == detail::kNegInf) {
    return 0.5;
  }

  double lo = static_cast<double>(best == 0 ? 0 : best - 1) / static_cast<double>(n - 1);
  double hi = static_cast<double>(best == n - 1 ? n - 1 : best + 1) / static_cast<double>(n - 1);
  constexpr double inv_phi = 0.6180339887498948482;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > kModeTolerance) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double refined = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
  const double grid_x = static_cast<double>(best) / static_cast<double>(n - 1);
  return f(refined) >= best_value ? refined : grid_x;
}

/// Location of the curve maximum on [0, 1].
inline double mode(const ShapeParams& params) {
  const auto v = params.values();
  switch (params.kind()) {
  case ModelKind::MaxEnt: {
    const double sa = std::sqrt(v[0]);
    const double sb = std::sqrt(v[1]);
    return sa / (sa + sb);
  }
  case ModelKind::Beta: {
    const double denom = v[0] + v[1] - 2.0;
    // a = b = 1 is flat; any location is a maximum.
    return denom > 0.0 ? (v[0] - 1.0) / denom : 0.5;
  }
  case ModelKind::GenGamma:
    return std::clamp(v[0] * std::pow((v[1] - 1.0) / v[2], 1.0 / v[2]), 0.0, 1.0);
  case ModelKind::Richards:
  case ModelKind::Skewnormal:
    return numeric_mode(params);
  }
  return 0.5;
}

/// Peak-normalized curve with the mode computed once.
class UnitPeakCurve {
public:
  explicit UnitPeakCurve(CurveModel model)
      : model_(std::move(model)), mode_(unimodal::mode(model_.params())), peak_(shape_value(model_.params(), mode_)),
        log_peak_(log_shape_value(model_.params(), mode_)) {}

  const CurveModel& model() const noexcept { return model_; }
  double mode() const noexcept { return mode_; }

  double operator()(double x) const {
    const double s = shape_value(model_.params(), x);
    if (peak_ >= DBL_MIN && s >= DBL_MIN) {
      return model_.amplitude() * (s / peak_);
    }
    const double log_s = log_shape_value(model_.params(), x);
    if (log_s == detail::kNegInf) {
      return 0.0;
    }
    return model_.amplitude() * std::exp(log_s - log_peak_);
  }

private:
  CurveModel model_;
  double mode_;
  double peak_;
  double log_peak_;
};

/// amplitude * shape(x) / shape(mode).
inline double evaluate(const CurveModel& model, double x) { return UnitPeakCurve(model)(x); }

/// Samples the model on the uniform grid i / (grid_size - 1).
inline SampledSeries sample_series(const CurveModel& model, std::size_t grid_size) {
  if (grid_size < 2) {
    throw ArgumentError("grid_size must be at least 2 (got " + std::to_string(grid_size) + ")");
  }
  const UnitPeakCurve curve(model);
  SampledSeries out;
  out.xs.resize(grid_size);
  out.ys.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    out.xs[i] = x;
    out.ys[i] = curve(x);
  }
  return out;
}

/// Width of the region around the mode where the peak-normalized shape is at
/// least one half, truncated at the interval ends.
inline double full_width_half_max(const ShapeParams& params, std::size_t grid_points = kModeScanPoints) {
  const double m = mode(params);
  const double log_peak = log_shape_value(params, m);
  const double log_half = log_peak - std::numbers::ln2;
  const double step = 1.0 / static_cast<double>(grid_points - 1);
  auto above = [&](double x) { return log_shape_value(params, x) >= log_half; };
  auto ratio = [&](double x) {
    const double l = log_shape_value(params, x);
    return l == detail::kNegInf ? 0.0 : std::exp(l - log_peak);
  };
  // Linear interpolation of the crossing between an inside and an outside point.
  auto crossing = [&](double inside, double outside) {
    const double ri = ratio(inside);
    const double ro = ratio(outside);
    if (ri == ro) return inside;
    return inside + (outside - inside) * (ri - 0.5) / (ri - ro);
  };

  double left = 0.0;
  for (double x = m; x > 0.0;) {
    const double next = std::max(0.0, x - step);
    if (!above(next)) {
      left = crossing(x, next);
      break;
    }
    x = next;
  }
  double right = 1.0;
  for (double x = m; x < 1.0;) {
    const double next = std::min(1.0, x + step);
    if (!above(next)) {
      right = crossing(x, next);
      break;
    }
    x = next;
  }
  return right - left;
}

} // namespace unimodal
