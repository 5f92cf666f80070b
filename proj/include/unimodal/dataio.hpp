#pragma once

// Reading observed series, mapping them onto the unit interval, and writing
// fit documents.
//
// Input files hold "time,value" rows. A single non-numeric header line is
// allowed before the first data row; blank lines and lines starting with '#'
// are ignored.
//
// Fit documents are JSON with keys in this fixed order:
//   tool, version, model{kind, parameters{...}, amplitude}, rms,
//   rms_original_units, transform{t_min, t_max, y_scale},
//   optimizer{starts, iterations_used, converged, start_losses}
// Non-finite start losses are written as null.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unimodal/error.hpp"
#include "unimodal/fitter.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/version.hpp"

namespace unimodal {

/// An observed series in original units, sorted by time.
struct RawSeries {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return times.size(); }
  friend bool operator==(const RawSeries&, const RawSeries&) = default;
};

/// Affine map between original units and the unit interval.
struct DomainTransform {
  double t_min = 0.0;
  double t_max = 1.0;
  double y_scale = 1.0;

  double to_unit(double t) const { return (t - t_min) / (t_max - t_min); }
  double from_unit(double x) const { return t_min + x * (t_max - t_min); }

  friend bool operator==(const DomainTransform&, const DomainTransform&) = default;
};

struct NormalizedSeries {
  SampledSeries series;
  DomainTransform transform;
};

inline constexpr std::size_t kMinRawPoints = 3;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_real(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace detail

/// Parses "time,value" rows; rows are sorted by time and duplicate times rejected.
inline RawSeries load_series(std::istream& in) {
  struct Row {
    double t;
    double v;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto comma = text.find(',');
    double t = 0.0;
    double v = 0.0;
    const bool ok = comma != std::string_view::npos && text.find(',', comma + 1) == std::string_view::npos &&
                    detail::parse_real(text.substr(0, comma), t) && detail::parse_real(text.substr(comma + 1), v);
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("expected 'time,value' with two finite numbers, got '" + std::string(text) + "'", line_no);
    }
    if (v < 0.0) {
      throw ParseError("value must be nonnegative, got '" + std::string(text) + "'", line_no);
    }
    header_allowed = false;
    rows.push_back({t, v});
  }
  if (rows.size() < kMinRawPoints) {
    throw ParseError("need at least " + std::to_string(kMinRawPoints) + " data rows, found " + std::to_string(rows.size()));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
  RawSeries out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].t == rows[i - 1].t) {
      throw ParseError("duplicate time " + detail::format_real(rows[i].t));
    }
    out.times.push_back(rows[i].t);
    out.values.push_back(rows[i].v);
  }
  return out;
}

inline RawSeries load_series_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_series(in);
}

inline RawSeries load_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open input file", path);
  }
  try {
    return load_series(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Maps times onto [padding, 1 - padding] and scales values by their maximum.
inline NormalizedSeries normalize(const RawSeries& raw, double padding = 0.02) {
  if (!(padding >= 0.0 && padding < 0.5)) {
    throw ArgumentError("padding must lie in [0, 0.5)");
  }
  if (raw.times.size() != raw.values.size() || raw.size() < kMinRawPoints) {
    throw ArgumentError("raw series needs at least 3 (time, value) pairs");
  }
  const double first = raw.times.front();
  const double last = raw.times.back();
  const double span = last - first;
  if (!(span > 0.0)) {
    throw ArgumentError("raw series times must be strictly increasing");
  }
  const double y_scale = *std::max_element(raw.values.begin(), raw.values.end());
  if (!(y_scale > 0.0)) {
    throw ArgumentError("all values are zero; the value scale is undefined");
  }
  const double inset = padding * span / (1.0 - 2.0 * padding);
  NormalizedSeries out;
  out.transform = {first - inset, last + inset, y_scale};
  out.series.xs.resize(raw.size());
  out.series.ys.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.series.xs[i] = std::clamp(out.transform.to_unit(raw.times[i]), 0.0, 1.0);
    out.series.ys[i] = raw.values[i] / y_scale;
  }
  return out;
}

/// Inverse of normalize for a sampled series.
inline RawSeries denormalize(const SampledSeries& series, const DomainTransform& transform) {
  RawSeries out;
  out.times.reserve(series.size());
  out.values.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.times.push_back(transform.from_unit(series.xs[i]));
    out.values.push_back(series.ys[i] * transform.y_scale);
  }
  return out;
}

/// The fitted curve on a uniform unit grid, in original units.
inline RawSeries denormalize_fit(const FitResult& result, const DomainTransform& transform, std::size_t grid_size) {
  return denormalize(sample_series(result.model, grid_size), transform);
}

/// A fit document read back from disk.
struct FitRecord {
  FitResult result;
  DomainTransform transform;
  double rms_original_units = 0.0;
  std::string version;
};

inline nlohmann::ordered_json fit_document(const FitResult& result, const DomainTransform& transform) {
  using json = nlohmann::ordered_json;
  json params = json::object();
  const auto names = parameter_names(result.model.kind());
  for (std::size_t i = 0; i < names.size(); ++i) {
    params[std::string(names[i])] = result.model.params()[i];
  }
  json losses = json::array();
  for (double loss : result.start_losses) {
    losses.push_back(std::isfinite(loss) ? json(loss) : json(nullptr));
  }
  json doc = json::object();
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["model"] = json{{"kind", kind_slug(result.model.kind())}, {"parameters", params}, {"amplitude", result.model.amplitude()}};
  doc["rms"] = result.rms;
  doc["rms_original_units"] = result.rms * transform.y_scale;
  doc["transform"] = json{{"t_min", transform.t_min}, {"t_max", transform.t_max}, {"y_scale", transform.y_scale}};
  doc["optimizer"] = json{{"starts", result.start_losses.size()},
                          {"iterations_used", result.iterations_used},
                          {"converged", result.converged},
                          {"start_losses", losses}};
  return doc;
}

inline FitRecord parse_fit_document(const nlohmann::ordered_json& doc) {
  try {
    const auto& model = doc.at("model");
    const auto kind = parse_kind(model.at("kind").get<std::string>());
    if (!kind) {
      throw ParseError("unknown model kind '" + model.at("kind").get<std::string>() + "'");
    }
    const auto names = parameter_names(*kind);
    std::vector<double> values;
    for (auto name : names) {
      values.push_back(model.at("parameters").at(std::string(name)).get<double>());
    }
    const auto& opt = doc.at("optimizer");
    std::vector<double> losses;
    for (const auto& loss : opt.at("start_losses")) {
      losses.push_back(loss.is_null() ? std::numeric_limits<double>::infinity() : loss.get<double>());
    }
    const auto& tr = doc.at("transform");
    FitRecord record{
        FitResult{CurveModel(ShapeParams(*kind, values), model.at("amplitude").get<double>()), doc.at("rms").get<double>(),
                  std::move(losses), opt.at("iterations_used").get<int>(), opt.at("converged").get<bool>()},
        DomainTransform{tr.at("t_min").get<double>(), tr.at("t_max").get<double>(), tr.at("y_scale").get<double>()},
        doc.at("rms_original_units").get<double>(), doc.at("version").get<std::string>()};
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed fit document: ") + e.what());
  }
}

/// Byte-deterministic JSON text of one fit, or of several as an array.
inline std::string fit_document_text(const FitResult& result, const DomainTransform& transform) {
  return fit_document(result, transform).dump(2) + "\n";
}

inline std::string fit_documents_text(const std::vector<FitResult>& results, const DomainTransform& transform) {
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    docs.push_back(fit_document(r, transform));
  }
  return docs.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open output file", path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed writing output file", path);
  }
}

inline void write_fit(const FitResult& result, const DomainTransform& transform, const std::string& path) {
  write_text_file(path, fit_document_text(result, transform));
}

/// Reads a file written by write_fit (one document) or by the CLI's
/// multi-model output (an array of documents).
inline std::vector<FitRecord> read_fits(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open fit document", path);
  }
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::vector<FitRecord> out;
  if (doc.is_array()) {
    for (const auto& d : doc) out.push_back(parse_fit_document(d));
  } else {
    out.push_back(parse_fit_document(doc));
  }
  return out;
}

inline FitRecord read_fit(const std::string& path) {
  auto records = read_fits(path);
  if (records.size() != 1) {
    throw ParseError(path + ": expected a single fit document");
  }
  return std::move(records.front());
}

} // namespace unimodal
