#pragma once

// Synthetic cross-comparison: every family generates series, every family
// fits them. Cell (fitter, generator) holds the mean and sample standard
// deviation of the fit RMS over trials.
//
// All randomness is keyed by hash(seed, generator, trial), so the table does
// not depend on thread count or job order, and the series for a given
// (generator, trial) is shared by all five fitters.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "unimodal/error.hpp"
#include "unimodal/fitter.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/random.hpp"

namespace unimodal {

struct BenchConfig {
  int trials_per_cell = 100;
  std::size_t grid_size = 101;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  FitConfig fit;
  /// Worker threads; 0 means one per hardware thread.
  unsigned threads = 0;

  void validate() const {
    if (trials_per_cell < 1) throw ArgumentError("trials_per_cell must be at least 1");
    if (grid_size < 8) throw ArgumentError("grid_size must be at least 8");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ArgumentError("noise_sigma must be a nonnegative finite number");
    fit.validate();
  }
};

struct CrossCell {
  double mean_rms = 0.0;
  double std_rms = 0.0;
  int trials = 0;
  int failures = 0;
  /// Per-trial RMS in trial order; not part of the table file.
  std::vector<double> samples;

  friend bool operator==(const CrossCell&, const CrossCell&) = default;
};

/// 5x5 table indexed [fitter][generator] in kAllKinds order.
struct CrossTable {
  std::array<std::array<CrossCell, 5>, 5> cells{};

  CrossCell& at(ModelKind fitter, ModelKind generator) { return cells[kind_index(fitter)][kind_index(generator)]; }
  const CrossCell& at(ModelKind fitter, ModelKind generator) const { return cells[kind_index(fitter)][kind_index(generator)]; }

  /// True when some cell has more than half of its trials failed.
  bool degraded() const {
    for (const auto& row : cells) {
      for (const auto& cell : row) {
        if (2 * cell.failures > cell.trials) return true;
      }
    }
    return false;
  }

  /// Mean over the four off-diagonal cells of a fitter row.
  double off_diagonal_mean(ModelKind fitter) const {
    double sum = 0.0;
    for (ModelKind generator : kAllKinds) {
      if (generator != fitter) sum += at(fitter, generator).mean_rms;
    }
    return sum / 4.0;
  }

  friend bool operator==(const CrossTable&, const CrossTable&) = default;
};

inline constexpr double kGeneratorModeMin = 0.15;
inline constexpr double kGeneratorModeMax = 0.85;
inline constexpr double kGeneratorMinWidth = 0.02;
inline constexpr int kGeneratorMaxRejections = 100;

/// Draws generator parameters from the documented ranges, rejecting draws whose
/// mode leaves [0.15, 0.85] or whose half-maximum width is below 0.02.
inline ShapeParams sample_generator_params(ModelKind kind, std::uint64_t rng_seed) {
  const auto ranges = parameter_ranges(kind);
  RandomStream rng(rng_seed);
  std::array<double, kMaxShapeParams> v{};
  for (int attempt = 0; attempt <= kGeneratorMaxRejections; ++attempt) {
    for (std::size_t d = 0; d < ranges.size(); ++d) {
      v[d] = ranges[d].sample_at(rng.uniform());
    }
    if (parameter_violation(kind, std::span<const double>(v.data(), ranges.size()))) {
      continue;
    }
    ShapeParams params(kind, std::span<const double>(v.data(), ranges.size()));
    const double m = mode(params);
    if (m < kGeneratorModeMin || m > kGeneratorModeMax) continue;
    if (full_width_half_max(params) < kGeneratorMinWidth) continue;
    return params;
  }
  throw GenerationError(std::string("no acceptable ") + std::string(kind_name(kind)) + " parameters after " +
                        std::to_string(kGeneratorMaxRejections) + " rejections");
}

/// The synthetic series for one (generator, trial) pair, noise included.
inline SampledSeries generate_series(const BenchConfig& config, ModelKind generator, int trial) {
  const auto key = hash_seed(config.seed, {kind_index(generator), static_cast<std::uint64_t>(trial)});
  const ShapeParams params = sample_generator_params(generator, key);
  SampledSeries series = sample_series(CurveModel(params, 1.0), config.grid_size);
  if (config.noise_sigma > 0.0) {
    RandomStream noise(hash_seed(key, {0x6e6f697365ULL}));
    for (double& y : series.ys) {
      y = std::max(0.0, y + config.noise_sigma * noise.normal());
    }
  }
  return series;
}

/// Fit RMS of one trial, or the worst-case sqrt(mean y^2) when the fit fails.
struct TrialOutcome {
  double rms;
  bool failed;
};

inline TrialOutcome fit_trial(const BenchConfig& config, const SampledSeries& series, ModelKind generator, ModelKind fitter, int trial) {
  FitConfig fit_config = config.fit;
  fit_config.seed = hash_seed(config.fit.seed, {kind_index(generator), static_cast<std::uint64_t>(trial), kind_index(fitter)});
  try {
    return {fit(series, fitter, fit_config).rms, false};
  } catch (const FitFailureError&) {
    double sq = 0.0;
    for (double y : series.ys) sq += y * y;
    return {std::sqrt(sq / static_cast<double>(series.size())), true};
  }
}

namespace detail {

inline void finish_cell(CrossCell& cell) {
  const auto n = static_cast<double>(cell.samples.size());
  cell.trials = static_cast<int>(cell.samples.size());
  if (cell.samples.empty()) return;
  double sum = 0.0;
  for (double v : cell.samples) sum += v;
  cell.mean_rms = sum / n;
  double ss = 0.0;
  for (double v : cell.samples) ss += (v - cell.mean_rms) * (v - cell.mean_rms);
  cell.std_rms = cell.samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

/// Runs job(i) for i in [0, count) on a fixed pool of threads.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          job(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace detail

/// Cross-fits every family against series generated by every family.
inline CrossTable cross_compare(const BenchConfig& config) {
  config.validate();
  const std::size_t trials = static_cast<std::size_t>(config.trials_per_cell);
  // outcomes[generator * trials + trial][fitter]
  std::vector<std::array<TrialOutcome, 5>> outcomes(kAllKinds.size() * trials);
  detail::parallel_for(outcomes.size(), config.threads, [&](std::size_t job) {
    const ModelKind generator = kAllKinds[job / trials];
    const int trial = static_cast<int>(job % trials);
    const SampledSeries series = generate_series(config, generator, trial);
    for (ModelKind fitter : kAllKinds) {
      outcomes[job][kind_index(fitter)] = fit_trial(config, series, generator, fitter, trial);
    }
  });

  CrossTable table;
  for (ModelKind generator : kAllKinds) {
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& row = outcomes[kind_index(generator) * trials + t];
      for (ModelKind fitter : kAllKinds) {
        auto& cell = table.at(fitter, generator);
        cell.samples.push_back(row[kind_index(fitter)].rms);
        if (row[kind_index(fitter)].failed) ++cell.failures;
      }
    }
  }
  for (auto& row : table.cells) {
    for (auto& cell : row) detail::finish_cell(cell);
  }
  return table;
}

inline constexpr std::string_view kTableHeader = "fitter,generator,mean_rms,std_rms,trials";

/// Comma-separated table: header plus one row per cell, fitter-major.
inline std::string render_csv(const CrossTable& table) {
  std::string out(kTableHeader);
  out += '\n';
  for (ModelKind fitter : kAllKinds) {
    for (ModelKind generator : kAllKinds) {
      const auto& cell = table.at(fitter, generator);
      if (cell.trials == 0) {
        out += fmt::format("{},{},,,0\n", kind_name(fitter), kind_name(generator));
      } else {
        out += fmt::format("{},{},{:.6g},{:.6g},{}\n", kind_name(fitter), kind_name(generator), cell.mean_rms, cell.std_rms, cell.trials);
      }
    }
  }
  return out;
}

/// Aligned 5x5 grid of "mean (std)" with rows = fitter, columns = generator.
inline std::string render_grid(const CrossTable& table) {
  constexpr int first = 12;
  constexpr int width = 20;
  std::string out = fmt::format("{:<{}}", "Methods", first);
  for (ModelKind generator : kAllKinds) out += fmt::format("{:>{}}", kind_name(generator), width);
  out += '\n';
  for (ModelKind fitter : kAllKinds) {
    out += fmt::format("{:<{}}", kind_name(fitter), first);
    for (ModelKind generator : kAllKinds) {
      const auto& cell = table.at(fitter, generator);
      std::string text = cell.trials == 0 ? std::string("-") : fmt::format("{:.4g} ({:.2g})", cell.mean_rms, cell.std_rms);
      if (cell.failures > 0) text += fmt::format(" !{}", cell.failures);
      out += fmt::format("{:>{}}", text, width);
    }
    out += '\n';
  }
  return out;
}

/// Parses a table produced by render_csv. Per-trial samples are not restored.
inline CrossTable parse_csv(std::string_view text) {
  CrossTable table;
  std::array<std::array<bool, 5>, 5> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  auto parse_double = [&](std::string_view field, double& out) {
    if (field.empty()) {
      out = 0.0;
      return;
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size()) throw ParseError("bad number '" + std::string(field) + "'", line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kTableHeader) throw ParseError("expected header '" + std::string(kTableHeader) + "'", line_no);
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) throw ParseError("expected 5 fields", line_no);
    const auto fitter = parse_kind(fields[0]);
    const auto generator = parse_kind(fields[1]);
    if (!fitter || !generator) throw ParseError("unknown model name", line_no);
    auto& cell = table.at(*fitter, *generator);
    parse_double(fields[2], cell.mean_rms);
    parse_double(fields[3], cell.std_rms);
    auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), cell.trials);
    if (ec != std::errc() || ptr != fields[4].data() + fields[4].size()) throw ParseError("bad trial count", line_no);
    seen[kind_index(*fitter)][kind_index(*generator)] = true;
  }
  for (const auto& row : seen) {
    for (bool s : row) {
      if (!s) throw ParseError("table is missing cells");
    }
  }
  return table;
}

} // namespace unimodal
