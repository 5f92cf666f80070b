#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "unimodal/bench.hpp"
#include "unimodal/dataio.hpp"
#include "unimodal/fitter.hpp"

using namespace unimodal;

TEST(FitConfig, Validation) {
  EXPECT_THROW((FitConfig{0}).validate(), ArgumentError);
  EXPECT_THROW((FitConfig{4, 0}).validate(), ArgumentError);
  EXPECT_THROW((FitConfig{4, 10, 0.0}).validate(), ArgumentError);
}

TEST(RmsLoss, Examples) {
  const CurveModel m(ShapeParams::beta(2.5, 4), 0.7);
  EXPECT_EQ(rms_loss(sample_series(m, 51), m), 0.0);

  // MaxEnt vanishes at both ends, so ys = [0, 1] at xs = [0, 1] leaves residuals 0 and 1.
  const SampledSeries s{{0.0, 1.0}, {0.0, 1.0}};
  EXPECT_NEAR(rms_loss(s, CurveModel(ShapeParams::maxent(1, 1), 1.0)), std::sqrt(0.5), 1e-15);

  EXPECT_THROW(rms_loss(SampledSeries{}, m), ArgumentError);
  EXPECT_THROW(rms_loss(SampledSeries{{0.5}, {1.0}}, m), ArgumentError);
}

TEST(Fit, MaxEntSelfFit) {
  const auto s = sample_series(CurveModel(ShapeParams::maxent(2, 5), 1.0), 101);
  const auto r = fit(s, ModelKind::MaxEnt);
  EXPECT_LT(r.rms, 1e-3);
  EXPECT_NEAR(r.model.params()[0], 2.0, 0.1);
  EXPECT_NEAR(r.model.params()[1], 5.0, 0.25);
  EXPECT_NEAR(r.model.amplitude(), 1.0, 1e-3);
  EXPECT_EQ(r.start_losses.size(), 16u);
  EXPECT_EQ(r.rms, *std::min_element(r.start_losses.begin(), r.start_losses.end()));
}

TEST(Fit, BetaSelfFit) {
  const auto s = sample_series(CurveModel(ShapeParams::beta(3, 2), 1.0), 101);
  EXPECT_LT(fit(s, ModelKind::Beta).rms, 1e-3);
}

TEST(Fit, CrossFamilyIsFiniteAndImperfect) {
  const auto s = sample_series(CurveModel(ShapeParams::richards(12, 0.4, 2), 1.0), 101);
  const auto r = fit(s, ModelKind::MaxEnt);
  EXPECT_TRUE(std::isfinite(r.rms));
  EXPECT_GT(r.rms, 1e-3);
  EXPECT_LT(r.rms, 0.2);
}

TEST(Fit, AmplitudeIsRecovered) {
  const auto s = sample_series(CurveModel(ShapeParams::skewnormal(0.45, 0.15, 3.0), 0.8), 101);
  const auto r = fit(s, ModelKind::Skewnormal);
  EXPECT_LT(r.rms, 1e-4);
  EXPECT_NEAR(r.model.amplitude(), 0.8, 1e-3);
}

TEST(Fit, FlatZeroSeriesFails) {
  const SampledSeries zero{{0.0, 0.25, 0.5, 0.75, 1.0}, std::vector<double>(5, 0.0)};
  EXPECT_THROW(fit(zero, ModelKind::MaxEnt), FitFailureError);
}

TEST(Fit, RejectsMalformedSeries) {
  EXPECT_THROW(fit(SampledSeries{{0.0, 0.5}, {1.0}}, ModelKind::Beta), ArgumentError);
  EXPECT_THROW(fit(SampledSeries{{-0.5, 0.5}, {1.0, 1.0}}, ModelKind::Beta), ArgumentError);
}

TEST(Fit, Deterministic) {
  const auto s = sample_series(CurveModel(ShapeParams::gengamma(0.3, 4, 1.5), 1.0), 101);
  for (ModelKind kind : kAllKinds) {
    FitConfig c;
    c.seed = 99;
    c.starts = 6;
    EXPECT_EQ(fit(s, kind, c), fit(s, kind, c)) << kind_name(kind);
  }
}

TEST(Fit, MoreStartsNeverWorse) {
  const auto s = sample_series(CurveModel(ShapeParams::skewnormal(0.6, 0.2, -6), 1.0), 101);
  for (ModelKind kind : kAllKinds) {
    FitConfig one;
    one.starts = 1;
    FitConfig many;
    many.starts = 16;
    const auto r1 = fit(s, kind, one);
    const auto r16 = fit(s, kind, many);
    EXPECT_LE(r16.rms, r1.rms) << kind_name(kind);
    EXPECT_EQ(r16.start_losses.front(), r1.start_losses.front()) << kind_name(kind);
  }
}

TEST(StartPoints, PrefixAndBounds) {
  const auto s = sample_series(CurveModel(ShapeParams::maxent(2, 5), 1.0), 101);
  for (ModelKind kind : kAllKinds) {
    const auto pts = start_points(kind, s, 16, 3);
    ASSERT_EQ(pts.size(), 16u);
    EXPECT_EQ(start_points(kind, s, 1, 3).front(), pts.front());
    for (const auto& p : pts) {
      EXPECT_FALSE(parameter_violation(kind, p).has_value()) << kind_name(kind);
    }
  }
}

TEST(StartPoints, LatinHypercubeCoversEveryStratum) {
  const auto s = sample_series(CurveModel(ShapeParams::maxent(2, 5), 1.0), 101);
  const auto pts = start_points(ModelKind::Richards, s, 11, 8);
  // t0 is sampled linearly on [0, 1]: ten hypercube points, one per tenth.
  std::vector<int> hits(10, 0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    ++hits[std::min(9, static_cast<int>(pts[i][1] * 10.0))];
  }
  EXPECT_EQ(hits, std::vector<int>(10, 1));
}

TEST(Properties, BoundsAlwaysRespected) {
  for (int g = 0; g < 5; ++g) {
    const ModelKind gen = kAllKinds[static_cast<std::size_t>(g)];
    const auto s = sample_series(CurveModel(sample_generator_params(gen, 500 + g), 1.0), 61);
    for (ModelKind kind : kAllKinds) {
      FitConfig c;
      c.starts = 4;
      const auto r = fit(s, kind, c);
      EXPECT_FALSE(parameter_violation(kind, r.model.params().values()).has_value());
      EXPECT_GT(r.model.amplitude(), 0.0);
    }
  }
}

TEST(Properties, SelfFitRecovery) {
  for (ModelKind kind : kAllKinds) {
    const double threshold = kind == ModelKind::GenGamma ? 5e-2 : 5e-3;
    int good = 0;
    constexpr int draws = 100;
    for (int i = 0; i < draws; ++i) {
      const auto params = sample_generator_params(kind, hash_seed(2024, {kind_index(kind), static_cast<std::uint64_t>(i)}));
      const auto s = sample_series(CurveModel(params, 1.0), 101);
      if (fit(s, kind).rms < threshold) ++good;
    }
    EXPECT_GE(good, 95) << kind_name(kind);
  }
}

TEST(CaseStudy, Universe25MaxEnt) {
  const auto norm = normalize(load_series_file(std::string(UNIMODAL_DATA_DIR) + "/universe25.csv"));
  const auto r = fit(norm.series, ModelKind::MaxEnt);
  EXPECT_LT(r.rms, 0.1);
  EXPECT_TRUE(r.converged);
}
