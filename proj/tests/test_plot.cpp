#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "unimodal/plot.hpp"

using namespace unimodal;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

const RawSeries kRaw{{1944, 1963, 1966}, {29, 6000, 42}};

} // namespace

TEST(PlotSvg, DataOnly) {
  const std::string svg = plot_svg(kRaw, {});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "<circle"), 4u); // three markers plus the legend swatch
  EXPECT_EQ(count(svg, "r=\"3\"/>"), 3u);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_NE(svg.find(">data</text>"), std::string::npos);
  EXPECT_EQ(count(svg, "</text>\n"), count(svg, "<text"));
}

TEST(PlotSvg, OnePolylinePerFit) {
  const FitResult r{CurveModel(ShapeParams::maxent(2, 5), 1.0), 0.0, {0.0}, 1, true};
  const DomainTransform tr{1940, 1970, 6000};
  const std::string svg = plot_svg(kRaw, {{ModelKind::MaxEnt, denormalize_fit(r, tr, 101)}});
  ASSERT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_NE(svg.find("data-model=\"maxent\""), std::string::npos);
  EXPECT_NE(svg.find(std::string(kind_color(ModelKind::MaxEnt))), std::string::npos);
  EXPECT_NE(svg.find(">MaxEnt</text>"), std::string::npos);

  const std::regex points_re("points=\"([^\"]*)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, points_re));
  const std::string pts = m[1];
  EXPECT_EQ(count(pts, " ") + 1, 101u);
  EXPECT_EQ(count(pts, ","), 101u);
}

TEST(PlotSvg, Deterministic) {
  const FitResult r{CurveModel(ShapeParams::beta(3, 2), 0.9), 0.0, {0.0}, 1, true};
  const std::vector<PlotCurve> fits = {{ModelKind::Beta, denormalize_fit(r, {1940, 1970, 6000}, 201)}};
  EXPECT_EQ(plot_svg(kRaw, fits, "St. Matthew & co"), plot_svg(kRaw, fits, "St. Matthew & co"));
  EXPECT_NE(plot_svg(kRaw, fits, "a<b").find("a&lt;b"), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = dir / "unimodal_test_plot_1.svg";
  const auto p2 = dir / "unimodal_test_plot_2.svg";
  render_plot(kRaw, fits, p1.string());
  render_plot(kRaw, fits, p2.string());
  std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
  const std::string ta{std::istreambuf_iterator<char>(a), {}};
  const std::string tb{std::istreambuf_iterator<char>(b), {}};
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST(PlotSvg, Errors) {
  EXPECT_THROW(plot_svg(RawSeries{}, {}), ArgumentError);
  EXPECT_THROW(render_plot(kRaw, {}, "/nonexistent/dir/p.svg"), IoError);
}

TEST(NiceTicks, StepsOfOneTwoFive) {
  EXPECT_EQ(detail::nice_ticks(0.0, 10.0), (std::vector<double>{0, 2, 4, 6, 8, 10}));
  EXPECT_EQ(detail::nice_ticks(1944, 1966), (std::vector<double>{1945, 1950, 1955, 1960, 1965}));
}
