#include <doctest.h>

#include <Eigen/LU>
#include <set>
#include <string>

#include "affspec/render.hpp"
#include "support.hpp"

using namespace affspec;
using testing_support::fixture;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("attractor point clouds") {
  MeasureInstance e61 = fixture("ex61");
  PointCloud c4 = attractor_points(e61, 4);
  CHECK(c4.points.size() == 81);
  CHECK(c4.depth == 4);

  PointCloud c1 = attractor_points(e61, 1);
  REQUIRE(c1.points.size() == 3);
  Eigen::Matrix2d Minv = to_double(e61.M.matrix()).inverse();
  for (std::size_t i = 0; i < 3; ++i) CHECK((c1.points[i] - Minv * e61.D.digits[i].cast<double>()).norm() < 1e-15);

  CHECK_THROWS(attractor_points(e61, 0));
  CHECK_THROWS(attractor_points(e61, 10, 1000));

  // geometric series: |x| <= sum_k |M^-k| |d| < 1/4 here
  for (const auto& x : c4.points) {
    CHECK(std::abs(x(0)) <= 0.25);
    CHECK(std::abs(x(1)) <= 0.25);
  }
  Window w = bounding_window(c4);
  for (const auto& x : c4.points) {
    CHECK(x(0) > w.x0);
    CHECK(x(0) < w.x1);
    CHECK(x(1) > w.y0);
    CHECK(x(1) < w.y1);
  }
}

TEST_CASE("pixel mapping") {
  Window w{0, 1, 0, 1};
  CHECK(pixel_of(Eigen::Vector2d(0.0, 0.999), 4, 4, w) == std::make_pair(0, 0));
  CHECK(pixel_of(Eigen::Vector2d(0.999, 0.0), 4, 4, w) == std::make_pair(3, 3));
  CHECK(pixel_of(Eigen::Vector2d(0.3, 0.6), 4, 4, w) == std::make_pair(1, 1));
  CHECK_FALSE(pixel_of(Eigen::Vector2d(1.5, 0.5), 4, 4, w).has_value());
}

TEST_CASE("rasterization is deterministic") {
  MeasureInstance e61 = fixture("ex61");
  PointCloud c = attractor_points(e61, 4);
  Window w = bounding_window(c);
  Image a = rasterize(c, 512, 512, w), b = rasterize(attractor_points(e61, 4), 512, 512, bounding_window(c));
  CHECK(ppm_bytes(a) == ppm_bytes(b));
  std::size_t dark = 0;
  for (std::size_t i = 0; i < a.rgb.size(); i += 3) dark += a.rgb[i] != 255;
  CHECK(dark > 0);
  CHECK(dark <= 81);

  Image blank = rasterize(PointCloud{}, 8, 4, Window{});
  CHECK(blank.rgb.size() == 8 * 4 * 3);
  CHECK(std::all_of(blank.rgb.begin(), blank.rgb.end(), [](std::uint8_t v) { return v == 255; }));
  auto ppm = ppm_bytes(blank);
  std::string header = "P6\n8 4\n255\n";
  CHECK(std::string(ppm.begin(), ppm.begin() + static_cast<long>(header.size())) == header);
  CHECK(ppm.size() == header.size() + 96);
}

TEST_CASE("hashing and naming") {
  CHECK(hex64(fnv1a64({})) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64(bytes_of("a"))) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64(bytes_of("foobar"))) == "85944171f73967e8");
  CHECK(render_file_name("ex61", 4, 512, 512) == "ex61_depth4_512x512.ppm");
}

TEST_CASE("heat map is small at zero-set sites") {
  MeasureInstance e61 = fixture("ex61");
  const IntVec2 a(1, 2);
  Window w{-3, 6, -3, 12};
  HeatField f = heat_field(e61, 96, 96, w, 1e-10, a, 2);
  REQUIRE_FALSE(f.sites.empty());
  std::set<std::pair<int, int>> seen;
  for (const auto& s : f.sites) {
    CHECK(f.at(s.px, s.py) <= 1e-6);
    CHECK(zero_lattice_member(s.point, e61, a, 2).has_value());
    seen.insert({s.px, s.py});
  }
  // away from sites the field is a genuine |mu_hat|^2 in [0, 1]
  double mx = 0;
  for (double v : f.values) {
    CHECK(v >= 0);
    CHECK(v <= 1 + 1e-12);
    mx = std::max(mx, v);
  }
  CHECK(mx > 0.5);
  Image img = rasterize(f);
  CHECK(img.rgb.size() == 96u * 96u * 3u);
}
