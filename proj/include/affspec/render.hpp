#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "affspec/measure_model.hpp"
#include "affspec/numerics.hpp"

namespace affspec {

struct PointCloud {
  std::vector<Eigen::Vector2d> points;  // word order, d_1 most significant
  unsigned depth = 0;
};

// All p^depth partial sums sum_{k<=depth} M^-k d_k.
PointCloud attractor_points(const MeasureInstance& inst, unsigned depth, std::size_t cap = 1000000);

// Smallest box containing the cloud, widened by `margin` of its size on each side.
Window bounding_window(const PointCloud& cloud, double margin = 0.05);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first
};

// Pixel (i, j) covers [x0 + i dx, x0 + (i+1) dx) x [y1 - (j+1) dy, y1 - j dy).
std::optional<std::pair<int, int>> pixel_of(const Eigen::Vector2d& x, int width, int height, const Window& w);

Image rasterize(const PointCloud& cloud, int width, int height, const Window& w);

struct HeatSite {
  ExactVec2 point;
  int px, py;
};

struct HeatField {
  int width = 0;
  int height = 0;
  Window window;
  std::vector<double> values;  // |mu_hat|^2 per pixel, row-major
  std::vector<HeatSite> sites;  // zero-set points inside the window, k <= site_depth
  double at(int px, int py) const { return values[static_cast<std::size_t>(py) * width + px]; }
};

// |mu_hat|^2 at pixel centres; a pixel holding a zero-set point (M*)^k (j a/p + z),
// k <= site_depth, is evaluated at that point instead.
HeatField heat_field(const MeasureInstance& inst, int width, int height, const Window& w, double eps,
                     const std::optional<IntVec2>& a = std::nullopt, unsigned site_depth = 3);

Image rasterize(const HeatField& field);

std::vector<std::uint8_t> ppm_bytes(const Image& img);
void write_ppm(const std::string& path, const Image& img);
std::string render_file_name(const std::string& tag, unsigned depth, int width, int height);
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);
std::string hex64(std::uint64_t h);

}  // namespace affspec
