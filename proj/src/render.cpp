#include "affspec/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/LU>

#include "affspec/constructions.hpp"
#include "affspec/parallel.hpp"

namespace affspec {

PointCloud attractor_points(const MeasureInstance& inst, unsigned depth, std::size_t cap) {
  if (depth < 1) throw std::invalid_argument("attractor depth must be >= 1");
  const std::size_t p = inst.D.digits.size();
  std::size_t total = 1;
  for (unsigned k = 0; k < depth; ++k) {
    if (total > cap / p) throw std::invalid_argument("p^depth exceeds the point cap " + std::to_string(cap));
    total *= p;
  }
  PointCloud cloud;
  cloud.depth = depth;
  cloud.points.assign(1, Eigen::Vector2d::Zero());
  for (unsigned k = 1; k <= depth; ++k) {
    Eigen::Matrix2d A = to_double(inverse_power(inst.M, k));
    std::vector<Eigen::Vector2d> step;
    for (const auto& d : inst.D.digits) step.push_back(A * d.cast<double>());
    std::vector<Eigen::Vector2d> next;
    next.reserve(cloud.points.size() * p);
    for (const auto& x : cloud.points)
      for (const auto& s : step) next.push_back(x + s);
    cloud.points = std::move(next);
  }
  return cloud;
}

Window bounding_window(const PointCloud& cloud, double margin) {
  if (cloud.points.empty()) return Window{};
  Eigen::Vector2d lo = cloud.points.front(), hi = lo;
  for (const auto& x : cloud.points) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  Eigen::Vector2d span = (hi - lo).cwiseMax(1e-9);
  lo -= margin * span;
  hi += margin * span;
  return Window{lo(0), hi(0), lo(1), hi(1)};
}

std::optional<std::pair<int, int>> pixel_of(const Eigen::Vector2d& x, int width, int height, const Window& w) {
  double u = (x(0) - w.x0) / (w.x1 - w.x0);
  double v = (x(1) - w.y0) / (w.y1 - w.y0);
  if (!(u >= 0 && u < 1 && v >= 0 && v < 1)) return std::nullopt;
  int i = std::min(width - 1, static_cast<int>(u * width));
  int j = height - 1 - std::min(height - 1, static_cast<int>(v * height));
  return std::make_pair(i, j);
}

namespace {

Image blank(int width, int height, std::uint8_t fill) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  return Image{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, fill)};
}

void put(Image& img, int i, int j, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::size_t o = (static_cast<std::size_t>(j) * img.width + i) * 3;
  img.rgb[o] = r;
  img.rgb[o + 1] = g;
  img.rgb[o + 2] = b;
}

}  // namespace

Image rasterize(const PointCloud& cloud, int width, int height, const Window& w) {
  Image img = blank(width, height, 255);
  for (const auto& x : cloud.points)
    if (auto px = pixel_of(x, width, height, w)) put(img, px->first, px->second, 20, 20, 90);
  return img;
}

HeatField heat_field(const MeasureInstance& inst, int width, int height, const Window& w, double eps,
                     const std::optional<IntVec2>& a, unsigned site_depth) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  HeatField f;
  f.width = width;
  f.height = height;
  f.window = w;
  f.values.assign(static_cast<std::size_t>(width) * height, 0.0);
  const double dx = (w.x1 - w.x0) / width, dy = (w.y1 - w.y0) / height;
  parallel_for(static_cast<std::size_t>(height), [&](std::size_t j) {
    for (int i = 0; i < width; ++i) {
      Eigen::Vector2d xi(w.x0 + (i + 0.5) * dx, w.y1 - (static_cast<double>(j) + 0.5) * dy);
      f.values[j * width + i] = std::norm(mu_hat(inst, xi, eps).value);
    }
  });
  if (!a) return f;

  const long p = inst.D.p;
  const Eigen::Vector2d corners[4] = {{w.x0, w.y0}, {w.x1, w.y0}, {w.x0, w.y1}, {w.x1, w.y1}};
  for (unsigned k = 1; k <= site_depth; ++k) {
    ExactMat2 Mk = transpose_power(inst.M, k);
    Eigen::Matrix2d inv = to_double(Mk).inverse();
    Eigen::Vector2d lo = inv * corners[0], hi = lo;
    for (const auto& c : corners) {
      lo = lo.cwiseMin(inv * c);
      hi = hi.cwiseMax(inv * c);
    }
    for (long jj = 1; jj < p; ++jj) {
      Eigen::Vector2d off(static_cast<double>(jj * (*a)(0)) / p, static_cast<double>(jj * (*a)(1)) / p);
      long z1lo = static_cast<long>(std::floor(lo(0) - off(0))) - 1, z1hi = static_cast<long>(std::ceil(hi(0) - off(0))) + 1;
      long z2lo = static_cast<long>(std::floor(lo(1) - off(1))) - 1, z2hi = static_cast<long>(std::ceil(hi(1) - off(1))) + 1;
      for (long z1 = z1lo; z1 <= z1hi; ++z1)
        for (long z2 = z2lo; z2 <= z2hi; ++z2) {
          ExactVec2 base = make_vec(AlgebraicScalar(Rational(jj * (*a)(0)) / Rational(p) + Rational(z1)),
                                    AlgebraicScalar(Rational(jj * (*a)(1)) / Rational(p) + Rational(z2)));
          ExactVec2 site = Mk * base;
          Eigen::Vector2d sd = to_double(site);
          auto px = pixel_of(sd, width, height, w);
          if (!px) continue;
          bool seen = std::any_of(f.sites.begin(), f.sites.end(), [&](const HeatSite& s) { return s.point == site; });
          if (seen) continue;
          f.sites.push_back({site, px->first, px->second});
          f.values[static_cast<std::size_t>(px->second) * width + px->first] = std::norm(mu_hat(inst, sd, eps).value);
        }
    }
  }
  return f;
}

Image rasterize(const HeatField& field) {
  Image img = blank(field.width, field.height, 0);
  for (int j = 0; j < field.height; ++j)
    for (int i = 0; i < field.width; ++i) {
      double v = std::clamp(field.at(i, j), 0.0, 1.0);
      auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::sqrt(v)));
      put(img, i, j, g, g, static_cast<std::uint8_t>(std::min(255, g + 30)));
    }
  return img;
}

std::vector<std::uint8_t> ppm_bytes(const Image& img) {
  std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

void write_ppm(const std::string& path, const Image& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  auto bytes = ppm_bytes(img);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string render_file_name(const std::string& tag, unsigned depth, int width, int height) {
  return tag + "_depth" + std::to_string(depth) + "_" + std::to_string(width) + "x" + std::to_string(height) + ".ppm";
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace affspec
