#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

#include "affspec/measure_model.hpp"

namespace affspec {

using Complex = std::complex<double>;

// (1/p) sum_d exp(-2 pi i <xi, d>)
Complex mask_eval(const DigitSet& D, const Eigen::Vector2d& xi);
// Gradient of mask_eval: d m / d xi_k.
Eigen::Vector2cd mask_gradient(const DigitSet& D, const Eigen::Vector2d& xi);

struct TruncatedValue {
  Complex value{1.0, 0.0};
  double tail_bound = 0.0;
  unsigned depth = 0;
  bool exact_zero = false;
};

// Certified tail of the product after K factors, for |xi| <= 2^log2_norm.
double tail_bound(const MeasureInstance& inst, double log2_norm, unsigned K);
// Least K whose tail bound is <= eps.
unsigned depth_for(const MeasureInstance& inst, double log2_norm, double eps);

// mu_hat(xi + lambda) for a fixed exact lambda and floating xi with |xi| <= radius.
// Phases of lambda are reduced mod 1 exactly once, at construction.
class ShiftedProduct {
 public:
  ShiftedProduct(const MeasureInstance& inst, const ExactVec2& lambda, double radius, double eps,
                 const std::optional<IntVec2>& a = std::nullopt);
  TruncatedValue eval(const Eigen::Vector2d& xi) const;
  unsigned depth() const { return K_; }

 private:
  int p_;
  unsigned K_;
  double tail_;
  bool zero_at_origin_ = false;
  bool lambda_zero_ = false;
  std::vector<Eigen::Vector2d> digits_;
  std::vector<Eigen::Matrix2d> inv_t_;  // (M*)^-k
  std::vector<double> phase_;           // K x p
};

TruncatedValue mu_hat(const MeasureInstance& inst, const ExactVec2& xi, double eps,
                      const std::optional<IntVec2>& a = std::nullopt);
TruncatedValue mu_hat(const MeasureInstance& inst, const Eigen::Vector2d& xi, double eps);

struct QValue {
  double value = 0.0;
  double error = 0.0;
};

class QEvaluator {
 public:
  QEvaluator(const MeasureInstance& inst, const FrequencySet& lambda, double radius, double eps,
             const std::optional<IntVec2>& a = std::nullopt);
  QValue eval(const Eigen::Vector2d& xi) const;

 private:
  std::vector<ShiftedProduct> terms_;
};

QValue q_eval(const MeasureInstance& inst, const FrequencySet& lambda, const Eigen::Vector2d& xi, double eps,
              const std::optional<IntVec2>& a = std::nullopt);

struct Window {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double radius() const;
};

struct GridStats {
  double min = 0.0, max = 0.0;
  Eigen::Vector2d argmin{0, 0}, argmax{0, 0};
  double error = 0.0;  // largest error bar over the grid
  int resolution = 0;
};

// Grid points x0 + (x1-x0) i / resolution, i < resolution, likewise in y.
GridStats grid_scan(const MeasureInstance& inst, const FrequencySet& lambda, const Window& w, int resolution,
                    double eps, const std::optional<IntVec2>& a = std::nullopt);

struct ZeroBox {
  Eigen::Vector2d center;
  double half_width;
};

// Boxes of [0,1)^2 on which |m_D| may vanish.
std::vector<ZeroBox> torus_zero_scan(const DigitSet& D, int resolution, int refinements, double tol);

struct LocatedZero {
  Eigen::Vector2d point;  // reduced to [0,1)^2
  double residual;
  bool converged;
  std::size_t cluster_size;
};

// Clusters touching boxes and runs Gauss-Newton on |m_D| = 0 from each cluster.
std::vector<LocatedZero> locate_zeros(const DigitSet& D, const std::vector<ZeroBox>& boxes, double tol);

double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

}  // namespace affspec
