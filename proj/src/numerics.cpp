#include "affspec/numerics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "affspec/parallel.hpp"

namespace affspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce(double x) { return x - std::floor(x); }

Complex unit(double phase) {
  double a = -kTwoPi * reduce(phase);
  return {std::cos(a), std::sin(a)};
}

double mean_digit_norm(const DigitSet& D) {
  double s = 0.0;
  for (const auto& d : D.digits) s += std::hypot(static_cast<double>(d(0)), static_cast<double>(d(1)));
  return s / D.p;
}

double upper(double x) { return x * (1.0 + 1e-12) + 1e-300; }

struct Contraction {
  double rho;  // upper bound of max(rho1, rho2)
  double c;    // upper bound of |c|
};

Contraction contraction(const MeasureInstance& inst) {
  double r1 = 1.0 / to_double(inst.M.rho1_inv), r2 = 1.0 / to_double(inst.M.rho2_inv);
  return {upper(std::max(r1, r2)), upper(std::abs(to_double(inst.M.c)))};
}

double log2_norm_upper(const ExactVec2& v) {
  double a = log2_upper(v(0)), b = log2_upper(v(1));
  return std::max(a, b) + 0.5;
}

// (M*)^-k in double, k = 1..K
std::vector<Eigen::Matrix2d> inverse_transposes(const MeasureInstance& inst, unsigned K) {
  double r1 = 1.0 / to_double(inst.M.rho1_inv), r2 = 1.0 / to_double(inst.M.rho2_inv);
  double c = to_double(inst.M.c);
  std::vector<Eigen::Matrix2d> out;
  double p1 = r1, p2 = r2, th = -c * r1 * r2;
  for (unsigned k = 1; k <= K; ++k) {
    if (k > 1) {
      p2 *= r2;
      th = r1 * th - c * r1 * p2;
      p1 *= r1;
    }
    Eigen::Matrix2d m;
    m << p1, 0.0, th, p2;
    out.push_back(m);
  }
  return out;
}

}  // namespace

Complex mask_eval(const DigitSet& D, const Eigen::Vector2d& xi) {
  Complex s{0.0, 0.0};
  for (const auto& d : D.digits) {
    double ph = reduce(xi(0) * d(0)) + reduce(xi(1) * d(1));
    s += unit(ph);
  }
  return s / static_cast<double>(D.p);
}

Eigen::Vector2cd mask_gradient(const DigitSet& D, const Eigen::Vector2d& xi) {
  Eigen::Vector2cd g = Eigen::Vector2cd::Zero();
  const Complex mi(0.0, -kTwoPi);
  for (const auto& d : D.digits) {
    Complex e = unit(reduce(xi(0) * d(0)) + reduce(xi(1) * d(1)));
    g(0) += mi * static_cast<double>(d(0)) * e;
    g(1) += mi * static_cast<double>(d(1)) * e;
  }
  return g / static_cast<double>(D.p);
}

double tail_bound(const MeasureInstance& inst, double log2_norm, unsigned K) {
  if (log2_norm == -std::numeric_limits<double>::infinity()) return 0.0;
  Contraction ct = contraction(inst);
  const double rho = ct.rho;
  const double k1 = K + 1.0;
  // sum_{k>K} (2 rho^k + |c| k rho^(k+1)), factored by rho^(K+1)
  double bracket = 2.0 / (1.0 - rho) + ct.c * rho * (k1 - K * rho) / ((1.0 - rho) * (1.0 - rho));
  double log_s = std::log(kTwoPi * mean_digit_norm(inst.D)) + log2_norm * std::log(2.0) + k1 * std::log(rho) +
                 std::log(bracket);
  if (log_s > 700) return std::numeric_limits<double>::infinity();
  return upper(std::expm1(std::exp(log_s)));
}

unsigned depth_for(const MeasureInstance& inst, double log2_norm, double eps) {
  unsigned K = 0;
  while (tail_bound(inst, log2_norm, K) > eps) {
    ++K;
    if (K > 1000000) throw std::runtime_error("truncation depth does not converge");
  }
  return K;
}

ShiftedProduct::ShiftedProduct(const MeasureInstance& inst, const ExactVec2& lambda, double radius, double eps,
                               const std::optional<IntVec2>& a)
    : p_(inst.D.p) {
  lambda_zero_ = is_zero(lambda);
  double ln = log2_norm_upper(lambda);
  double lr = radius > 0 ? std::log2(radius) : -std::numeric_limits<double>::infinity();
  // |xi + lambda| <= 2 max(|xi|, |lambda|)
  double lnorm = std::max(ln, lr) + 1.0;
  K_ = depth_for(inst, lnorm, eps);
  tail_ = tail_bound(inst, lnorm, K_);
  if (a && !lambda_zero_) zero_at_origin_ = zero_lattice_member(lambda, inst, *a, 1u << 20).has_value();
  for (const auto& d : inst.D.digits) digits_.emplace_back(static_cast<double>(d(0)), static_cast<double>(d(1)));
  inv_t_ = inverse_transposes(inst, K_);
  phase_.assign(static_cast<std::size_t>(K_) * p_, 0.0);
  if (lambda_zero_) return;
  const AlgebraicScalar r1 = inverse(inst.M.rho1_inv), r2 = inverse(inst.M.rho2_inv);
  const AlgebraicScalar th = -(inst.M.c * r1 * r2);
  AlgebraicScalar e1 = lambda(0), e2 = lambda(1);
  for (unsigned k = 0; k < K_; ++k) {
    AlgebraicScalar n1 = r1 * e1;
    e2 = th * e1 + r2 * e2;
    e1 = std::move(n1);
    for (int i = 0; i < p_; ++i) {
      const auto& d = inst.D.digits[i];
      phase_[k * p_ + i] = frac_double(e1 * AlgebraicScalar(d(0)) + e2 * AlgebraicScalar(d(1)));
    }
  }
}

TruncatedValue ShiftedProduct::eval(const Eigen::Vector2d& xi) const {
  TruncatedValue out;
  out.depth = K_;
  const bool origin = xi(0) == 0.0 && xi(1) == 0.0;
  if (origin && lambda_zero_) return out;
  if (origin && zero_at_origin_) {
    out.value = 0.0;
    out.exact_zero = true;
    return out;
  }
  Complex prod{1.0, 0.0};
  for (unsigned k = 0; k < K_; ++k) {
    Eigen::Vector2d eta = inv_t_[k] * xi;
    Complex s{0.0, 0.0};
    for (int i = 0; i < p_; ++i) {
      double ph = phase_[k * p_ + i] + reduce(eta(0) * digits_[i](0)) + reduce(eta(1) * digits_[i](1));
      s += unit(ph);
    }
    prod *= s / static_cast<double>(p_);
  }
  out.value = prod;
  out.tail_bound = tail_ + 8e-16 * (K_ + 1) * p_;
  return out;
}

TruncatedValue mu_hat(const MeasureInstance& inst, const ExactVec2& xi, double eps, const std::optional<IntVec2>& a) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  return ShiftedProduct(inst, xi, 0.0, eps, a).eval(Eigen::Vector2d::Zero());
}

TruncatedValue mu_hat(const MeasureInstance& inst, const Eigen::Vector2d& xi, double eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  TruncatedValue out;
  double n = xi.norm();
  if (n == 0.0) return out;
  double lnorm = std::log2(n) + 1e-12;
  out.depth = depth_for(inst, lnorm, eps);
  out.tail_bound = tail_bound(inst, lnorm, out.depth) + 8e-16 * (out.depth + 1) * inst.D.p;
  auto mats = inverse_transposes(inst, out.depth);
  for (const auto& m : mats) out.value *= mask_eval(inst.D, m * xi);
  return out;
}

QEvaluator::QEvaluator(const MeasureInstance& inst, const FrequencySet& lambda, double radius, double eps,
                       const std::optional<IntVec2>& a) {
  for (const auto& l : lambda.points) terms_.emplace_back(inst, l, radius, eps, a);
}

QValue QEvaluator::eval(const Eigen::Vector2d& xi) const {
  QValue q;
  for (const auto& t : terms_) {
    TruncatedValue v = t.eval(xi);
    q.value += std::norm(v.value);
    q.error += 2.0 * v.tail_bound + v.tail_bound * v.tail_bound;
  }
  return q;
}

QValue q_eval(const MeasureInstance& inst, const FrequencySet& lambda, const Eigen::Vector2d& xi, double eps,
              const std::optional<IntVec2>& a) {
  return QEvaluator(inst, lambda, xi.norm(), eps, a).eval(xi);
}

double Window::radius() const {
  double mx = std::max(std::abs(x0), std::abs(x1)), my = std::max(std::abs(y0), std::abs(y1));
  return std::hypot(mx, my);
}

GridStats grid_scan(const MeasureInstance& inst, const FrequencySet& lambda, const Window& w, int resolution,
                    double eps, const std::optional<IntVec2>& a) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  QEvaluator q(inst, lambda, w.radius(), eps, a);
  const std::size_t n = static_cast<std::size_t>(resolution) * resolution;
  std::vector<QValue> vals(n);
  std::vector<Eigen::Vector2d> pts(n);
  parallel_for(n, [&](std::size_t idx) {
    int i = static_cast<int>(idx % resolution), j = static_cast<int>(idx / resolution);
    Eigen::Vector2d xi(w.x0 + (w.x1 - w.x0) * i / resolution, w.y0 + (w.y1 - w.y0) * j / resolution);
    pts[idx] = xi;
    vals[idx] = q.eval(xi);
  });
  GridStats g;
  g.resolution = resolution;
  g.min = std::numeric_limits<double>::infinity();
  g.max = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (vals[idx].value < g.min) {
      g.min = vals[idx].value;
      g.argmin = pts[idx];
    }
    if (vals[idx].value > g.max) {
      g.max = vals[idx].value;
      g.argmax = pts[idx];
    }
    g.error = std::max(g.error, vals[idx].error);
  }
  return g;
}

std::vector<ZeroBox> torus_zero_scan(const DigitSet& D, int resolution, int refinements, double /*tol*/) {
  if (resolution < 1) throw std::invalid_argument("scan resolution must be positive");
  // |m_D| is translation invariant; centre the digits to shrink the Lipschitz constant
  Eigen::Vector2d cen = Eigen::Vector2d::Zero();
  for (const auto& d : D.digits) cen += Eigen::Vector2d(d(0), d(1));
  cen /= D.p;
  IntVec2 shift(std::lround(cen(0)), std::lround(cen(1)));
  DigitSet C = D;
  for (auto& d : C.digits) d -= shift;
  const double lip = kTwoPi * mean_digit_norm(C);
  const double slack = 1e-12;

  auto keep = [&](const Eigen::Vector2d& c, double h) {
    return std::abs(mask_eval(C, c)) - lip * std::sqrt(2.0) * h <= slack;
  };

  const double h0 = 0.5 / resolution;
  std::vector<std::vector<ZeroBox>> rows(resolution);
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t j) {
    for (int i = 0; i < resolution; ++i) {
      Eigen::Vector2d c((i + 0.5) / resolution, (j + 0.5) / resolution);
      if (keep(c, h0)) rows[j].push_back({c, h0});
    }
  });
  std::vector<ZeroBox> boxes;
  for (auto& r : rows) boxes.insert(boxes.end(), r.begin(), r.end());

  for (int level = 0; level < refinements; ++level) {
    std::vector<std::vector<ZeroBox>> next(boxes.size());
    parallel_for(boxes.size(), [&](std::size_t b) {
      double h = boxes[b].half_width / 2;
      for (int dx = -1; dx <= 1; dx += 2)
        for (int dy = -1; dy <= 1; dy += 2) {
          Eigen::Vector2d c = boxes[b].center + Eigen::Vector2d(dx * h, dy * h);
          if (keep(c, h)) next[b].push_back({c, h});
        }
    });
    boxes.clear();
    for (auto& n : next) boxes.insert(boxes.end(), n.begin(), n.end());
  }
  return boxes;
}

double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  double dx = std::abs(reduce(a(0) - b(0))), dy = std::abs(reduce(a(1) - b(1)));
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

std::vector<LocatedZero> locate_zeros(const DigitSet& D, const std::vector<ZeroBox>& boxes, double tol) {
  std::vector<LocatedZero> out;
  if (boxes.empty()) return out;
  // union-find over boxes sharing an edge or corner on the torus
  const double h = boxes.front().half_width;
  const long cells = std::lround(0.5 / h);
  std::unordered_map<long long, std::size_t> at;
  auto cell_of = [&](const ZeroBox& b) {
    long i = static_cast<long>(std::floor(b.center(0) / (2 * h))), j = static_cast<long>(std::floor(b.center(1) / (2 * h)));
    return std::pair<long, long>(((i % cells) + cells) % cells, ((j % cells) + cells) % cells);
  };
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    auto [i, j] = cell_of(boxes[b]);
    at[static_cast<long long>(i) * cells + j] = b;
  }
  std::vector<std::size_t> parent(boxes.size());
  for (std::size_t b = 0; b < boxes.size(); ++b) parent[b] = b;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    auto [i, j] = cell_of(boxes[b]);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        long ni = ((i + di) % cells + cells) % cells, nj = ((j + dj) % cells + cells) % cells;
        auto it = at.find(static_cast<long long>(ni) * cells + nj);
        if (it != at.end()) parent[find(b)] = find(it->second);
      }
  }
  std::unordered_map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t b = 0; b < boxes.size(); ++b) clusters[find(b)].push_back(b);

  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [root, members] : clusters) ordered.push_back(std::move(members));
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

  for (const auto& members : ordered) {
    std::size_t best = members.front();
    double bestv = std::abs(mask_eval(D, boxes[best].center));
    for (std::size_t b : members) {
      double v = std::abs(mask_eval(D, boxes[b].center));
      if (v < bestv) {
        bestv = v;
        best = b;
      }
    }
    Eigen::Vector2d x = boxes[best].center;
    const Eigen::Vector2d start = x;
    double res = bestv;
    for (int it = 0; it < 60 && res > 1e-15; ++it) {
      Complex m = mask_eval(D, x);
      Eigen::Vector2cd g = mask_gradient(D, x);
      Eigen::Matrix2d J;
      J << g(0).real(), g(1).real(), g(0).imag(), g(1).imag();
      Eigen::Vector2d F(m.real(), m.imag());
      Eigen::Vector2d step = J.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-F);
      x += step;
      res = std::abs(mask_eval(D, x));
      if (step.norm() < 1e-17) break;
    }
    LocatedZero z;
    z.point = Eigen::Vector2d(reduce(x(0)), reduce(x(1)));
    z.residual = res;
    // a jump far outside the cluster means Newton did not resolve this cluster
    double reach = 2 * h * (std::sqrt(static_cast<double>(members.size())) + 2);
    z.converged = res <= tol && torus_distance(x, start) <= std::max(reach, 1e-6);
    z.cluster_size = members.size();
    // thin survivor regions split into several clusters; merge those that reach the same zero
    auto same = std::find_if(out.begin(), out.end(), [&](const LocatedZero& o) {
      return o.residual <= tol && z.residual <= tol && torus_distance(o.point, z.point) < 1e-7;
    });
    if (same != out.end()) {
      same->cluster_size += z.cluster_size;
      same->converged = same->converged || z.converged;
      if (z.residual < same->residual) {
        same->point = z.point;
        same->residual = z.residual;
      }
      continue;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace affspec
