#include "affspec/measure_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace affspec {

ExactVec2 to_exact(const IntVec2& v) { return make_vec(AlgebraicScalar(v(0)), AlgebraicScalar(v(1))); }

ExactMat2 to_exact(const IntMat2& m) {
  ExactMat2 r;
  r << AlgebraicScalar(m(0, 0)), AlgebraicScalar(m(0, 1)), AlgebraicScalar(m(1, 0)), AlgebraicScalar(m(1, 1));
  return r;
}

ExactVec2 make_vec(const AlgebraicScalar& x, const AlgebraicScalar& y) {
  ExactVec2 v;
  v << x, y;
  return v;
}

bool is_zero(const ExactVec2& v) { return v(0).is_zero() && v(1).is_zero(); }

std::string key(const ExactVec2& v) { return v(0).str() + "|" + v(1).str(); }

std::string to_string(const ExactVec2& v) { return "(" + v(0).str() + ", " + v(1).str() + ")"; }

Eigen::Vector2d to_double(const ExactVec2& v) { return {affspec::to_double(v(0)), affspec::to_double(v(1))}; }

Eigen::Matrix2d to_double(const ExactMat2& m) {
  Eigen::Matrix2d r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = affspec::to_double(m(i, j));
  return r;
}

ExactMat2 ExpandingMatrix::matrix() const {
  ExactMat2 m;
  m << rho1_inv, c, AlgebraicScalar::embed(Rational(0), field()), rho2_inv;
  return m;
}

ExpandingMatrix make_expanding_matrix(const AlgebraicScalar& rho1_inv, const AlgebraicScalar& c,
                                      const AlgebraicScalar& rho2_inv) {
  // the sum throws on incompatible fields and fixes the common base
  const RootBase field = (rho1_inv + c + rho2_inv).base();
  ExpandingMatrix M{rho1_inv.promoted(field), c.promoted(field), rho2_inv.promoted(field)};
  AlgebraicScalar one(1);
  if (sign(M.rho1_inv - one) <= 0 || sign(M.rho2_inv - one) <= 0)
    throw std::invalid_argument("matrix is not expanding: diagonal entries must exceed 1");
  return M;
}

DigitSet make_digit_set(std::vector<IntVec2> digits) {
  const long p = static_cast<long>(digits.size());
  if (!is_prime(p)) throw std::invalid_argument("digit count " + std::to_string(p) + " is not prime");
  for (std::size_t i = 0; i < digits.size(); ++i)
    for (std::size_t j = i + 1; j < digits.size(); ++j)
      if (digits[i] == digits[j]) throw std::invalid_argument("digits are not distinct");
  return DigitSet{static_cast<int>(p), std::move(digits)};
}

bool is_normalized(const DigitSet& D) {
  return D.digits.size() >= 2 && D.digits[0] == IntVec2(0, 0) && D.digits[1](1) == 0 && D.digits[1](0) != 0;
}

MeasureInstance make_instance(ExpandingMatrix M, DigitSet D, std::string tag) {
  bool n = is_normalized(D);
  return MeasureInstance{std::move(M), std::move(D), n, std::move(tag)};
}

std::optional<Normalization> normalize_digits(const DigitSet& D) {
  if (is_normalized(D)) {
    Normalization n{D, IntVec2(0, 0), {}, true};
    for (std::size_t i = 0; i < D.digits.size(); ++i) n.permutation.push_back(i);
    return n;
  }
  const std::size_t p = D.digits.size();
  for (std::size_t o = 0; o < p; ++o) {
    for (std::size_t h = 0; h < p; ++h) {
      if (h == o) continue;
      IntVec2 diff = D.digits[h] - D.digits[o];
      if (diff(1) != 0 || diff(0) == 0) continue;
      Normalization n;
      n.translation = -D.digits[o];
      n.permutation = {o, h};
      for (std::size_t i = 0; i < p; ++i)
        if (i != o && i != h) n.permutation.push_back(i);
      n.digits.p = D.p;
      for (std::size_t i : n.permutation) n.digits.digits.push_back(D.digits[i] + n.translation);
      return n;
    }
  }
  return std::nullopt;
}

std::optional<MeasureInstance> normalize_instance(const MeasureInstance& inst) {
  auto n = normalize_digits(inst.D);
  if (!n) return std::nullopt;
  return make_instance(inst.M, n->digits, inst.tag);
}

std::vector<ExactVec2> to_exact(const DigitSet& D) {
  std::vector<ExactVec2> out;
  for (const auto& d : D.digits) out.push_back(to_exact(d));
  return out;
}

Conjugated conjugate(const ExactMat2& M, const std::vector<ExactVec2>& D, const ExactMat2& R) {
  ExactMat2 Rinv = exact_inverse(R);
  Conjugated out;
  out.M = R * M * Rinv;
  for (const auto& d : D) out.D.push_back(R * d);
  return out;
}

std::optional<MeasureInstance> conjugate_instance(const MeasureInstance& inst, const IntMat2& R) {
  Conjugated cj = conjugate(inst.M.matrix(), to_exact(inst.D), to_exact(R));
  if (!cj.M(1, 0).is_zero()) return std::nullopt;
  std::vector<IntVec2> digits;
  for (const auto& d : cj.D) {
    auto x = is_rational(d(0)), y = is_rational(d(1));
    if (!x || !y || !x->is_integer() || !y->is_integer()) return std::nullopt;
    digits.emplace_back(x->num().get_si(), y->num().get_si());
  }
  ExpandingMatrix M = make_expanding_matrix(cj.M(0, 0), cj.M(0, 1), cj.M(1, 1));
  return make_instance(M, make_digit_set(digits), inst.tag);
}

DerivedQuantities derive(const MeasureInstance& inst) {
  DerivedQuantities q;
  q.equal_rho = inst.M.rho1_inv == inst.M.rho2_inv;
  if (q.equal_rho) {
    if (inst.normalized) q.d11 = inst.D.digits[1](0);
    return q;
  }
  if (!inst.normalized)
    throw std::invalid_argument("distinct contraction ratios need normalized digits; run normalize_digits first");
  q.d11 = inst.D.digits[1](0);
  AlgebraicScalar gap = inst.M.rho1_inv - inst.M.rho2_inv;
  q.c_prime = inst.M.c / (AlgebraicScalar(q.d11) * gap);
  q.c_double_prime = AlgebraicScalar(q.d11) * *q.c_prime;
  return q;
}

ExactMat2 inverse_power(const ExpandingMatrix& M, unsigned k) {
  if (k == 0) throw std::invalid_argument("inverse_power needs k >= 1");
  AlgebraicScalar r1 = inverse(M.rho1_inv), r2 = inverse(M.rho2_inv);
  AlgebraicScalar p1 = r1, p2 = r2;
  AlgebraicScalar th = -(M.c * r1 * r2);
  for (unsigned i = 1; i < k; ++i) {
    p2 *= r2;
    th = r1 * th - M.c * r1 * p2;
    p1 *= r1;
  }
  ExactMat2 out;
  out << p1, th, AlgebraicScalar::embed(Rational(0), M.field()), p2;
  return out;
}

std::optional<LatticeHit> zero_lattice_member(const ExactVec2& xi, const MeasureInstance& inst,
                                              const IntVec2& a, unsigned kmax) {
  if (is_zero(xi)) return std::nullopt;
  const long p = inst.D.p;
  const AlgebraicScalar r1 = inverse(inst.M.rho1_inv), r2 = inverse(inst.M.rho2_inv);
  const AlgebraicScalar th = -(inst.M.c * r1 * r2);
  const double lr = std::log2(affspec::to_double(r1)) + 1e-12;
  const double l0 = log2_upper(xi(0));
  const double cutoff = -std::log2(static_cast<double>(p));
  const long a1inv = mod_inverse(a(0), p);
  const Rational rp(p);

  AlgebraicScalar e1 = xi(0), e2 = xi(1);
  for (unsigned k = 1; k <= kmax; ++k) {
    AlgebraicScalar n1 = r1 * e1;
    e2 = th * e1 + r2 * e2;
    e1 = std::move(n1);
    if (e1.is_zero()) return std::nullopt;
    if (auto q1 = is_rational(e1)) {
      Rational s1 = *q1 * rp;
      if (s1.is_integer()) {
        long res1 = mod(s1.num(), p);
        if (res1 != 0) {
          long j = mod(res1 * a1inv, p);
          if (auto q2 = is_rational(e2)) {
            Rational s2 = *q2 * rp;
            if (s2.is_integer() && mod(s2.num(), p) == mod(j * a(1), p)) {
              Vec2<BigInt> z;
              z << BigInt((s1.num() - j * a(0)) / p), BigInt((s2.num() - j * a(1)) / p);
              return LatticeHit{k, static_cast<int>(j), z};
            }
          }
        }
      }
    }
    // |e1| < 1/p from here on: no later k can hit
    if (l0 + k * lr < cutoff) return std::nullopt;
  }
  return std::nullopt;
}

bool FrequencySet::contains(const ExactVec2& v) const {
  for (const auto& x : points)
    if (x == v) return true;
  return false;
}

bool FrequencySet::insert(const ExactVec2& v) {
  if (contains(v)) return false;
  points.push_back(v);
  return true;
}

}  // namespace affspec
