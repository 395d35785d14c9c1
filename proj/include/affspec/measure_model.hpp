#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "affspec/exact_scalar.hpp"

namespace affspec {

template <typename S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

using ExactVec2 = Vec2<AlgebraicScalar>;
using ExactMat2 = Mat2<AlgebraicScalar>;
using IntVec2 = Vec2<long>;
using IntMat2 = Mat2<long>;

template <typename S>
S det(const Mat2<S>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <typename S>
Mat2<S> exact_inverse(const Mat2<S>& m) {
  S d = det(m);
  if (d == S(0)) throw std::domain_error("singular matrix");
  Mat2<S> r;
  r << m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d;
  return r;
}

template <typename S>
Mat2<S> matrix_power(const Mat2<S>& m, unsigned long e) {
  Mat2<S> result;
  result << S(1), S(0), S(0), S(1);
  Mat2<S> b = m;
  while (e > 0) {
    if (e & 1) result = (result * b).eval();
    e >>= 1;
    if (e) b = (b * b).eval();
  }
  return result;
}

ExactVec2 to_exact(const IntVec2& v);
ExactMat2 to_exact(const IntMat2& m);
ExactVec2 make_vec(const AlgebraicScalar& x, const AlgebraicScalar& y);
bool is_zero(const ExactVec2& v);
// Canonical text key, used for set semantics on exact vectors.
std::string key(const ExactVec2& v);
std::string to_string(const ExactVec2& v);
Eigen::Vector2d to_double(const ExactVec2& v);
Eigen::Matrix2d to_double(const ExactMat2& m);

// M = [[rho1_inv, c], [0, rho2_inv]], all entries over one field.
struct ExpandingMatrix {
  AlgebraicScalar rho1_inv;
  AlgebraicScalar c;
  AlgebraicScalar rho2_inv;

  ExactMat2 matrix() const;
  const RootBase& field() const { return rho1_inv.base(); }
};

ExpandingMatrix make_expanding_matrix(const AlgebraicScalar& rho1_inv, const AlgebraicScalar& c,
                                      const AlgebraicScalar& rho2_inv);

struct DigitSet {
  int p = 0;
  std::vector<IntVec2> digits;
};

DigitSet make_digit_set(std::vector<IntVec2> digits);

struct MeasureInstance {
  ExpandingMatrix M;
  DigitSet D;
  bool normalized = false;
  std::string tag;
};

MeasureInstance make_instance(ExpandingMatrix M, DigitSet D, std::string tag = "instance");
bool is_normalized(const DigitSet& D);

struct Normalization {
  DigitSet digits;
  IntVec2 translation;                  // added to every digit
  std::vector<std::size_t> permutation;  // new index -> old index
  bool identity = false;
};

std::optional<Normalization> normalize_digits(const DigitSet& D);
std::optional<MeasureInstance> normalize_instance(const MeasureInstance& inst);

struct Conjugated {
  ExactMat2 M;
  std::vector<ExactVec2> D;
};

Conjugated conjugate(const ExactMat2& M, const std::vector<ExactVec2>& D, const ExactMat2& R);
std::vector<ExactVec2> to_exact(const DigitSet& D);

// Integer R with R M R^-1 upper triangular and R D integral; empty otherwise.
std::optional<MeasureInstance> conjugate_instance(const MeasureInstance& inst, const IntMat2& R);

struct DerivedQuantities {
  long d11 = 0;
  std::optional<AlgebraicScalar> c_prime;
  std::optional<AlgebraicScalar> c_double_prime;
  bool equal_rho = false;
};

DerivedQuantities derive(const MeasureInstance& inst);

// M^-k = [[rho1^k, theta_k], [0, rho2^k]]
ExactMat2 inverse_power(const ExpandingMatrix& M, unsigned k);

struct LatticeHit {
  unsigned k;
  int j;
  Vec2<BigInt> z;
};

// Least k <= kmax with (M*)^-k xi in j a/p + Z^2.
std::optional<LatticeHit> zero_lattice_member(const ExactVec2& xi, const MeasureInstance& inst,
                                              const IntVec2& a, unsigned kmax);

struct FrequencySet {
  std::vector<ExactVec2> points;
  std::string provenance;
  unsigned depth = 0;

  std::size_t size() const { return points.size(); }
  bool contains(const ExactVec2& v) const;
  // Appends v unless already present.
  bool insert(const ExactVec2& v);
};

}  // namespace affspec
