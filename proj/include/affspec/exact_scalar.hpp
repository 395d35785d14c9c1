#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "affspec/rational.hpp"

namespace affspec {

// theta = (t/s)^(1/r).  r = 1 is the rational field.
struct RootBase {
  BigInt t{1};
  BigInt s{1};
  unsigned r{1};

  bool is_rational() const { return r == 1; }
  Rational radicand() const { return Rational(t, s); }
  std::string str() const;
  friend bool operator==(const RootBase& a, const RootBase& b) {
    return a.r == b.r && a.t == b.t && a.s == b.s;
  }
};

// Minimal-r representative of (t/s)^(1/r).  Positive inputs only; t/s is reduced first.
RootBase canonicalize_root(const BigInt& t, const BigInt& s, unsigned r);

// Element sum c_i theta^i of Q(theta), i < r.
class AlgebraicScalar {
 public:
  AlgebraicScalar();
  template <std::integral T>
  AlgebraicScalar(T v) : AlgebraicScalar(Rational(v)) {}
  AlgebraicScalar(const Rational& q);
  AlgebraicScalar(const RootBase& base, std::vector<Rational> coeffs);

  static AlgebraicScalar theta(const RootBase& base);
  static AlgebraicScalar embed(const Rational& q, const RootBase& base);

  const RootBase& base() const { return *base_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  unsigned degree() const { return base_->r; }

  bool is_zero() const;
  // Re-express in base b (only from the rational field, or b equal to the own base).
  AlgebraicScalar promoted(const RootBase& b) const;
  std::string str() const;

  AlgebraicScalar operator-() const;
  AlgebraicScalar& operator+=(const AlgebraicScalar& o);
  AlgebraicScalar& operator-=(const AlgebraicScalar& o);
  AlgebraicScalar& operator*=(const AlgebraicScalar& o);
  AlgebraicScalar& operator/=(const AlgebraicScalar& o);

  friend AlgebraicScalar operator+(AlgebraicScalar a, const AlgebraicScalar& b) { a += b; return a; }
  friend AlgebraicScalar operator-(AlgebraicScalar a, const AlgebraicScalar& b) { a -= b; return a; }
  friend AlgebraicScalar operator*(AlgebraicScalar a, const AlgebraicScalar& b) { a *= b; return a; }
  friend AlgebraicScalar operator/(AlgebraicScalar a, const AlgebraicScalar& b) { a /= b; return a; }
  friend bool operator==(const AlgebraicScalar& a, const AlgebraicScalar& b);
  friend bool operator!=(const AlgebraicScalar& a, const AlgebraicScalar& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const AlgebraicScalar& x) { return os << x.str(); }

 private:
  AlgebraicScalar(std::shared_ptr<const RootBase> base, std::vector<Rational> coeffs)
      : base_(std::move(base)), coeffs_(std::move(coeffs)) {}
  void unify(AlgebraicScalar& o);

  std::shared_ptr<const RootBase> base_;
  std::vector<Rational> coeffs_;
};

enum class FieldOp { Add, Sub, Mul, Div };
AlgebraicScalar field_arith(FieldOp op, const AlgebraicScalar& x, const AlgebraicScalar& y);
AlgebraicScalar inverse(const AlgebraicScalar& x);
AlgebraicScalar pow(const AlgebraicScalar& x, long e);

std::optional<Rational> is_rational(const AlgebraicScalar& x);
bool is_integer(const AlgebraicScalar& x);

// x = q theta^k with x > 0: the canonical root (t'/s')^(1/r') equal to x.
std::optional<RootBase> monomial_root_form(const AlgebraicScalar& x);
// Same, but for any x > 0: x is root-rational iff x^n is rational for some n | r.
std::optional<RootBase> root_rational_form(const AlgebraicScalar& x);

struct PValuation {
  long p;
  long exponent;
  Rational unit;
};
PValuation p_valuation(const Rational& q, long p);

struct Interval {
  Rational lo;
  Rational hi;
  Rational mid() const { return (lo + hi) / Rational(2); }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

// Interval of width <= 10^-digits containing x.
Interval approx(const AlgebraicScalar& x, unsigned digits);
int sign(const AlgebraicScalar& x);
int compare(const AlgebraicScalar& x, const AlgebraicScalar& y);
double to_double(const AlgebraicScalar& x);
double log2_upper(const AlgebraicScalar& x);
// frac(x) as a double, exact reduction mod 1 first.
double frac_double(const AlgebraicScalar& x);
std::string decimal_string(const Rational& q, unsigned digits);

}  // namespace affspec

namespace Eigen {
template <>
struct NumTraits<affspec::AlgebraicScalar> : GenericNumTraits<affspec::AlgebraicScalar> {
  using Real = affspec::AlgebraicScalar;
  using NonInteger = affspec::AlgebraicScalar;
  using Literal = affspec::AlgebraicScalar;
  using Nested = affspec::AlgebraicScalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
