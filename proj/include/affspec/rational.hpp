#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace affspec {

using BigInt = mpz_class;

// Reduced fraction num/den with den > 0.  Zero is 0/1.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T v) : q_(static_cast<long>(v)) {}
  Rational(const BigInt& n) : q_(n) {}
  Rational(const BigInt& n, const BigInt& d);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  static Rational parse(const std::string& text);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  double to_double() const { return q_.get_d(); }
  std::string str() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);
  Rational operator-() const { Rational r; r.q_ = -q_; return r; }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  mpq_class q_;
};

Rational abs(const Rational& q);
BigInt floor(const Rational& q);
// q - floor(q), in [0, 1)
Rational frac(const Rational& q);
Rational pow(const Rational& q, long e);
BigInt pow(const BigInt& b, unsigned long e);

// Exact m-th root of n >= 0 when n is a perfect m-th power.
std::optional<BigInt> exact_root(const BigInt& n, unsigned long m);
// Exact positive m-th root of q > 0 when both num and den are perfect powers.
std::optional<Rational> exact_root(const Rational& q, unsigned long m);

// Largest e with p^e | n (n != 0); n is divided by p^e when rest is given.
long valuation(const BigInt& n, unsigned long p, BigInt* rest = nullptr);

// Upper bound for log2|q|; -infinity for zero.
double log2_upper(const Rational& q);

bool is_prime(long n);
// Modular inverse of a mod p (p prime, a not divisible by p).
long mod_inverse(long a, long p);
long mod(const BigInt& n, long p);
inline long mod(long n, long p) { long r = n % p; return r < 0 ? r + p : r; }

}  // namespace affspec

namespace Eigen {
template <>
struct NumTraits<affspec::Rational> : GenericNumTraits<affspec::Rational> {
  using Real = affspec::Rational;
  using NonInteger = affspec::Rational;
  using Literal = affspec::Rational;
  using Nested = affspec::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 16
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
