#include "affspec/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace affspec {

Rational::Rational(const BigInt& n, const BigInt& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
  if (q.get_den() == 0) throw std::domain_error("rational with zero denominator");
  q.canonicalize();
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

BigInt floor(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return r;
}

Rational frac(const Rational& q) { return q - Rational(floor(q)); }

BigInt pow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& q, long e) {
  if (e < 0) {
    if (q.is_zero()) throw std::domain_error("zero to a negative power");
    return pow(Rational(q.den(), q.num()), -e);
  }
  return Rational(pow(q.num(), static_cast<unsigned long>(e)), pow(q.den(), static_cast<unsigned long>(e)));
}

std::optional<BigInt> exact_root(const BigInt& n, unsigned long m) {
  if (n < 0) return std::nullopt;
  BigInt r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), m) == 0) return std::nullopt;
  return r;
}

std::optional<Rational> exact_root(const Rational& q, unsigned long m) {
  if (q.sign() <= 0) return std::nullopt;
  auto n = exact_root(q.num(), m);
  if (!n) return std::nullopt;
  auto d = exact_root(q.den(), m);
  if (!d) return std::nullopt;
  return Rational(*n, *d);
}

long valuation(const BigInt& n, unsigned long p, BigInt* rest) {
  if (n == 0) throw std::domain_error("valuation of zero");
  BigInt pp(p), r;
  long e = static_cast<long>(mpz_remove(r.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
  if (rest) *rest = r;
  return e;
}

double log2_upper(const Rational& q) {
  if (q.is_zero()) return -std::numeric_limits<double>::infinity();
  // |n| < 2^bits(n), d >= 2^(bits(d)-1)
  auto bn = static_cast<double>(mpz_sizeinbase(q.raw().get_num_mpz_t(), 2));
  auto bd = static_cast<double>(mpz_sizeinbase(q.raw().get_den_mpz_t(), 2));
  return bn - bd + 1.0;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long mod_inverse(long a, long p) {
  a = mod(a, p);
  for (long x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  throw std::domain_error("no modular inverse");
}

long mod(const BigInt& n, long p) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
  return r.get_si();
}

}  // namespace affspec
