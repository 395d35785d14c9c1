#include "affspec/exact_scalar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace affspec {

namespace {

const std::shared_ptr<const RootBase>& rational_base() {
  static const auto base = std::make_shared<const RootBase>();
  return base;
}

std::shared_ptr<const RootBase> share(const RootBase& b) {
  if (b.is_rational()) return rational_base();
  return std::make_shared<const RootBase>(b);
}

bool same_base(const std::shared_ptr<const RootBase>& a, const std::shared_ptr<const RootBase>& b) {
  return a == b || *a == *b;
}

// floor(theta * 10^K) / 10^K and that plus 10^-K
struct ThetaBounds {
  Rational lo, hi;
};

ThetaBounds theta_bounds(const RootBase& b, unsigned K) {
  using Key = std::tuple<std::string, std::string, unsigned, unsigned>;
  static std::mutex mu;
  static std::map<Key, ThetaBounds> cache;
  Key key{b.t.get_str(), b.s.get_str(), b.r, K};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  BigInt scale = pow(BigInt(10), K);
  BigInt n = b.t * pow(scale, b.r);
  BigInt y, m;
  mpz_fdiv_q(y.get_mpz_t(), n.get_mpz_t(), b.s.get_mpz_t());
  mpz_root(m.get_mpz_t(), y.get_mpz_t(), b.r);
  ThetaBounds tb{Rational(m, scale), Rational(BigInt(m + 1), scale)};
  std::lock_guard lock(mu);
  cache.emplace(key, tb);
  return tb;
}

Interval eval_interval(const AlgebraicScalar& x, const ThetaBounds& tb) {
  const auto& c = x.coeffs();
  Rational lo = c[0], hi = c[0];
  Rational plo = 1, phi = 1;
  for (std::size_t i = 1; i < c.size(); ++i) {
    plo *= tb.lo;
    phi *= tb.hi;
    if (c[i].is_zero()) continue;
    if (c[i].sign() > 0) {
      lo += c[i] * plo;
      hi += c[i] * phi;
    } else {
      lo += c[i] * phi;
      hi += c[i] * plo;
    }
  }
  return {lo, hi};
}

// Solve A z = e0 over Q by Gaussian elimination; A is n x n, nonsingular.
std::vector<Rational> solve_unit(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<Rational> rhs(n, Rational(0));
  rhs[0] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("singular multiplication matrix");
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      Rational f = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= a[i][i];
  return rhs;
}

}  // namespace

std::string RootBase::str() const {
  std::ostringstream os;
  os << "(" << t.get_str() << "/" << s.get_str() << ")^(1/" << r << ")";
  return os.str();
}

RootBase canonicalize_root(const BigInt& t0, const BigInt& s0, unsigned r) {
  if (t0 <= 0 || s0 <= 0 || r == 0) throw std::invalid_argument("root base needs positive t, s, r");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), t0.get_mpz_t(), s0.get_mpz_t());
  BigInt t = t0 / g, s = s0 / g;
  bool changed = true;
  while (changed && r > 1) {
    changed = false;
    for (unsigned d = 2; d <= r; ++d) {
      if (r % d != 0 || !is_prime(d)) continue;
      auto rt = exact_root(t, d);
      auto rs = exact_root(s, d);
      if (rt && rs) {
        t = *rt;
        s = *rs;
        r /= d;
        changed = true;
        break;
      }
    }
  }
  return RootBase{t, s, r};
}

AlgebraicScalar::AlgebraicScalar() : base_(rational_base()), coeffs_{Rational(0)} {}

AlgebraicScalar::AlgebraicScalar(const Rational& q) : base_(rational_base()), coeffs_{q} {}

AlgebraicScalar::AlgebraicScalar(const RootBase& base, std::vector<Rational> coeffs)
    : base_(share(base)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != base.r) throw std::invalid_argument("coefficient count must equal base degree");
}

AlgebraicScalar AlgebraicScalar::theta(const RootBase& base) {
  if (base.is_rational()) return AlgebraicScalar(base.radicand());
  std::vector<Rational> c(base.r, Rational(0));
  c[1] = 1;
  return AlgebraicScalar(base, std::move(c));
}

AlgebraicScalar AlgebraicScalar::embed(const Rational& q, const RootBase& base) {
  return AlgebraicScalar(q).promoted(base);
}

bool AlgebraicScalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

AlgebraicScalar AlgebraicScalar::promoted(const RootBase& b) const {
  if (*base_ == b) return *this;
  if (!base_->is_rational()) throw std::invalid_argument("incompatible radical bases");
  std::vector<Rational> c(b.r, Rational(0));
  c[0] = coeffs_[0];
  return AlgebraicScalar(share(b), std::move(c));
}

void AlgebraicScalar::unify(AlgebraicScalar& o) {
  if (same_base(base_, o.base_)) return;
  if (base_->is_rational()) {
    std::vector<Rational> c(o.base_->r, Rational(0));
    c[0] = coeffs_[0];
    coeffs_ = std::move(c);
    base_ = o.base_;
  } else if (o.base_->is_rational()) {
    std::vector<Rational> c(base_->r, Rational(0));
    c[0] = o.coeffs_[0];
    o.coeffs_ = std::move(c);
    o.base_ = base_;
  } else {
    throw std::invalid_argument("incompatible radical bases " + base_->str() + " and " + o.base_->str());
  }
}

std::string AlgebraicScalar::str() const {
  if (base_->is_rational()) return coeffs_[0].str();
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c.is_zero()) continue;
    Rational mag = c;
    if (!first) {
      os << (c.sign() < 0 ? "-" : "+");
      mag = abs(c);
    }
    if (i == 0) {
      os << mag.str();
    } else {
      if (mag != Rational(1)) os << mag.str() << "*";
      os << "(" << base_->t.get_str() << "/" << base_->s.get_str() << ")^(" << i << "/" << base_->r << ")";
    }
    first = false;
  }
  if (first) return "0";
  return os.str();
}

AlgebraicScalar AlgebraicScalar::operator-() const {
  AlgebraicScalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

AlgebraicScalar& AlgebraicScalar::operator+=(const AlgebraicScalar& o0) {
  if (same_base(base_, o0.base_)) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o0.coeffs_[i];
    return *this;
  }
  AlgebraicScalar o = o0;
  unify(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

AlgebraicScalar& AlgebraicScalar::operator-=(const AlgebraicScalar& o0) {
  if (same_base(base_, o0.base_)) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o0.coeffs_[i];
    return *this;
  }
  AlgebraicScalar o = o0;
  unify(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

AlgebraicScalar& AlgebraicScalar::operator*=(const AlgebraicScalar& o) {
  if (o.base_->is_rational()) {
    for (auto& c : coeffs_) c *= o.coeffs_[0];
    return *this;
  }
  if (base_->is_rational()) {
    Rational q = coeffs_[0];
    *this = o;
    for (auto& c : coeffs_) c *= q;
    return *this;
  }
  if (!same_base(base_, o.base_))
    throw std::invalid_argument("incompatible radical bases " + base_->str() + " and " + o.base_->str());
  const unsigned r = base_->r;
  const Rational rad = base_->radicand();
  std::vector<Rational> res(r, Rational(0));
  for (unsigned i = 0; i < r; ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (unsigned j = 0; j < r; ++j) {
      if (o.coeffs_[j].is_zero()) continue;
      Rational prod = coeffs_[i] * o.coeffs_[j];
      if (i + j < r) res[i + j] += prod;
      else res[i + j - r] += prod * rad;
    }
  }
  coeffs_ = std::move(res);
  return *this;
}

AlgebraicScalar& AlgebraicScalar::operator/=(const AlgebraicScalar& o) {
  *this *= inverse(o);
  return *this;
}

bool operator==(const AlgebraicScalar& a, const AlgebraicScalar& b) {
  if (same_base(a.base_, b.base_)) return a.coeffs_ == b.coeffs_;
  AlgebraicScalar x = a, y = b;
  x.unify(y);
  return x.coeffs_ == y.coeffs_;
}

AlgebraicScalar inverse(const AlgebraicScalar& x) {
  if (x.is_zero()) throw std::domain_error("division by zero in Q(theta)");
  const RootBase& b = x.base();
  if (b.is_rational()) return AlgebraicScalar(Rational(1) / x.coeffs()[0]);
  if (auto q = is_rational(x)) return AlgebraicScalar::embed(Rational(1) / *q, b);
  const unsigned r = b.r;
  const Rational rad = b.radicand();
  // column j holds the coefficients of x * theta^j
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r, Rational(0)));
  for (unsigned j = 0; j < r; ++j)
    for (unsigned i = 0; i < r; ++i) {
      unsigned k = i + j;
      if (k < r) a[k][j] = x.coeffs()[i];
      else a[k - r][j] = x.coeffs()[i] * rad;
    }
  return AlgebraicScalar(b, solve_unit(std::move(a)));
}

AlgebraicScalar field_arith(FieldOp op, const AlgebraicScalar& x, const AlgebraicScalar& y) {
  switch (op) {
    case FieldOp::Add: return x + y;
    case FieldOp::Sub: return x - y;
    case FieldOp::Mul: return x * y;
    case FieldOp::Div: return x / y;
  }
  throw std::logic_error("unknown field op");
}

AlgebraicScalar pow(const AlgebraicScalar& x, long e) {
  if (e < 0) return inverse(pow(x, -e));
  AlgebraicScalar result = AlgebraicScalar::embed(Rational(1), x.base());
  AlgebraicScalar b = x;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

std::optional<Rational> is_rational(const AlgebraicScalar& x) {
  const auto& c = x.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i)
    if (!c[i].is_zero()) return std::nullopt;
  return c[0];
}

bool is_integer(const AlgebraicScalar& x) {
  auto q = is_rational(x);
  return q && q->is_integer();
}

std::optional<RootBase> monomial_root_form(const AlgebraicScalar& x) {
  if (sign(x) <= 0) throw std::domain_error("root form needs a positive value");
  const auto& c = x.coeffs();
  int k = -1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    if (k >= 0) return std::nullopt;
    k = static_cast<int>(i);
  }
  const RootBase& b = x.base();
  Rational big = pow(c[k], static_cast<long>(b.r)) * pow(b.radicand(), k);
  return canonicalize_root(big.num(), big.den(), b.r);
}

std::optional<RootBase> root_rational_form(const AlgebraicScalar& x) {
  if (auto m = monomial_root_form(x)) return m;
  const unsigned r = x.base().r;
  for (unsigned n = 2; n <= r; ++n) {
    if (r % n != 0) continue;
    if (auto q = is_rational(pow(x, n))) return canonicalize_root(q->num(), q->den(), n);
  }
  return std::nullopt;
}

PValuation p_valuation(const Rational& q, long p) {
  if (q.is_zero()) throw std::domain_error("p-adic valuation of zero");
  long e = valuation(q.num(), p) - valuation(q.den(), p);
  return {p, e, q / pow(Rational(p), e)};
}

Interval approx(const AlgebraicScalar& x, unsigned digits) {
  if (auto q = is_rational(x)) return {*q, *q};
  Rational target(BigInt(1), pow(BigInt(10), digits));
  unsigned K = digits + 4;
  for (;;) {
    Interval iv = eval_interval(x, theta_bounds(x.base(), K));
    Rational w = iv.width();
    if (w <= target) return iv;
    double excess = std::log10(std::max(1.0, (w / target).to_double()));
    K += static_cast<unsigned>(excess) + 4;
  }
}

int sign(const AlgebraicScalar& x) {
  if (auto q = is_rational(x)) return q->sign();
  for (unsigned d = 10;; d *= 2) {
    Interval iv = approx(x, d);
    if (iv.lo.sign() > 0) return 1;
    if (iv.hi.sign() < 0) return -1;
  }
}

int compare(const AlgebraicScalar& x, const AlgebraicScalar& y) { return sign(x - y); }

double to_double(const AlgebraicScalar& x) {
  if (auto q = is_rational(x)) return q->to_double();
  for (unsigned d = 20;; d *= 2) {
    Interval iv = approx(x, d);
    if (iv.lo.sign() * iv.hi.sign() <= 0) continue;
    Rational small = iv.lo.sign() > 0 ? iv.lo : -iv.hi;
    if (iv.width() * Rational(BigInt("1000000000000000000")) <= small) return iv.mid().to_double();
  }
}

double log2_upper(const AlgebraicScalar& x) {
  const auto& c = x.coeffs();
  if (x.base().is_rational()) return log2_upper(c[0]);
  double lt = std::log2(theta_bounds(x.base(), 8).hi.to_double()) + 1e-9;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) best = std::max(best, log2_upper(c[i]) + static_cast<double>(i) * lt);
  return best + std::log2(static_cast<double>(c.size()));
}

double frac_double(const AlgebraicScalar& x) {
  if (auto q = is_rational(x)) return frac(*q).to_double();
  return frac(approx(x, 22).mid()).to_double();
}

std::string decimal_string(const Rational& q, unsigned digits) {
  BigInt scale = pow(BigInt(10), digits);
  Rational shifted = abs(q) * Rational(scale) + Rational(BigInt(1), BigInt(2));
  BigInt n = floor(shifted);
  std::string s = n.get_str();
  if (s.size() <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (q.sign() < 0 && n != 0) out = "-" + out;
  return out;
}

}  // namespace affspec
