#include "affspec/scalar_parser.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace affspec {

namespace {

struct Radical {
  Rational radicand;  // value = radicand^(1/m), radicand > 0
  unsigned m;
  std::size_t pos;
};

struct Term {
  Rational coeff;
  std::optional<Radical> radical;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip();
    return i_ >= s_.size();
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::size_t pos() {
    skip();
    return i_;
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos());
    ++i_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  BigInt integer() {
    skip();
    std::size_t start = i_;
    std::string digits;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) digits += s_[i_++];
    std::size_t d0 = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) digits += s_[i_++];
    if (i_ == d0) throw ParseError("expected integer", start);
    if (digits[0] == '+') digits.erase(0, 1);
    return BigInt(digits);
  }
  Rational rational() {
    std::size_t p = pos();
    BigInt n = integer();
    if (!accept('/')) return Rational(n);
    BigInt d = integer();
    if (d == 0) throw ParseError("zero denominator", p);
    return Rational(n, d);
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

Radical parse_radical(Lexer& lx) {
  std::size_t p = lx.pos();
  lx.expect('(');
  Rational q = lx.rational();
  lx.expect(')');
  lx.expect('^');
  lx.expect('(');
  BigInt n = lx.integer();
  lx.expect('/');
  BigInt m = lx.integer();
  lx.expect(')');
  if (m <= 0) throw ParseError("root index must be positive", p);
  if (q.sign() <= 0) throw ParseError("radicand must be positive", p);
  BigInt g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  if (n == 0) return {Rational(1), 1, p};
  n /= g;
  m /= g;
  if (n < 0) {
    q = Rational(1) / q;
    n = -n;
  }
  if (!n.fits_ulong_p() || !m.fits_uint_p() || m > 64) throw ParseError("exponent too large", p);
  return {pow(q, n.get_si()), static_cast<unsigned>(m.get_ui()), p};
}

Term parse_term(Lexer& lx) {
  if (lx.peek() == '(') return {Rational(1), parse_radical(lx)};
  Term t{lx.rational(), std::nullopt};
  if (lx.accept('*')) t.radical = parse_radical(lx);
  return t;
}

std::vector<Term> parse_terms(const std::string& text) {
  Lexer lx(text);
  std::vector<Term> terms;
  if (lx.at_end()) throw ParseError("empty expression", 0);
  terms.push_back(parse_term(lx));
  while (!lx.at_end()) {
    char c = lx.peek();
    if (c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", lx.pos());
    lx.accept(c);
    Term t = parse_term(lx);
    if (c == '-') t.coeff = -t.coeff;
    terms.push_back(std::move(t));
  }
  return terms;
}

// value as c * theta^k over base b, if possible.
std::optional<AlgebraicScalar> express(const Radical& rad, const RootBase& b) {
  unsigned g = std::gcd(b.r, rad.m);
  unsigned e = b.r / g, f = rad.m / g;
  // w = value^r
  auto w = exact_root(pow(rad.radicand, static_cast<long>(e)), f);
  if (!w) return std::nullopt;
  Rational rb = b.radicand();
  Rational pk = 1;
  for (unsigned k = 0; k < b.r; ++k) {
    if (auto c = exact_root(*w / pk, b.r)) {
      std::vector<Rational> coeffs(b.r, Rational(0));
      coeffs[k] = *c;
      return AlgebraicScalar(b, std::move(coeffs));
    }
    pk *= rb;
  }
  return std::nullopt;
}

}  // namespace

std::vector<AlgebraicScalar> parse_scalar_exprs(const std::vector<std::string>& texts,
                                                const std::optional<RootBase>& field) {
  std::vector<std::vector<Term>> parsed;
  for (const auto& t : texts) parsed.push_back(parse_terms(t));

  std::vector<RootBase> candidates;
  if (field) {
    candidates.push_back(*field);
  } else {
    for (const auto& terms : parsed)
      for (const auto& t : terms) {
        if (!t.radical) continue;
        RootBase cb = canonicalize_root(t.radical->radicand.num(), t.radical->radicand.den(), t.radical->m);
        if (!cb.is_rational() && std::find(candidates.begin(), candidates.end(), cb) == candidates.end())
          candidates.push_back(cb);
      }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const RootBase& a, const RootBase& b) { return a.r > b.r; });
    if (candidates.empty()) candidates.push_back(RootBase{});
  }

  for (const auto& base : candidates) {
    std::vector<AlgebraicScalar> out;
    bool ok = true;
    for (const auto& terms : parsed) {
      AlgebraicScalar sum = AlgebraicScalar::embed(Rational(0), base);
      for (const auto& t : terms) {
        if (!t.radical) {
          sum += AlgebraicScalar(t.coeff);
          continue;
        }
        auto v = express(*t.radical, base);
        if (!v) {
          ok = false;
          break;
        }
        sum += *v * AlgebraicScalar(t.coeff);
      }
      if (!ok) break;
      out.push_back(std::move(sum));
    }
    if (ok) return out;
  }
  throw std::invalid_argument(field ? "radical not expressible over field " + field->str()
                                    : std::string("incompatible radicals"));
}

AlgebraicScalar parse_scalar_expr(const std::string& text) { return parse_scalar_exprs({text}).front(); }

RootBase parse_root_base(const std::string& text) {
  Lexer lx(text);
  if (lx.peek() != '(') {
    Rational q = lx.rational();
    if (!lx.at_end()) throw ParseError("trailing input", lx.pos());
    if (q.sign() <= 0) throw ParseError("field radicand must be positive", 0);
    return RootBase{};
  }
  Radical r = parse_radical(lx);
  if (!lx.at_end()) throw ParseError("trailing input", lx.pos());
  RootBase b = canonicalize_root(r.radicand.num(), r.radicand.den(), r.m);
  if (!(b == RootBase{r.radicand.num(), r.radicand.den(), r.m}))
    throw std::invalid_argument("field base is not canonical: " + text);
  return b;
}

}  // namespace affspec
