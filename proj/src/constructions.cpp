#include "affspec/constructions.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace affspec {

namespace {

using Poly = std::vector<long long>;

int moebius(long n) {
  int sgn = 1;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    sgn = -sgn;
  }
  if (n > 1) sgn = -sgn;
  return sgn;
}

Poly mul_xd_minus_1(const Poly& p, long d) {
  Poly r(p.size() + d, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + d] += p[i];
    r[i] -= p[i];
  }
  return r;
}

Poly div_xd_minus_1(const Poly& p, long d) {
  // p = q (x^d - 1)  =>  p[i] = q[i-d] - q[i]
  Poly q(p.size() - d, 0);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = (i >= static_cast<std::size_t>(d) ? q[i - d] : 0) - p[i];
  return q;
}

AlgebraicScalar dot(const ExactVec2& u, const ExactVec2& v) { return u(0) * v(0) + u(1) * v(1); }

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

ExactVec2 scaled(const Rational& q, const IntVec2& a) {
  return make_vec(AlgebraicScalar(q * Rational(a(0))), AlgebraicScalar(q * Rational(a(1))));
}

Rational rational_or_throw(const AlgebraicScalar& x, const std::string& what) {
  auto q = is_rational(x);
  if (!q) throw std::invalid_argument(what + " is not rational");
  return *q;
}

}  // namespace

std::vector<long long> cyclotomic(long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
  Poly p{1};
  std::vector<long> down;
  for (long d = 1; d <= n; ++d) {
    if (n % d) continue;
    int m = moebius(n / d);
    if (m == 1) p = mul_xd_minus_1(p, d);
    else if (m == -1) down.push_back(d);
  }
  for (long d : down) p = div_xd_minus_1(p, d);
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

HadamardCertificate hadamard_check(const ExactMat2& M, const std::vector<ExactVec2>& B,
                                   const std::vector<ExactVec2>& L, HadamardMode mode, double tol) {
  if (B.size() != L.size() || B.empty()) throw std::invalid_argument("Hadamard check needs #B = #L > 0");
  const std::size_t N = B.size();
  ExactMat2 Minv = exact_inverse(M);
  HadamardCertificate cert;
  cert.mode = mode;

  if (mode == HadamardMode::Numeric) {
    Eigen::MatrixXcd H(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      ExactVec2 w = Minv * B[i];
      for (std::size_t l = 0; l < N; ++l) {
        double ang = 2.0 * std::numbers::pi * frac_double(dot(w, L[l]));
        H(i, l) = std::polar(1.0 / std::sqrt(static_cast<double>(N)), ang);
      }
    }
    Eigen::MatrixXcd E = H * H.adjoint() - Eigen::MatrixXcd::Identity(N, N);
    cert.max_deviation = E.cwiseAbs().maxCoeff();
    cert.unitary = cert.max_deviation <= tol;
    if (!cert.unitary) {
      Eigen::Index r, c;
      E.cwiseAbs().maxCoeff(&r, &c);
      cert.failing = std::make_pair(static_cast<std::size_t>(std::min(r, c)), static_cast<std::size_t>(std::max(r, c)));
    }
    return cert;
  }

  cert.unitary = true;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      ExactVec2 w = Minv * (B[i] - B[j]);
      std::vector<Rational> ex;
      long long n = 1;
      for (const auto& l : L) {
        auto q = is_rational(dot(w, l));
        if (!q) throw std::invalid_argument("irrational exponent in exact Hadamard check; use numeric mode");
        ex.push_back(frac(*q));
        if (!ex.back().den().fits_slong_p()) throw std::runtime_error("exponent denominator too large");
        n = lcm_ll(n, ex.back().den().get_si());
        if (n > 20000) throw std::runtime_error("exponent denominator too large for exact mode; use numeric mode");
      }
      Poly c(n, 0);
      for (const auto& e : ex) c[(e * Rational(n)).num().get_si()] += 1;
      Poly phi = cyclotomic(n);
      const std::size_t deg = phi.size() - 1;
      for (std::size_t k = c.size(); k-- > deg;) {
        long long coef = c[k];
        if (coef == 0) continue;
        for (std::size_t m = 0; m <= deg; ++m) c[k - deg + m] -= coef * phi[m];
      }
      bool vanishes = std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
      cert.pairs.push_back({i, j, static_cast<long>(n), vanishes});
      if (!vanishes && cert.unitary) {
        cert.unitary = false;
        cert.failing = std::make_pair(i, j);
      }
    }
  return cert;
}

ExactMat2 transpose_power(const ExpandingMatrix& M, unsigned long k) {
  ExactMat2 mt = M.matrix().transpose();
  return matrix_power(mt, k);
}

SpectralTriple spectral_hadamard_triple(const MeasureInstance& inst, const ZeroStructureReport& report) {
  SpectralVerdict v = classify_spectrality(inst, report);
  if (v.outcome != SpectralOutcome::Spectral)
    throw std::invalid_argument(std::string("no Hadamard triple: verdict is ") + to_string(v.outcome));
  const long p = inst.D.p;
  const IntVec2& a = report.a();
  SpectralTriple st;

  if (v.branch == Branch::III) {
    Rational t = rational_or_throw(inst.M.rho1_inv, "rho^-1");
    Rational c = rational_or_throw(inst.M.c, "c");
    Rational ap = c / t;
    BigInt vnum = ap.num(), u = ap.den(), uprime;
    long l1 = valuation(u, p, &uprime);
    BigInt pl = pow(BigInt(p), static_cast<unsigned long>(l1));
    st.P << AlgebraicScalar(Rational(uprime)), AlgebraicScalar(0), AlgebraicScalar(0), AlgebraicScalar(1);
    Conjugated cj = conjugate(inst.M.matrix(), to_exact(inst.D), st.P);
    st.triple.M = cj.M;
    st.triple.B = cj.D;
    Rational g1 = t * Rational(a(0)) / Rational(p);
    Rational g2 = (Rational(vnum) * t * Rational(a(0)) + Rational(BigInt(pl * uprime)) * t * Rational(a(1))) /
                  Rational(BigInt(pl * p));
    for (long j = 0; j < p; ++j)
      st.triple.L.push_back(make_vec(AlgebraicScalar(g1 * Rational(j)), AlgebraicScalar(g2 * Rational(j))));
    st.description = "a' = c/t = " + ap.str() + ", u = " + u.get_str() + " = " + std::to_string(p) + "^" +
                     std::to_string(l1) + " * " + uprime.get_str() + ", P = diag(" + uprime.get_str() + ", 1)";
  } else if (v.branch == Branch::I) {
    Rational t = rational_or_throw(inst.M.rho1_inv, "rho1^-1");
    Rational cpp = *is_rational(*derive(inst).c_double_prime);
    BigInt c1 = cpp.num(), c2 = cpp.den();
    st.P << AlgebraicScalar(1), AlgebraicScalar(cpp), AlgebraicScalar(0), AlgebraicScalar(1);
    st.triple.M << AlgebraicScalar(t), AlgebraicScalar(0), AlgebraicScalar(0), AlgebraicScalar(t);
    for (const auto& d : inst.D.digits)
      st.triple.B.push_back(make_vec(AlgebraicScalar(Rational(BigInt(c2 * d(0) + c1 * d(1)))), AlgebraicScalar(0)));
    for (long j = 0; j < p; ++j)
      st.triple.L.push_back(make_vec(AlgebraicScalar(t * Rational(j) / Rational(p)), AlgebraicScalar(0)));
    st.description = "first-coordinate factor after diagonalizing by P = [[1, c''], [0, 1]]: digits c2 d1 + c1 d2 "
                     "with (c1, c2) = (" + c1.get_str() + ", " + c2.get_str() + "), lifted to the plane";
  } else {
    throw std::invalid_argument("no explicit Hadamard triple for branch ii");
  }
  st.triple.verified = hadamard_check(st.triple.M, st.triple.B, st.triple.L).unitary;
  return st;
}

FrequencySet infinite_orthogonal_family(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned N) {
  OrthoVerdict v = classify_orthogonality(inst, report);
  if (v.outcome != OrthoOutcome::InfiniteOrthogonalSet)
    throw std::invalid_argument(std::string("infinite family needs InfiniteOrthogonalSet, verdict is ") +
                                to_string(v.outcome));
  const long p = inst.D.p;
  Rational kappa = *is_rational(*v.kappa);
  BigInt u = kappa.den();
  const RootBase& rb = *v.root;
  FrequencySet fs;
  fs.provenance = "infinite_orthogonal_family(N=" + std::to_string(N) + ")";
  fs.points.push_back(make_vec(AlgebraicScalar(0), AlgebraicScalar(0)));
  unsigned long pu = static_cast<unsigned long>(p) * u.get_ui();
  for (unsigned l = 1; l <= N; ++l) {
    Rational coef(pow(rb.t, pu * l), BigInt(p));
    fs.points.push_back(scaled(coef, report.a()));
  }
  fs.depth = static_cast<unsigned>(rb.r * pu * N);
  return fs;
}

FrequencySet p_element_family(const MeasureInstance& inst, const IntVec2& a, unsigned k) {
  if (k < 1) throw std::invalid_argument("p-element family needs k >= 1");
  const long p = inst.D.p;
  ExactMat2 Mk = transpose_power(inst.M, k);
  FrequencySet fs;
  fs.provenance = "p_element_family(k=" + std::to_string(k) + ")";
  for (long j = 0; j < p; ++j) fs.points.push_back(Mk * scaled(Rational(j) / Rational(p), a));
  fs.depth = k;
  return fs;
}

FrequencySet graded_family(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned N) {
  OrthoVerdict v = classify_orthogonality(inst, report);
  if (v.outcome != OrthoOutcome::ArbitraryFiniteNumbers)
    throw std::invalid_argument(std::string("graded family needs ArbitraryFiniteNumbers, verdict is ") +
                                to_string(v.outcome));
  const long p = inst.D.p;
  const RootBase& rb = *v.root;
  BigInt u = is_rational(*v.kappa)->den();
  BigInt s1;
  valuation(rb.s, p, &s1);
  const unsigned long pu = static_cast<unsigned long>(p) * u.get_ui();
  FrequencySet fs;
  fs.provenance = "graded_family(N=" + std::to_string(N) + ")";
  for (unsigned n = 1; n <= N; ++n) {
    Rational coef(BigInt(pow(rb.t, pu * (N - n)) * pow(s1, pu * (n - 1))), BigInt(p));
    ExactMat2 Mk = transpose_power(inst.M, pu * rb.r * n);
    fs.points.push_back(Mk * scaled(coef, report.a()));
  }
  fs.depth = static_cast<unsigned>(pu * rb.r * N);
  return fs;
}

FrequencySet spectrum_truncation(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned n) {
  SpectralVerdict v = classify_spectrality(inst, report);
  if (v.outcome != SpectralOutcome::Spectral)
    throw std::invalid_argument(std::string("spectrum truncation needs a spectral verdict, got ") + to_string(v.outcome));
  const long p = inst.D.p;
  const IntVec2& a = report.a();
  FrequencySet fs;
  fs.depth = n;
  std::vector<ExactVec2> pts{make_vec(AlgebraicScalar(0), AlgebraicScalar(0))};

  // level m adds step(m, j), j = 0..p-1; the j = 0 block repeats the previous level
  auto grow = [&](auto step) {
    for (unsigned m = 0; m < n; ++m) {
      std::vector<ExactVec2> next;
      for (long j = 0; j < p; ++j) {
        ExactVec2 s = step(m, j);
        for (const auto& x : pts) next.push_back(x + s);
      }
      pts = std::move(next);
    }
  };

  if (v.branch == Branch::III) {
    SpectralTriple st = spectral_hadamard_triple(inst, report);
    ExactMat2 M1t = st.triple.M.transpose();
    ExactMat2 Pt = st.P.transpose();
    std::vector<ExactMat2> powers{matrix_power(M1t, 0)};
    grow([&](unsigned m, long j) {
      while (powers.size() <= m) powers.push_back((powers.back() * M1t).eval());
      return ExactVec2(powers[m] * st.triple.L[j]);
    });
    for (auto& x : pts) x = Pt * x;
    fs.provenance = "spectrum_truncation(n=" + std::to_string(n) + ", branch iii)";
  } else if (v.branch == Branch::I) {
    Rational t = *is_rational(inst.M.rho1_inv);
    Rational cpp = *is_rational(*derive(inst).c_double_prime);
    ExactVec2 dir = make_vec(AlgebraicScalar(Rational(cpp.den())), AlgebraicScalar(Rational(cpp.num())));
    grow([&](unsigned m, long j) {
      Rational lam = pow(t, m) * t * Rational(j) / Rational(p);
      return ExactVec2(dir * AlgebraicScalar(lam));
    });
    fs.provenance = "spectrum_truncation(n=" + std::to_string(n) + ", branch i)";
  } else {
    // branch ii: translates from the diagonal frame, pulled back by [[1,0],[c'',1]]; experimental
    Rational t1 = *is_rational(inst.M.rho1_inv), t2 = *is_rational(inst.M.rho2_inv);
    Rational cpp = *is_rational(*derive(inst).c_double_prime);
    BigInt c1 = cpp.num(), c2 = cpp.den(), c2p;
    long u = valuation(c2, p, &c2p);
    Rational fx = Rational(BigInt(a(0) * c2p), BigInt(p));
    Rational fy = -Rational(BigInt(a(0) * c1 - a(1) * c2), pow(BigInt(p), static_cast<unsigned long>(u + 1)));
    grow([&](unsigned m, long j) {
      Rational x = fx * pow(t1, m + 1) * Rational(j);
      Rational y = fy * pow(t2, m + 1) * Rational(j);
      return make_vec(AlgebraicScalar(x), AlgebraicScalar(cpp * x + y));
    });
    fs.provenance = "spectrum_truncation(n=" + std::to_string(n) + ", branch ii, experimental)";
  }
  fs.points = std::move(pts);
  return fs;
}

BizeroReport verify_bizero(const MeasureInstance& inst, const IntVec2& a, const FrequencySet& lambda,
                           std::optional<unsigned> kmax) {
  BizeroReport rep;
  rep.kmax = kmax.value_or(lambda.depth + 2);
  const auto& pts = lambda.points;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      ++rep.pairs_checked;
      ExactVec2 d = pts[j] - pts[i];
      if (is_zero(d)) {
        rep.pass = false;
        rep.failing = std::make_pair(i, j);
        rep.reason = "repeated point";
        return rep;
      }
      if (!zero_lattice_member(d, inst, a, rep.kmax)) {
        rep.pass = false;
        rep.failing = std::make_pair(i, j);
        rep.reason = "difference " + to_string(d) + " not in the zero set within depth " + std::to_string(rep.kmax);
        return rep;
      }
    }
  return rep;
}

}  // namespace affspec
