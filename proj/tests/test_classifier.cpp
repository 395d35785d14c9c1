#include <doctest.h>

#include "affspec/classifier.hpp"
#include "affspec/scalar_parser.hpp"
#include "support.hpp"

using namespace affspec;
using testing_support::fixture;
using testing_support::uniform;

namespace {

struct Verdicts {
  SpectralVerdict s;
  OrthoVerdict o;
  ZeroStructureReport z;
};

Verdicts classify(const MeasureInstance& inst) {
  Verdicts v;
  v.z = analyze_zero_structure(inst.D);
  v.s = classify_spectrality(inst, v.z);
  v.o = classify_orthogonality(inst, v.z);
  return v;
}

bool holds(const SpectralVerdict& v, const std::string& cond) {
  for (const auto& e : v.evidence)
    if (e.condition == cond) return e.holds;
  FAIL("no evidence named " << cond);
  return false;
}

}  // namespace

TEST_CASE("equal ratios") {
  auto v = classify(fixture("ex61"));
  CHECK(v.s.outcome == SpectralOutcome::Spectral);
  CHECK(v.s.branch == Branch::III);
  CHECK(v.s.rule == "equal-ratios");
  CHECK(holds(v.s, "rho^-1 in 3Z"));
  CHECK(holds(v.s, "c = 0 or c = t/s with t in 3Z"));
  CHECK_FALSE(v.s.conditional);

  MeasureInstance shear_bad =
      make_instance(make_expanding_matrix(6, Rational(1, 4), 6), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  auto w = classify(shear_bad);
  CHECK(w.s.outcome == SpectralOutcome::NotSpectral);

  MeasureInstance ratio_bad = make_instance(make_expanding_matrix(4, 3, 4), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(classify(ratio_bad).s.outcome == SpectralOutcome::NotSpectral);

  MeasureInstance zero_shear = make_instance(make_expanding_matrix(3, 0, 3), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(classify(zero_shear).s.branch == Branch::III);
}

TEST_CASE("distinct ratios") {
  auto two = classify(fixture("branch_ii"));
  CHECK(two.s.outcome == SpectralOutcome::Spectral);
  CHECK(two.s.branch == Branch::II);
  CHECK(two.s.rule == "shear-in-Ea");

  auto ns = classify(fixture("not_spectral"));
  CHECK(ns.s.outcome == SpectralOutcome::NotSpectral);
  CHECK(ns.s.rule == "shear-in-Ea");
  CHECK_FALSE(holds(ns.s, "9 | (rho1^-1 - rho2^-1)"));

  auto one = classify(fixture("branch_i"));
  CHECK(one.s.outcome == SpectralOutcome::Spectral);
  CHECK(one.s.branch == Branch::I);
  CHECK(one.s.rule == "shear-outside-Ea");

  // c'' = 2 outside E_a but rho1^-1 = 4 not in 3Z
  MeasureInstance off = make_instance(make_expanding_matrix(4, 4, 2), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  auto o = classify(off);
  CHECK(o.s.outcome == SpectralOutcome::NotSpectral);
  CHECK(o.s.rule == "shear-outside-Ea");

  auto irr = classify(fixture("irrational_shear"));
  CHECK(irr.s.outcome == SpectralOutcome::NotSpectral);
  CHECK(irr.s.rule == "irrational-shear");

  // diagonal: c'' = 0 lies in E_a; [[3,0],[0,2]] fails 3 | rho2^-1
  MeasureInstance diag = make_instance(make_expanding_matrix(3, 0, 2), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  auto d = classify(diag);
  CHECK(d.s.outcome == SpectralOutcome::NotSpectral);
  CHECK(d.s.rule == "shear-in-Ea");
}

TEST_CASE("unsupported inputs") {
  auto un = classify(fixture("unnormalizable"));
  CHECK(un.s.outcome == SpectralOutcome::Unsupported);
  MeasureInstance line = make_instance(make_expanding_matrix(3, 0, 3), make_digit_set({{0, 0}, {1, 0}, {2, 0}}));
  auto l = classify(line);
  CHECK(l.s.outcome == SpectralOutcome::Unsupported);
  CHECK(l.o.outcome == OrthoOutcome::Unsupported);
  CHECK(classify(fixture("branch_ii")).o.outcome == OrthoOutcome::Unsupported);
}

TEST_CASE("orthogonal exponential counts") {
  auto m1 = classify(fixture("ex63_m1"));
  CHECK(m1.o.outcome == OrthoOutcome::InfiniteOrthogonalSet);
  CHECK(*m1.o.kappa == AlgebraicScalar(Rational(1, 3)));
  CHECK(m1.o.conditional);

  auto m2 = classify(fixture("ex63_m2"));
  CHECK(m2.o.outcome == OrthoOutcome::ArbitraryFiniteNumbers);
  CHECK(*m2.o.kappa == AlgebraicScalar(Rational(1, 15)));
  CHECK(*m2.o.root == canonicalize_root(9, 5, 2));

  auto m3 = classify(fixture("ex63_m3"));
  CHECK(m3.o.outcome == OrthoOutcome::AtMostP);
  CHECK(m3.o.bound == 5);
  CHECK_FALSE(is_rational(*m3.o.kappa).has_value());

  auto m4 = classify(fixture("ex63_m4"));
  CHECK(m4.o.outcome == OrthoOutcome::AtMostP);
  CHECK(m4.o.bound == 5);
  CHECK(*m4.o.kappa == AlgebraicScalar(1));

  auto e61 = classify(fixture("ex61"));
  CHECK(e61.o.outcome == OrthoOutcome::InfiniteOrthogonalSet);
  CHECK(*e61.o.kappa == AlgebraicScalar(Rational(1, 8)));

  // rho^-1 = 2 + sqrt 5 is not root-rational
  AlgebraicScalar r = parse_scalar_expr("2 + (5/1)^(1/2)");
  MeasureInstance nr = make_instance(make_expanding_matrix(r, 1, r), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  auto n = classify(nr);
  CHECK(n.o.outcome == OrthoOutcome::NoInfiniteBoundUnknown);
  CHECK_FALSE(n.o.root.has_value());
}

TEST_CASE("E_a helper predicate") {
  CHECK(in_pZ(AlgebraicScalar(6), 3));
  CHECK_FALSE(in_pZ(AlgebraicScalar(Rational(3, 2)), 3));
  CHECK_FALSE(in_pZ(parse_scalar_expr("3*(2/1)^(1/2)"), 3));
}

TEST_CASE("verdicts are invariant under unimodular upper-triangular conjugation") {
  int compared = 0, attempts = 0;
  while (compared < 100) {
    REQUIRE(++attempts < 5000);
    long m = uniform(0, 1) ? 1 : -1, y = uniform(0, 1) ? 1 : -1, x = uniform(-3, 3);
    DigitSet D = make_digit_set({{0, 0}, {m, 0}, {x, y}});
    long r1 = uniform(2, 9), r2 = uniform(0, 3) == 0 ? r1 : uniform(2, 9);
    if (r1 == r2 && uniform(0, 1)) r2 = r1;
    const long dens[] = {1, 2, 3, 9};
    Rational cpp(BigInt(uniform(-6, 6)), BigInt(dens[uniform(0, 3)]));
    Rational c = r1 == r2 ? Rational(BigInt(3 * uniform(-3, 3)), BigInt(dens[uniform(0, 3)])) : cpp * Rational(r1 - r2);
    MeasureInstance inst = make_instance(make_expanding_matrix(r1, c, r2), D);
    IntMat2 R;
    switch (uniform(0, 2)) {
      case 0: R << 1, uniform(-3, 3), 0, 1; break;
      case 1: R << (uniform(0, 1) ? 1 : -1), 0, 0, (uniform(0, 1) ? 1 : -1); break;
      default: R << -1, uniform(-3, 3), 0, 1; break;
    }
    auto conj = conjugate_instance(inst, R);
    REQUIRE(conj);
    auto a = classify(inst), b = classify(*conj);
    if (!a.z.usable() || !b.z.usable()) continue;
    CHECK(a.s.outcome == b.s.outcome);
    CHECK(a.s.branch == b.s.branch);
    CHECK(a.o.outcome == b.o.outcome);
    ++compared;
  }
}
