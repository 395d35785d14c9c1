#include <doctest.h>

#include <algorithm>

#include "affspec/constructions.hpp"
#include "affspec/numerics.hpp"
#include "affspec/scalar_parser.hpp"
#include "support.hpp"

using namespace affspec;
using testing_support::fixture;
using testing_support::uniform;

namespace {

ExactVec2 vec(const Rational& x, const Rational& y) { return make_vec(AlgebraicScalar(x), AlgebraicScalar(y)); }

ExactMat2 mat(long a, long b, long c, long d) {
  ExactMat2 m;
  m << AlgebraicScalar(a), AlgebraicScalar(b), AlgebraicScalar(c), AlgebraicScalar(d);
  return m;
}

std::vector<ExactVec2> vecs(std::initializer_list<std::pair<Rational, Rational>> xs) {
  std::vector<ExactVec2> out;
  for (const auto& [x, y] : xs) out.push_back(vec(x, y));
  return out;
}

ZeroStructureReport zeros(const MeasureInstance& inst) { return analyze_zero_structure(inst.D); }

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == std::vector<long long>{-1, 1});
  CHECK(cyclotomic(3) == std::vector<long long>{1, 1, 1});
  CHECK(cyclotomic(6) == std::vector<long long>{1, -1, 1});
  CHECK(cyclotomic(12) == std::vector<long long>{1, 0, -1, 0, 1});
  CHECK(cyclotomic(8) == std::vector<long long>{1, 0, 0, 0, 1});
  // 105 is the first index with a coefficient outside {-1, 0, 1}
  auto c105 = cyclotomic(105);
  CHECK(c105.size() == 49);
  CHECK(std::find(c105.begin(), c105.end(), -2) != c105.end());
}

TEST_CASE("Hadamard triple checks") {
  auto D1 = vecs({{0, 0}, {8, 0}, {0, 1}});
  auto L1 = vecs({{0, 0}, {2, 34}, {4, 68}});
  auto ok = hadamard_check(mat(6, 6, 0, 6), D1, L1);
  CHECK(ok.unitary);
  CHECK(ok.pairs.size() == 3);
  for (const auto& pc : ok.pairs) CHECK(pc.vanishes);

  auto bad = hadamard_check(mat(6, 6, 0, 6), D1, vecs({{0, 0}, {2, 33}, {4, 68}}));
  CHECK_FALSE(bad.unitary);
  CHECK(bad.failing.has_value());

  CHECK(hadamard_check(mat(6, 6, 0, 6), vecs({{0, 0}}), vecs({{0, 0}})).unitary);

  auto num = hadamard_check(mat(6, 6, 0, 6), D1, L1, HadamardMode::Numeric);
  CHECK(num.unitary);
  CHECK(num.max_deviation < 1e-12);
  auto num_bad = hadamard_check(mat(6, 6, 0, 6), D1, vecs({{0, 0}, {2, 33}, {4, 68}}), HadamardMode::Numeric);
  CHECK_FALSE(num_bad.unitary);

  // composite denominator 4
  auto line = hadamard_check(mat(4, 0, 0, 4), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  CHECK(line.unitary);
  auto half = hadamard_check(mat(4, 0, 0, 4), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), vecs({{0, 0}, {2, 0}, {4, 0}, {6, 0}}));
  CHECK_FALSE(half.unitary);

  ExactMat2 irr;
  irr << parse_scalar_expr("(2/1)^(1/2)") * AlgebraicScalar(3), AlgebraicScalar(0), AlgebraicScalar(0),
      AlgebraicScalar(3);
  CHECK_THROWS(hadamard_check(irr, vecs({{0, 0}, {1, 0}, {0, 1}}), vecs({{0, 0}, {1, 0}, {0, 1}})));
}

TEST_CASE("Hadamard verdict is invariant under permuting B or L") {
  struct Case {
    ExactMat2 M;
    std::vector<ExactVec2> B, L;
  };
  std::vector<Case> cases{
      {mat(6, 6, 0, 6), vecs({{0, 0}, {8, 0}, {0, 1}}), vecs({{0, 0}, {2, 34}, {4, 68}})},
      {mat(6, 6, 0, 6), vecs({{0, 0}, {8, 0}, {0, 1}}), vecs({{0, 0}, {2, 33}, {4, 68}})},
      {mat(3, 0, 0, 3), vecs({{0, 0}, {1, 0}, {0, 1}}), vecs({{0, 0}, {1, 2}, {2, 4}})},
      {mat(4, 0, 0, 4), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}})},
      {mat(4, 0, 0, 4), vecs({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), vecs({{0, 0}, {2, 0}, {4, 0}, {6, 0}})},
  };
  for (int i = 0; i < 200; ++i) {
    Case c = cases[static_cast<std::size_t>(uniform(0, static_cast<long>(cases.size()) - 1))];
    bool base = hadamard_check(c.M, c.B, c.L).unitary;
    std::shuffle(c.B.begin(), c.B.end(), testing_support::rng());
    std::shuffle(c.L.begin(), c.L.end(), testing_support::rng());
    CHECK(hadamard_check(c.M, c.B, c.L).unitary == base);
  }
}

TEST_CASE("spectral Hadamard triples") {
  MeasureInstance e61 = fixture("ex61");
  SpectralTriple st = spectral_hadamard_triple(e61, zeros(e61));
  CHECK(st.triple.M == mat(6, 6, 0, 6));
  CHECK(st.triple.B == vecs({{0, 0}, {8, 0}, {0, 1}}));
  CHECK(st.triple.L == vecs({{0, 0}, {2, 34}, {4, 68}}));
  CHECK(st.P == mat(8, 0, 0, 1));
  CHECK(st.triple.verified);

  MeasureInstance flat = make_instance(make_expanding_matrix(3, 0, 3), make_digit_set({{0, 0}, {1, 0}, {0, 1}}));
  SpectralTriple ft = spectral_hadamard_triple(flat, zeros(flat));
  CHECK(ft.triple.L == vecs({{0, 0}, {1, 2}, {2, 4}}));
  CHECK(ft.triple.verified);

  MeasureInstance one = fixture("branch_i");
  SpectralTriple ot = spectral_hadamard_triple(one, zeros(one));
  CHECK(ot.triple.verified);

  MeasureInstance two = fixture("branch_ii");
  CHECK_THROWS(spectral_hadamard_triple(two, zeros(two)));
  MeasureInstance ns = fixture("not_spectral");
  CHECK_THROWS(spectral_hadamard_triple(ns, zeros(ns)));
}

TEST_CASE("p-element families") {
  MeasureInstance e61 = fixture("ex61");
  FrequencySet f = p_element_family(e61, IntVec2(1, 2), 1);
  CHECK(f.points == vecs({{0, 0}, {2, Rational(17, 4)}, {4, Rational(17, 2)}}));
  CHECK(verify_bizero(e61, IntVec2(1, 2), f).pass);
  CHECK_THROWS(p_element_family(e61, IntVec2(1, 2), 0));

  for (const char* name : {"ex61", "ex63_m1", "ex63_m2", "ex63_m3", "ex63_m4"}) {
    MeasureInstance inst = fixture(name);
    IntVec2 a = zeros(inst).a();
    for (unsigned k = 1; k <= 3; ++k) {
      FrequencySet g = p_element_family(inst, a, k);
      CHECK(g.size() == static_cast<std::size_t>(inst.D.p));
      CHECK(verify_bizero(inst, a, g).pass);
    }
  }
}

TEST_CASE("infinite orthogonal family") {
  MeasureInstance m1 = fixture("ex63_m1");
  auto z = zeros(m1);
  REQUIRE(z.a() == IntVec2(1, 4));
  FrequencySet f = infinite_orthogonal_family(m1, z, 2);
  BigInt p14 = pow(BigInt(5), 14u), p29 = pow(BigInt(5), 29u);
  CHECK(f.points == vecs({{0, 0}, {Rational(p14), Rational(BigInt(4 * p14))}, {Rational(p29), Rational(BigInt(4 * p29))}}));
  CHECK(verify_bizero(m1, z.a(), f).pass);
  CHECK(infinite_orthogonal_family(m1, z, 0).points == vecs({{0, 0}}));
  FrequencySet f8 = infinite_orthogonal_family(m1, z, 8);
  CHECK(f8.size() == 9);
  CHECK(verify_bizero(m1, z.a(), f8).pass);
  MeasureInstance m2 = fixture("ex63_m2");
  CHECK_THROWS(infinite_orthogonal_family(m2, zeros(m2), 2));
}

TEST_CASE("graded families") {
  MeasureInstance m2 = fixture("ex63_m2");
  auto z = zeros(m2);
  for (unsigned N : {1u, 2u, 3u, 7u}) {
    FrequencySet g = graded_family(m2, z, N);
    CHECK(g.size() == N);
    CHECK(verify_bizero(m2, z.a(), g).pass);
  }
  FrequencySet g3 = graded_family(m2, z, 3);
  GridStats s = grid_scan(m2, g3, Window{}, 8, 1e-10, z.a());
  CHECK(s.max <= 1 + 1e-9);
  MeasureInstance m4 = fixture("ex63_m4");
  CHECK_THROWS(graded_family(m4, zeros(m4), 2));
}

TEST_CASE("spectrum truncations") {
  MeasureInstance e61 = fixture("ex61");
  auto z = zeros(e61);
  // pulled back through P* = diag(8,1) from L1 = {0, (2,34), (4,68)}
  FrequencySet t1 = spectrum_truncation(e61, z, 1);
  CHECK(t1.points == vecs({{0, 0}, {16, 34}, {32, 68}}));
  CHECK(verify_bizero(e61, z.a(), t1).pass);
  // the diag(1/8, 1) pullback is not even orthogonal
  FrequencySet wrong;
  wrong.points = vecs({{0, 0}, {Rational(1, 4), 34}});
  CHECK_FALSE(verify_bizero(e61, z.a(), wrong, 12).pass);

  CHECK(spectrum_truncation(e61, z, 0).points == vecs({{0, 0}}));
  FrequencySet prev = spectrum_truncation(e61, z, 0);
  for (unsigned n = 1; n <= 4; ++n) {
    FrequencySet cur = spectrum_truncation(e61, z, n);
    CHECK(cur.size() == static_cast<std::size_t>(std::pow(3, n)));
    CHECK(std::equal(prev.points.begin(), prev.points.end(), cur.points.begin()));
    CHECK(verify_bizero(e61, z.a(), cur).pass);
    prev = cur;
  }

  MeasureInstance one = fixture("branch_i");
  auto zo = zeros(one);
  FrequencySet b2 = spectrum_truncation(one, zo, 2);
  CHECK(b2.size() == 9);
  CHECK(verify_bizero(one, zo.a(), b2).pass);
  GridStats s = grid_scan(one, b2, Window{}, 8, 1e-10, zo.a());
  CHECK(s.max <= 1 + 1e-9);

  MeasureInstance ns = fixture("not_spectral");
  CHECK_THROWS(spectrum_truncation(ns, zeros(ns), 1));
}

TEST_CASE("Q minima over nested truncations rise") {
  MeasureInstance e61 = fixture("ex61");
  auto z = zeros(e61);
  double prev = 0;
  for (unsigned n = 1; n <= 3; ++n) {
    GridStats s = grid_scan(e61, spectrum_truncation(e61, z, n), Window{}, 8, 1e-10, z.a());
    CHECK(s.min >= prev - s.error);
    CHECK(s.max <= 1 + 1e-9);
    prev = s.min;
  }
}

TEST_CASE("bi-zero verification") {
  MeasureInstance e61 = fixture("ex61");
  FrequencySet two;
  two.points = vecs({{0, 0}, {1, 0}});
  auto r = verify_bizero(e61, IntVec2(1, 2), two, 6);
  CHECK_FALSE(r.pass);
  REQUIRE(r.failing);
  CHECK(r.failing->first == 0);
  CHECK(r.failing->second == 1);
  FrequencySet single;
  single.points = vecs({{0, 0}});
  auto s = verify_bizero(e61, IntVec2(1, 2), single);
  CHECK(s.pass);
  CHECK(s.pairs_checked == 0);
}
