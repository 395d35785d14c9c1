#include <doctest.h>

#include "affspec/measure_model.hpp"
#include "affspec/scalar_parser.hpp"
#include "support.hpp"

using namespace affspec;
using testing_support::fixture;
using testing_support::random_rational;
using testing_support::uniform;

namespace {

ExactVec2 vec(const Rational& x, const Rational& y) { return make_vec(AlgebraicScalar(x), AlgebraicScalar(y)); }

ExpandingMatrix random_matrix() {
  if (uniform(0, 2) == 0) {
    RootBase b = canonicalize_root(uniform(2, 12), 1, 2);
    AlgebraicScalar th = AlgebraicScalar::theta(b);
    AlgebraicScalar r1 = th * AlgebraicScalar(Rational(uniform(1, 3)));
    AlgebraicScalar r2 = uniform(0, 1) ? r1 : r1 + AlgebraicScalar(uniform(1, 3));
    return make_expanding_matrix(r1, th * AlgebraicScalar(random_rational(5, 4)), r2);
  }
  return make_expanding_matrix(Rational(uniform(2, 9)) + Rational(1, uniform(1, 4)), random_rational(8, 5),
                               Rational(uniform(2, 9)));
}

}  // namespace

TEST_CASE("expanding matrix and digit validation") {
  CHECK_THROWS_AS(make_expanding_matrix(Rational(1, 2), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_expanding_matrix(1, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_digit_set({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(make_digit_set({{0, 0}, {1, 0}, {1, 0}}), std::invalid_argument);
  auto M = make_expanding_matrix(parse_scalar_expr("(5/1)^(1/2)"), 1, 3);
  CHECK(M.c.base() == M.rho1_inv.base());
  CHECK(M.rho2_inv == AlgebraicScalar::embed(3, M.field()));
}

TEST_CASE("inverse powers match powers of the exact inverse") {
  for (int i = 0; i < 200; ++i) {
    ExpandingMatrix M = random_matrix();
    ExactMat2 inv = exact_inverse(M.matrix());
    unsigned k = static_cast<unsigned>(uniform(1, 7));
    CHECK(inverse_power(M, k) == matrix_power(inv, k));
  }
}

TEST_CASE("inverse power shear: closed form and growth bound") {
  for (int i = 0; i < 200; ++i) {
    ExpandingMatrix M = random_matrix();
    unsigned k = static_cast<unsigned>(uniform(1, 9));
    AlgebraicScalar th = inverse_power(M, k)(0, 1);
    AlgebraicScalar r1 = inverse(M.rho1_inv), r2 = inverse(M.rho2_inv);
    if (!(M.rho1_inv == M.rho2_inv)) {
      AlgebraicScalar cpp = M.c / (M.rho1_inv - M.rho2_inv);
      CHECK(th == cpp * (pow(r1, k) - pow(r2, k)));
    } else {
      CHECK(th == -AlgebraicScalar(static_cast<long>(k)) * M.c * pow(r1, k + 1));
    }
    double rmax = std::max(to_double(r1), to_double(r2));
    CHECK(std::abs(to_double(th)) <= std::abs(to_double(M.c)) * k * std::pow(rmax, k + 1) * (1 + 1e-12));
  }
}

TEST_CASE("conjugation by diag(8,1)") {
  MeasureInstance inst = fixture("ex61");
  IntMat2 P;
  P << 8, 0, 0, 1;
  Conjugated cj = conjugate(inst.M.matrix(), to_exact(inst.D), to_exact(P));
  ExactMat2 M1;
  M1 << AlgebraicScalar(6), AlgebraicScalar(6), AlgebraicScalar(0), AlgebraicScalar(6);
  CHECK(cj.M == M1);
  REQUIRE(cj.D.size() == 3);
  CHECK(cj.D[0] == vec(0, 0));
  CHECK(cj.D[1] == vec(8, 0));
  CHECK(cj.D[2] == vec(0, 1));
  auto c = conjugate_instance(inst, P);
  REQUIRE(c);
  CHECK(c->M.c == AlgebraicScalar(6));
  IntMat2 lower;
  lower << 1, 0, 1, 1;
  CHECK_FALSE(conjugate_instance(inst, lower).has_value());
}

TEST_CASE("digit normalization") {
  DigitSet D2 = make_digit_set({{0, 0}, {1, 0}, {0, 1}});
  auto n = normalize_digits(D2);
  REQUIRE(n);
  CHECK(n->identity);
  CHECK(n->digits.digits == D2.digits);

  DigitSet shifted = make_digit_set({{2, 3}, {2, 4}, {5, 3}});
  auto m = normalize_digits(shifted);
  REQUIRE(m);
  CHECK_FALSE(m->identity);
  CHECK(is_normalized(m->digits));
  for (std::size_t i = 0; i < 3; ++i) CHECK(m->digits.digits[i] == shifted.digits[m->permutation[i]] + m->translation);

  CHECK_FALSE(normalize_digits(make_digit_set({{0, 0}, {0, 1}, {1, 4}})).has_value());
}

TEST_CASE("derived shear parameters") {
  auto dq = derive(fixture("branch_ii"));
  CHECK(*dq.c_double_prime == AlgebraicScalar(1));
  CHECK(dq.d11 == 1);
  auto ns = derive(fixture("not_spectral"));
  CHECK(*ns.c_double_prime == AlgebraicScalar(Rational(1, 3)));
  MeasureInstance wide = make_instance(make_expanding_matrix(3, -3, 6), make_digit_set({{0, 0}, {2, 0}, {0, 1}}));
  auto w = derive(wide);
  CHECK(*w.c_prime == AlgebraicScalar(Rational(1, 2)));
  CHECK(*w.c_double_prime == AlgebraicScalar(1));
  MeasureInstance loose = make_instance(make_expanding_matrix(3, 1, 6), make_digit_set({{0, 0}, {0, 1}, {1, 4}}));
  CHECK_THROWS_AS(derive(loose), std::invalid_argument);
}

TEST_CASE("zero lattice membership examples") {
  MeasureInstance inst = fixture("ex61");
  IntVec2 a(1, 2);
  auto hit = zero_lattice_member(vec(2, Rational(17, 4)), inst, a, 6);
  REQUIRE(hit);
  CHECK(hit->k == 1);
  CHECK(hit->j == 1);
  CHECK(hit->z(0) == 0);
  CHECK(hit->z(1) == 0);
  CHECK_FALSE(zero_lattice_member(vec(1, 0), inst, a, 6).has_value());
  CHECK_FALSE(zero_lattice_member(vec(0, 0), inst, a, 6).has_value());
}

TEST_CASE("zero lattice membership recovers forward images") {
  MeasureInstance inst = fixture("ex61");
  const IntVec2 a(1, 2);
  ExactMat2 Mt = inst.M.matrix().transpose();
  for (int i = 0; i < 300; ++i) {
    unsigned k = static_cast<unsigned>(uniform(1, 5));
    long j = uniform(1, 2), z1 = uniform(-4, 4), z2 = uniform(-4, 4);
    ExactVec2 base = vec(Rational(j * a(0), 3) + z1, Rational(j * a(1), 3) + z2);
    ExactVec2 xi = matrix_power(Mt, k) * base;
    auto hit = zero_lattice_member(xi, inst, a, 12);
    REQUIRE(hit);
    CHECK(hit->k <= k);
    // witness replays exactly
    ExactMat2 back = matrix_power(exact_inverse(Mt), hit->k);
    ExactVec2 pre = back * xi;
    CHECK(pre == vec(Rational(hit->j * a(0), 3) + Rational(hit->z(0)), Rational(hit->j * a(1), 3) + Rational(hit->z(1))));
    // an integer shift off the lattice is rejected
    ExactVec2 off = matrix_power(Mt, k) * vec(Rational(1, 2) + z1, Rational(j * a(1), 3) + z2);
    CHECK_FALSE(zero_lattice_member(off, inst, a, 12).has_value());
  }
}

TEST_CASE("frequency sets deduplicate") {
  FrequencySet fs;
  CHECK(fs.insert(vec(1, 2)));
  CHECK_FALSE(fs.insert(vec(1, 2)));
  CHECK(fs.insert(vec(Rational(1, 2), 2)));
  CHECK(fs.size() == 2);
  CHECK(fs.contains(vec(Rational(1, 2), 2)));
  CHECK(key(vec(1, 2)) == key(vec(Rational(2, 2), 2)));
}
