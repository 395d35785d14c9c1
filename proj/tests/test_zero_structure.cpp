#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "affspec/numerics.hpp"
#include "affspec/zero_structure.hpp"
#include "support.hpp"

using namespace affspec;
using testing_support::uniform;

namespace {

DigitSet D2() { return make_digit_set({{0, 0}, {1, 0}, {0, 1}}); }
DigitSet D62() { return make_digit_set({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}); }

// D with 0, two unimodular columns and residues <a,d> a permutation of 0..p-1
DigitSet random_conforming(long p, const IntVec2& a) {
  while (true) {
    long x = uniform(-3, 3), y = uniform(-3, 3), k = uniform(-3, 3);
    IntVec2 u(x, y);
    // second column completes a unimodular basis: (x, y) with gcd 1 and a Bezout partner
    if (std::gcd(x, y) != 1) continue;
    long s = 0, t = 0;
    for (long i = -6; i <= 6 && s == 0 && t == 0; ++i)
      for (long j = -6; j <= 6; ++j)
        if (x * j - y * i == 1) {
          s = i;
          t = j;
          break;
        }
    if (s == 0 && t == 0) continue;
    IntVec2 v = IntVec2(s, t) + k * u;
    long r1 = mod(a(0) * u(0) + a(1) * u(1), p), r2 = mod(a(0) * v(0) + a(1) * v(1), p);
    if (r1 == 0 || r2 == 0 || r1 == r2) continue;
    std::vector<IntVec2> digits{IntVec2(0, 0), u, v};
    std::vector<bool> used(p, false);
    used[0] = used[r1] = used[r2] = true;
    bool ok = true;
    for (long r = 0; r < p && ok; ++r) {
      if (used[r]) continue;
      int tries = 0;
      while (true) {
        IntVec2 d(uniform(-4, 4), uniform(-4, 4));
        if (mod(a(0) * d(0) + a(1) * d(1), p) == r && std::find(digits.begin(), digits.end(), d) == digits.end()) {
          digits.push_back(d);
          break;
        }
        if (++tries > 1000) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    return make_digit_set(digits);
  }
}

}  // namespace

TEST_CASE("admissible vectors") {
  auto v = admissible_vectors(D2());
  REQUIRE(v.size() == 1);
  CHECK(v[0].a == IntVec2(1, 2));
  REQUIRE(v[0].orbit.size() == 2);
  CHECK(v[0].orbit[0] == IntVec2(1, 2));
  CHECK(v[0].orbit[1] == IntVec2(2, 1));

  auto w = admissible_vectors(D62());
  REQUIRE(w.size() == 1);
  CHECK(w[0].a == IntVec2(1, 1));

  auto line = admissible_vectors(make_digit_set({{0, 0}, {1, 0}, {2, 0}}));
  REQUIRE(line.size() == 2);
  CHECK(line[0].a == IntVec2(1, 1));
  CHECK(line[1].a == IntVec2(1, 2));
}

TEST_CASE("admissible residues are full: exact mask sums vanish") {
  for (int i = 0; i < 200; ++i) {
    const long primes[] = {3, 5, 7};
    long p = primes[uniform(0, 2)];
    IntVec2 a(uniform(1, p - 1), uniform(1, p - 1));
    DigitSet D = random_conforming(p, a);
    for (const auto& av : admissible_vectors(D)) {
      std::vector<long> count(p, 0);
      for (const auto& d : D.digits) ++count[mod(av.a(0) * d(0) + av.a(1) * d(1), p)];
      CHECK(std::all_of(count.begin(), count.end(), [](long c) { return c == 1; }));
      // each a in the orbit is again admissible
      for (const auto& o : av.orbit) CHECK(o == IntVec2(mod(o(0), p), mod(o(1), p)));
    }
  }
}

TEST_CASE("exactness for p = 3") {
  auto r = analyze_zero_structure(D2());
  CHECK(r.exactness == Exactness::ExactCertified);
  CHECK(r.a() == IntVec2(1, 2));
  CHECK(r.extra_zeros.empty());

  auto line = analyze_zero_structure(make_digit_set({{0, 0}, {1, 0}, {2, 0}}));
  CHECK(line.exactness == Exactness::Failed);

  // residues are full but the digits span an index-4 lattice: (1/6, 1/3) is an extra zero
  DigitSet coarse = make_digit_set({{0, 0}, {2, 0}, {0, 2}});
  auto av = admissible_vectors(coarse);
  REQUIRE(av.size() == 1);
  auto c = exactness_check(coarse, av[0]);
  CHECK(c.exactness == Exactness::Failed);
  CHECK_FALSE(c.extra_zeros.empty());
  CHECK(std::abs(mask_eval(coarse, Eigen::Vector2d(1.0 / 6, 1.0 / 3))) < 1e-12);
}

TEST_CASE("exact p = 3 certificate agrees with the numeric scan") {
  for (int i = 0; i < 20; ++i) {
    IntVec2 a(uniform(1, 2), uniform(1, 2));
    DigitSet D = random_conforming(3, a);
    auto r = analyze_zero_structure(D);
    REQUIRE(r.exactness == Exactness::ExactCertified);
    auto boxes = torus_zero_scan(D, 64, 6, 1e-9);
    auto zs = locate_zeros(D, boxes, 1e-9);
    CHECK(zs.size() == 2);
    if (zs.size() != 2) { for (auto& d : D.digits) MESSAGE(d.transpose()); for (auto& z : zs) MESSAGE(z.point.transpose() << " " << z.residual << " " << z.converged); }
    for (const auto& z : zs) {
      double best = 1.0;
      for (long j = 1; j < 3; ++j)
        best = std::min(best, torus_distance(z.point, Eigen::Vector2d(j * r.a()(0) / 3.0, j * r.a()(1) / 3.0)));
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("five-digit set is numerically supported") {
  auto r = analyze_zero_structure(D62());
  CHECK(r.exactness == Exactness::NumericallySupported);
  CHECK(r.a() == IntVec2(1, 1));
  CHECK(r.extra_zeros.empty());
  CHECK(r.located.size() == 4);
}

TEST_CASE("E_a membership") {
  IntVec2 a(1, 2);
  CHECK(in_E_a(Rational(1), a, 3));
  CHECK_FALSE(in_E_a(Rational(2), a, 3));
  CHECK(in_E_a(Rational(0), a, 3));
  CHECK(in_E_a(Rational(1, 3), a, 3));
}

TEST_CASE("E_a membership is orbit invariant") {
  const long primes[] = {3, 5, 7, 11};
  for (int i = 0; i < 1000; ++i) {
    long p = primes[uniform(0, 3)];
    IntVec2 a(uniform(1, p - 1), uniform(1, p - 1));
    Rational q(BigInt(uniform(-50, 50)), BigInt(uniform(1, 50)));
    bool base = in_E_a(q, a, p);
    for (long k = 2; k < p; ++k) CHECK(in_E_a(q, IntVec2(mod(k * a(0), p), mod(k * a(1), p)), p) == base);
  }
}

TEST_CASE("residue profiles") {
  auto b = residue_profile(D2(), 1, 2);
  CHECK(b.residues == std::vector<long>{0, 2, 1});
  CHECK(b.full_system);
  CHECK(b.gcd == 1);
  auto c = residue_profile(D2(), 1, 1);
  CHECK(c.residues == std::vector<long>{0, 1, 1});
  CHECK_FALSE(c.full_system);
  // consistent: 1/1 lies in E_a for a = (1,2)
  CHECK(in_E_a(Rational(1), IntVec2(1, 2), 3));
  auto f = residue_profile(D62(), 0, 1);
  std::vector<BigInt> firsts;
  for (const auto& d : D62().digits) firsts.push_back(d(0));
  CHECK(f.values == firsts);
}

TEST_CASE("shears outside E_a give a full residue system with gcd 1") {
  int tested = 0;
  while (tested < 200) {
    const long primes[] = {3, 5, 7};
    long p = primes[uniform(0, 2)];
    IntVec2 a(uniform(1, p - 1), uniform(1, p - 1));
    DigitSet D = random_conforming(p, a);
    // c1/c2 reduced with c2 a2 - c1 a1 in pZ
    long c2 = uniform(1, 40), c1 = uniform(-40, 40);
    if (std::gcd(c1, c2) != 1) continue;
    if (mod(c2 * a(1) - c1 * a(0), p) != 0) continue;
    CHECK_FALSE(in_E_a(Rational(BigInt(c1), BigInt(c2)), a, p));
    auto rp = residue_profile(D, c1, c2);
    CHECK(rp.full_system);
    CHECK(abs(rp.gcd) == 1);
    ++tested;
  }
}
