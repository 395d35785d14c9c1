#include "affspec/zero_structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/LU>

namespace affspec {

namespace {

bool full_residues(const DigitSet& D, long a1, long a2) {
  std::vector<bool> seen(D.p, false);
  for (const auto& d : D.digits) {
    long r = mod(a1 * d(0) + a2 * d(1), D.p);
    if (seen[r]) return false;
    seen[r] = true;
  }
  return true;
}

std::vector<Eigen::Vector2d> predicted(const IntVec2& a, int p) {
  std::vector<Eigen::Vector2d> out;
  for (int j = 1; j < p; ++j)
    out.emplace_back(static_cast<double>(mod(j * a(0), p)) / p, static_cast<double>(mod(j * a(1), p)) / p);
  return out;
}

// p = 3: zeros solve B xi = (1/3, 2/3) or (2/3, 1/3) mod Z^2, rows of B the digit differences.
ZeroStructureReport exact_p3(const DigitSet& D, const AdmissibleVector& av) {
  ZeroStructureReport rep;
  rep.admissible = {av};
  IntVec2 u = D.digits[1] - D.digits[0], v = D.digits[2] - D.digits[0];
  long det = u(0) * v(1) - u(1) * v(0);
  if (std::abs(det) == 1) {
    rep.exactness = Exactness::ExactCertified;
    rep.located = predicted(av.a, 3);
    rep.note = "p = 3 with unimodular digit differences: zero set is exactly the predicted lattice";
    return rep;
  }
  rep.exactness = Exactness::Failed;
  if (det == 0) {
    rep.note = "digit differences are dependent: the zero set contains lines";
    return rep;
  }
  Eigen::Matrix2d B;
  B << u(0), u(1), v(0), v(1);
  Eigen::Matrix2d Binv = B.inverse();
  auto pred = predicted(av.a, 3);
  std::set<std::pair<long, long>> seen;
  const long n = std::abs(det);
  for (int s = 1; s <= 2; ++s)
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        Eigen::Vector2d rhs(s / 3.0 + i, (3 - s) / 3.0 + j);
        Eigen::Vector2d x = Binv * rhs;
        x = x.array() - x.array().floor();
        auto k = std::make_pair(std::lround(x(0) * 3 * n) % (3 * n), std::lround(x(1) * 3 * n) % (3 * n));
        if (!seen.insert(k).second) continue;
        rep.located.push_back(x);
        bool known = false;
        for (const auto& p : pred) known = known || torus_distance(p, x) < 1e-9;
        if (!known) rep.extra_zeros.push_back(x);
      }
  rep.note = "digit difference determinant " + std::to_string(det) + ": zero set is a finer lattice";
  return rep;
}

}  // namespace

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::ExactCertified: return "ExactCertified";
    case Exactness::NumericallySupported: return "NumericallySupported";
    case Exactness::Failed: return "Failed";
  }
  return "?";
}

std::vector<AdmissibleVector> admissible_vectors(const DigitSet& D) {
  const long p = D.p;
  std::vector<AdmissibleVector> out;
  std::set<std::pair<long, long>> covered;
  for (long a1 = 1; a1 < p; ++a1)
    for (long a2 = 1; a2 < p; ++a2) {
      if (covered.count({a1, a2}) || !full_residues(D, a1, a2)) continue;
      AdmissibleVector av{IntVec2(a1, a2), {}};
      for (long k = 1; k < p; ++k) {
        IntVec2 m(mod(k * a1, p), mod(k * a2, p));
        av.orbit.push_back(m);
        covered.insert({m(0), m(1)});
      }
      std::sort(av.orbit.begin(), av.orbit.end(),
                [](const IntVec2& x, const IntVec2& y) { return std::pair(x(0), x(1)) < std::pair(y(0), y(1)); });
      out.push_back(std::move(av));
    }
  return out;
}

ZeroStructureReport exactness_check(const DigitSet& D, const AdmissibleVector& av, const ScanOptions& opts) {
  if (D.p == 2) {
    ZeroStructureReport rep;
    rep.admissible = {av};
    rep.note = "p = 2: the mask vanishes on lines";
    return rep;
  }
  if (D.p == 3) return exact_p3(D, av);

  ZeroStructureReport rep;
  rep.admissible = {av};
  auto boxes = torus_zero_scan(D, opts.resolution, opts.refinements, opts.tol);
  rep.survivor_boxes = boxes.size();
  auto zeros = locate_zeros(D, boxes, opts.tol);
  auto pred = predicted(av.a, D.p);
  std::vector<bool> hit(pred.size(), false);
  bool unresolved = false;
  for (const auto& z : zeros) {
    if (!z.converged) {
      // a cluster that Newton could not settle is only harmless if |m_D| stays away from 0 there
      if (z.residual > opts.tol && z.residual > 1e-6) continue;
      unresolved = true;
      rep.extra_zeros.push_back(z.point);
      continue;
    }
    rep.located.push_back(z.point);
    bool known = false;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (torus_distance(pred[i], z.point) <= opts.match_tol) {
        hit[i] = true;
        known = true;
      }
    if (!known) rep.extra_zeros.push_back(z.point);
  }
  bool all_hit = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  if (rep.extra_zeros.empty() && all_hit) {
    rep.exactness = Exactness::NumericallySupported;
    rep.note = "subdivision scan " + std::to_string(opts.resolution) + "^2 with " +
               std::to_string(opts.refinements) + " refinements: every located zero is predicted";
  } else {
    rep.exactness = Exactness::Failed;
    rep.note = unresolved ? "scan left unresolved near-zero clusters"
                          : (all_hit ? "zeros outside the predicted lattice" : "predicted zero not located");
  }
  return rep;
}

ZeroStructureReport analyze_zero_structure(const DigitSet& D, const ScanOptions& opts) {
  auto adm = admissible_vectors(D);
  if (adm.size() == 1) return exactness_check(D, adm.front(), opts);
  ZeroStructureReport rep;
  rep.admissible = adm;
  rep.exactness = Exactness::Failed;
  rep.note = adm.empty() ? "no admissible vector: residues never form a full system"
                         : "several admissible orbits: the zero set is not a single lattice family";
  return rep;
}

bool in_E_a(const Rational& q, const IntVec2& a, long p) {
  if (q.is_zero()) return true;
  BigInt v = q.den() * a(1) - q.num() * a(0);
  return mod(v, p) != 0;
}

ResidueProfile residue_profile(const DigitSet& D, const BigInt& c1, const BigInt& c2) {
  ResidueProfile rp;
  rp.gcd = 0;
  std::vector<bool> seen(D.p, false);
  bool full = true;
  for (const auto& d : D.digits) {
    BigInt b = c2 * d(0) + c1 * d(1);
    rp.values.push_back(b);
    long r = mod(b, D.p);
    rp.residues.push_back(r);
    if (seen[r]) full = false;
    seen[r] = true;
    mpz_gcd(rp.gcd.get_mpz_t(), rp.gcd.get_mpz_t(), b.get_mpz_t());
  }
  rp.full_system = full;
  return rp;
}

}  // namespace affspec
