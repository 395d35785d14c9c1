#pragma once

#include <string>
#include <vector>

#include "affspec/measure_model.hpp"
#include "affspec/numerics.hpp"

namespace affspec {

struct AdmissibleVector {
  IntVec2 a;
  std::vector<IntVec2> orbit;  // k a mod p, k = 1..p-1, sorted
};

// Canonical orbit representatives a in E_p with {<a,d> mod p} a full residue system.
std::vector<AdmissibleVector> admissible_vectors(const DigitSet& D);

enum class Exactness { ExactCertified, NumericallySupported, Failed };
const char* to_string(Exactness e);

struct ScanOptions {
  int resolution = 512;
  int refinements = 4;
  double tol = 1e-9;
  double match_tol = 1e-6;
};

struct ZeroStructureReport {
  std::vector<AdmissibleVector> admissible;
  Exactness exactness = Exactness::Failed;
  std::vector<Eigen::Vector2d> extra_zeros;
  std::vector<Eigen::Vector2d> located;
  std::size_t survivor_boxes = 0;
  std::string note;

  bool usable() const { return exactness != Exactness::Failed && admissible.size() == 1; }
  const IntVec2& a() const { return admissible.front().a; }
};

ZeroStructureReport exactness_check(const DigitSet& D, const AdmissibleVector& a, const ScanOptions& opts = {});
// admissible_vectors + exactness_check; several orbits or none give Failed.
ZeroStructureReport analyze_zero_structure(const DigitSet& D, const ScanOptions& opts = {});

bool in_E_a(const Rational& q, const IntVec2& a, long p);

struct ResidueProfile {
  std::vector<BigInt> values;
  std::vector<long> residues;
  BigInt gcd;
  bool full_system = false;
};

ResidueProfile residue_profile(const DigitSet& D, const BigInt& c1, const BigInt& c2);

}  // namespace affspec
