#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affspec/measure_model.hpp"
#include "affspec/zero_structure.hpp"

namespace affspec {

struct Evidence {
  std::string condition;
  std::string value;
  bool holds;
};

enum class SpectralOutcome { Spectral, NotSpectral, Unsupported };
enum class Branch { None, I, II, III };

const char* to_string(SpectralOutcome o);
const char* to_string(Branch b);

// Rule names:
//   equal-ratios       rho1 = rho2
//   irrational-shear   rho1 != rho2, c'' irrational
//   shear-outside-Ea   rho1 != rho2, c'' rational and not in E_a
//   shear-in-Ea        rho1 != rho2, c'' in E_a
struct SpectralVerdict {
  SpectralOutcome outcome = SpectralOutcome::Unsupported;
  Branch branch = Branch::None;
  std::string rule;
  std::string reason;
  std::vector<Evidence> evidence;
  bool conditional = false;  // zero structure only numerically supported
};

enum class OrthoOutcome { InfiniteOrthogonalSet, ArbitraryFiniteNumbers, AtMostP, NoInfiniteBoundUnknown, Unsupported };
const char* to_string(OrthoOutcome o);

struct OrthoVerdict {
  OrthoOutcome outcome = OrthoOutcome::Unsupported;
  long bound = 0;  // p for AtMostP, attained by a p-element family
  std::optional<AlgebraicScalar> kappa;
  std::optional<RootBase> root;  // rho^-1 = (t/s)^(1/r)
  std::string reason;
  std::vector<Evidence> evidence;
  bool conditional = false;
};

// True when x is a rational integer divisible by p.
bool in_pZ(const AlgebraicScalar& x, long p);

SpectralVerdict classify_spectrality(const MeasureInstance& inst, const ZeroStructureReport& report);
OrthoVerdict classify_orthogonality(const MeasureInstance& inst, const ZeroStructureReport& report);

}  // namespace affspec
