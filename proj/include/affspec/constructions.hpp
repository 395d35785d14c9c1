#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affspec/classifier.hpp"
#include "affspec/measure_model.hpp"
#include "affspec/zero_structure.hpp"

namespace affspec {

struct HadamardTriple {
  ExactMat2 M;
  std::vector<ExactVec2> B;
  std::vector<ExactVec2> L;
  bool verified = false;
};

enum class HadamardMode { Exact, Numeric };

struct PairCertificate {
  std::size_t i, j;
  long denominator;  // common denominator n of the exponents; the sum lives in Q(zeta_n)
  bool vanishes;
};

struct HadamardCertificate {
  bool unitary = false;
  HadamardMode mode = HadamardMode::Exact;
  std::vector<PairCertificate> pairs;
  std::optional<std::pair<std::size_t, std::size_t>> failing;
  double max_deviation = 0.0;  // numeric mode: max |H H* - I|
  std::string note;
};

// Exact mode decides each row sum sum_l zeta_n^(k_l) = 0 by divisibility of the
// exponent polynomial by the cyclotomic polynomial Phi_n.
HadamardCertificate hadamard_check(const ExactMat2& M, const std::vector<ExactVec2>& B,
                                   const std::vector<ExactVec2>& L, HadamardMode mode = HadamardMode::Exact,
                                   double tol = 1e-12);

// Coefficients of Phi_n, lowest degree first.
std::vector<long long> cyclotomic(long n);

struct SpectralTriple {
  HadamardTriple triple;
  ExactMat2 P;  // M1 = P M P^-1, D1 = P D
  std::string description;
};

SpectralTriple spectral_hadamard_triple(const MeasureInstance& inst, const ZeroStructureReport& report);

FrequencySet infinite_orthogonal_family(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned N);
FrequencySet p_element_family(const MeasureInstance& inst, const IntVec2& a, unsigned k);
FrequencySet graded_family(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned N);
FrequencySet spectrum_truncation(const MeasureInstance& inst, const ZeroStructureReport& report, unsigned n);

struct BizeroReport {
  bool pass = true;
  std::optional<std::pair<std::size_t, std::size_t>> failing;
  std::string reason;
  std::size_t pairs_checked = 0;
  unsigned kmax = 0;
};

BizeroReport verify_bizero(const MeasureInstance& inst, const IntVec2& a, const FrequencySet& lambda,
                           std::optional<unsigned> kmax = std::nullopt);

ExactMat2 transpose_power(const ExpandingMatrix& M, unsigned long k);

}  // namespace affspec
