#include "affspec/classifier.hpp"

namespace affspec {

namespace {

std::string vec_str(const IntVec2& a) { return "(" + std::to_string(a(0)) + ", " + std::to_string(a(1)) + ")"; }

SpectralVerdict unsupported(std::string why) {
  SpectralVerdict v;
  v.outcome = SpectralOutcome::Unsupported;
  v.reason = std::move(why);
  return v;
}

}  // namespace

const char* to_string(SpectralOutcome o) {
  switch (o) {
    case SpectralOutcome::Spectral: return "Spectral";
    case SpectralOutcome::NotSpectral: return "NotSpectral";
    case SpectralOutcome::Unsupported: return "Unsupported";
  }
  return "?";
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::I: return "i";
    case Branch::II: return "ii";
    case Branch::III: return "iii";
  }
  return "?";
}

const char* to_string(OrthoOutcome o) {
  switch (o) {
    case OrthoOutcome::InfiniteOrthogonalSet: return "InfiniteOrthogonalSet";
    case OrthoOutcome::ArbitraryFiniteNumbers: return "ArbitraryFiniteNumbers";
    case OrthoOutcome::AtMostP: return "AtMostP";
    case OrthoOutcome::NoInfiniteBoundUnknown: return "NoInfiniteBoundUnknown";
    case OrthoOutcome::Unsupported: return "Unsupported";
  }
  return "?";
}

bool in_pZ(const AlgebraicScalar& x, long p) {
  auto q = is_rational(x);
  return q && q->is_integer() && mod(q->num(), p) == 0;
}

SpectralVerdict classify_spectrality(const MeasureInstance& inst, const ZeroStructureReport& report) {
  if (!report.usable()) return unsupported("zero structure not established: " + report.note);
  const long p = inst.D.p;
  const IntVec2& a = report.a();
  const std::string P = std::to_string(p);
  SpectralVerdict v;
  v.conditional = report.exactness == Exactness::NumericallySupported;
  v.evidence.push_back({"admissible a", vec_str(a), true});
  v.evidence.push_back({"zero structure", to_string(report.exactness), true});

  if (inst.M.rho1_inv == inst.M.rho2_inv) {
    v.rule = "equal-ratios";
    const AlgebraicScalar& rinv = inst.M.rho1_inv;
    bool r_ok = in_pZ(rinv, p);
    v.evidence.push_back({"rho^-1 in " + P + "Z", rinv.str(), r_ok});
    bool c_ok = false;
    std::string cdesc = inst.M.c.str();
    if (inst.M.c.is_zero()) {
      c_ok = true;
    } else if (auto q = is_rational(inst.M.c)) {
      long e = valuation(abs(*q).num(), p);
      c_ok = e >= 1;
      cdesc += ", v_" + P + "(numerator) = " + std::to_string(e);
    } else {
      cdesc += " (irrational)";
    }
    v.evidence.push_back({"c = 0 or c = t/s with t in " + P + "Z", cdesc, c_ok});
    if (r_ok && c_ok) {
      v.outcome = SpectralOutcome::Spectral;
      v.branch = Branch::III;
      v.reason = "equal ratios with rho^-1 in " + P + "Z and admissible shear";
    } else {
      v.outcome = SpectralOutcome::NotSpectral;
      v.reason = !r_ok ? "rho^-1 is not an integer multiple of " + P : "shear c is not of the form t/s with t in " + P + "Z";
    }
    return v;
  }

  if (!inst.normalized) return unsupported("distinct ratios need digits with d0 = 0 and d1 on the horizontal axis");
  DerivedQuantities dq = derive(inst);
  const AlgebraicScalar& cpp = *dq.c_double_prime;
  auto q = is_rational(cpp);
  v.evidence.push_back({"c'' rational", cpp.str(), q.has_value()});
  if (!q) {
    v.rule = "irrational-shear";
    v.outcome = SpectralOutcome::NotSpectral;
    v.reason = "c'' is irrational";
    return v;
  }
  const BigInt c2 = q->den();
  bool inE = in_E_a(*q, a, p);
  v.evidence.push_back({"c'' in E_a", q->str(), inE});
  bool r1 = in_pZ(inst.M.rho1_inv, p);
  v.evidence.push_back({"rho1^-1 in " + P + "Z", inst.M.rho1_inv.str(), r1});

  if (!inE) {
    v.rule = "shear-outside-Ea";
    if (r1) {
      v.outcome = SpectralOutcome::Spectral;
      v.branch = Branch::I;
      v.reason = "c'' outside E_a and rho1^-1 in " + P + "Z";
    } else {
      v.outcome = SpectralOutcome::NotSpectral;
      v.reason = "c'' outside E_a but rho1^-1 not in " + P + "Z";
    }
    return v;
  }

  v.rule = "shear-in-Ea";
  long ell = valuation(c2, p);
  v.evidence.push_back({"l = v_" + P + "(c2)", "c2 = " + c2.get_str() + ", l = " + std::to_string(ell), true});
  bool r2 = in_pZ(inst.M.rho2_inv, p);
  v.evidence.push_back({"rho2^-1 in " + P + "Z", inst.M.rho2_inv.str(), r2});
  bool div = false;
  BigInt pe = pow(BigInt(p), static_cast<unsigned long>(ell + 1));
  std::string gap = "(" + inst.M.rho1_inv.str() + ") - (" + inst.M.rho2_inv.str() + ")";
  if (auto g = is_rational(inst.M.rho1_inv - inst.M.rho2_inv); g && g->is_integer()) {
    div = BigInt(g->num() % pe) == 0;
    gap = g->str();
  }
  v.evidence.push_back({pe.get_str() + " | (rho1^-1 - rho2^-1)", gap, div});
  if (r1 && r2 && div) {
    v.outcome = SpectralOutcome::Spectral;
    v.branch = Branch::II;
    v.reason = "c'' in E_a, both ratios in " + P + "Z and " + pe.get_str() + " divides their difference";
  } else {
    v.outcome = SpectralOutcome::NotSpectral;
    if (!r1 || !r2) v.reason = "c'' in E_a but a diagonal entry is not in " + P + "Z";
    else v.reason = "c'' in E_a but " + pe.get_str() + " does not divide " + gap;
  }
  return v;
}

OrthoVerdict classify_orthogonality(const MeasureInstance& inst, const ZeroStructureReport& report) {
  OrthoVerdict v;
  if (!(inst.M.rho1_inv == inst.M.rho2_inv)) {
    v.reason = "contraction ratios differ: cardinality results need rho1 = rho2";
    return v;
  }
  if (!report.usable()) {
    v.reason = "zero structure not established: " + report.note;
    return v;
  }
  const long p = inst.D.p;
  const std::string P = std::to_string(p);
  v.conditional = report.exactness == Exactness::NumericallySupported;
  v.evidence.push_back({"admissible a", vec_str(report.a()), true});
  const AlgebraicScalar& rinv = inst.M.rho1_inv;
  v.root = root_rational_form(rinv);
  if (!v.root) {
    v.outcome = OrthoOutcome::NoInfiniteBoundUnknown;
    v.evidence.push_back({"rho^-1 root-rational", rinv.str(), false});
    v.reason = "rho^-1 is not of the form (t/s)^(1/r): no infinite orthogonal set, no finite bound known";
    return v;
  }
  const RootBase& rb = *v.root;
  v.evidence.push_back({"rho^-1 = (t/s)^(1/r)", rb.str(), true});
  v.kappa = inst.M.c / rinv;
  auto kq = is_rational(*v.kappa);
  v.evidence.push_back({"kappa = c rho rational", v.kappa->str(), kq.has_value()});
  bool t_p = mod(rb.t, p) == 0, s_p = mod(rb.s, p) == 0;
  v.evidence.push_back({"t in " + P + "Z", rb.t.get_str(), t_p});
  v.evidence.push_back({"s in " + P + "Z", rb.s.get_str(), s_p});
  if (!kq) {
    v.outcome = OrthoOutcome::AtMostP;
    v.bound = p;
    v.reason = "kappa irrational: at most " + P + " orthogonal exponentials, attained";
  } else if (t_p) {
    v.outcome = OrthoOutcome::InfiniteOrthogonalSet;
    v.reason = "kappa rational and t in " + P + "Z";
  } else if (!s_p) {
    v.outcome = OrthoOutcome::AtMostP;
    v.bound = p;
    v.reason = "kappa rational, t and s prime to " + P + ": at most " + P + ", attained";
  } else {
    v.outcome = OrthoOutcome::ArbitraryFiniteNumbers;
    v.reason = "kappa rational, s in " + P + "Z, t not: any finite number, no infinite set";
  }
  return v;
}

}  // namespace affspec
