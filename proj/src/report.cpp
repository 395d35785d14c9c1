#include "affspec/report.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "affspec/classifier.hpp"
#include "affspec/constructions.hpp"
#include "affspec/render.hpp"
#include "affspec/search.hpp"
#include "affspec/zero_structure.hpp"

namespace affspec {

namespace {

Json vec_json(const IntVec2& v) { return Json::array({v(0), v(1)}); }
Json vec_json(const Eigen::Vector2d& v) { return Json::array({v(0), v(1)}); }

Json exact_json(const ExactVec2& v) {
  Eigen::Vector2d d = to_double(v);
  return Json{{"exact", to_string(v)}, {"approx", vec_json(d)}};
}

Json matrix_json(const ExactMat2& m) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) rows.push_back(Json::array({m(i, 0).str(), m(i, 1).str()}));
  return rows;
}

Json evidence_json(const std::vector<Evidence>& ev) {
  Json out = Json::array();
  for (const auto& e : ev) out.push_back(Json{{"condition", e.condition}, {"value", e.value}, {"holds", e.holds}});
  return out;
}

Json instance_json(const MeasureInstance& inst) {
  Json d = Json::array();
  for (const auto& x : inst.D.digits) d.push_back(vec_json(x));
  return Json{{"tag", inst.tag},
              {"matrix", matrix_json(inst.M.matrix())},
              {"field", inst.M.field().str()},
              {"digits", d},
              {"p", inst.D.p},
              {"normalized", inst.normalized}};
}

Json zeros_json(const ZeroStructureReport& z) {
  Json adm = Json::array();
  for (const auto& av : z.admissible) {
    Json orbit = Json::array();
    for (const auto& o : av.orbit) orbit.push_back(vec_json(o));
    adm.push_back(Json{{"a", vec_json(av.a)}, {"orbit", orbit}});
  }
  Json extra = Json::array(), located = Json::array();
  for (const auto& e : z.extra_zeros) extra.push_back(vec_json(e));
  for (const auto& e : z.located) located.push_back(vec_json(e));
  Json out{{"admissible", adm}, {"exactness", to_string(z.exactness)}, {"usable", z.usable()}};
  if (z.usable()) out["a"] = vec_json(z.a());
  out["extra_zeros"] = extra;
  out["located"] = located;
  out["survivor_boxes"] = z.survivor_boxes;
  out["note"] = z.note;
  return out;
}

Json spectral_json(const SpectralVerdict& v) {
  return Json{{"outcome", to_string(v.outcome)}, {"branch", to_string(v.branch)}, {"rule", v.rule},
              {"reason", v.reason},            {"conditional", v.conditional},   {"evidence", evidence_json(v.evidence)}};
}

Json ortho_json(const OrthoVerdict& v) {
  Json out{{"outcome", to_string(v.outcome)}};
  if (v.outcome == OrthoOutcome::AtMostP) out["bound"] = v.bound;
  out["kappa"] = v.kappa ? Json(v.kappa->str()) : Json(nullptr);
  out["kappa_rational"] = v.kappa ? is_rational(*v.kappa).has_value() : false;
  out["root"] = v.root ? Json(v.root->str()) : Json(nullptr);
  out["reason"] = v.reason;
  out["conditional"] = v.conditional;
  out["evidence"] = evidence_json(v.evidence);
  return out;
}

Json frequencies_json(const FrequencySet& fs) {
  Json pts = Json::array();
  for (const auto& x : fs.points) pts.push_back(exact_json(x));
  return Json{{"provenance", fs.provenance}, {"depth", fs.depth}, {"size", fs.size()}, {"points", pts}};
}

Json bizero_json(const BizeroReport& b) {
  Json out{{"pass", b.pass}, {"pairs_checked", b.pairs_checked}, {"kmax", b.kmax}};
  if (b.failing) out["failing"] = Json::array({b.failing->first, b.failing->second});
  if (!b.reason.empty()) out["reason"] = b.reason;
  return out;
}

Json window_json(const Window& w) { return Json::array({w.x0, w.x1, w.y0, w.y1}); }

struct Context {
  MeasureInstance inst;
  ZeroStructureReport zeros;
  SpectralVerdict spectral;
  OrthoVerdict ortho;
  bool classified = false;
};

// Normalizes digits when the ratios differ, recording the transcript.
MeasureInstance prepare(const ProblemFile& pf, Json& report) {
  MeasureInstance inst = to_instance(pf);
  report["instance"] = instance_json(inst);
  if (!(inst.M.rho1_inv == inst.M.rho2_inv) && !inst.normalized) {
    auto n = normalize_digits(inst.D);
    if (!n) {
      report["normalization"] = Json{{"applied", false}, {"possible", false}};
      return inst;
    }
    Json perm = Json::array();
    for (auto i : n->permutation) perm.push_back(i);
    Json digits = Json::array();
    for (const auto& d : n->digits.digits) digits.push_back(vec_json(d));
    report["normalization"] =
        Json{{"applied", true}, {"translation", vec_json(n->translation)}, {"permutation", perm}, {"digits", digits}};
    return make_instance(inst.M, n->digits, inst.tag);
  }
  report["normalization"] = Json{{"applied", false}, {"possible", true}};
  return inst;
}

void analyze(Context& cx, const ProblemFile& pf, Json& report) {
  if (cx.classified) return;
  cx.zeros = analyze_zero_structure(cx.inst.D, scan_options(pf));
  cx.spectral = classify_spectrality(cx.inst, cx.zeros);
  cx.ortho = classify_orthogonality(cx.inst, cx.zeros);
  cx.classified = true;
  report["zeros"] = zeros_json(cx.zeros);
}

bool unsupported(const Context& cx) {
  if (cx.spectral.outcome == SpectralOutcome::Unsupported) return true;
  return cx.inst.M.rho1_inv == cx.inst.M.rho2_inv && cx.ortho.outcome == OrthoOutcome::Unsupported;
}

FrequencySet build_family(const Context& cx, const std::string& family, unsigned n) {
  if (family == "truncation") return spectrum_truncation(cx.inst, cx.zeros, n);
  if (family == "infinite") return infinite_orthogonal_family(cx.inst, cx.zeros, n);
  if (family == "graded") return graded_family(cx.inst, cx.zeros, n);
  if (family == "p-element") {
    if (!cx.zeros.usable()) throw std::invalid_argument("zero structure not established");
    return p_element_family(cx.inst, cx.zeros.a(), n);
  }
  throw std::invalid_argument("unknown family '" + family + "' (truncation, infinite, graded, p-element)");
}

std::string default_family(const Context& cx) {
  if (cx.spectral.outcome == SpectralOutcome::Spectral) return "truncation";
  if (cx.ortho.outcome == OrthoOutcome::InfiniteOrthogonalSet) return "infinite";
  if (cx.ortho.outcome == OrthoOutcome::ArbitraryFiniteNumbers) return "graded";
  return "p-element";
}

Json do_construct(const Context& cx, const std::string& family, unsigned n) {
  FrequencySet fs = build_family(cx, family, n);
  Json out{{"family", family}, {"n", n}, {"frequencies", frequencies_json(fs)}};
  out["bizero"] = bizero_json(verify_bizero(cx.inst, cx.zeros.a(), fs));
  return out;
}

Json do_hadamard(const Context& cx) {
  if (cx.spectral.outcome != SpectralOutcome::Spectral || cx.spectral.branch == Branch::II) {
    std::string why = cx.spectral.outcome == SpectralOutcome::Spectral ? "no explicit triple for branch ii"
                                                                       : std::string("verdict is ") + to_string(cx.spectral.outcome);
    return Json{{"available", false}, {"reason", why}};
  }
  SpectralTriple st = spectral_hadamard_triple(cx.inst, cx.zeros);
  HadamardCertificate cert = hadamard_check(st.triple.M, st.triple.B, st.triple.L, HadamardMode::Exact);
  Json B = Json::array(), L = Json::array();
  for (const auto& b : st.triple.B) B.push_back(to_string(b));
  for (const auto& l : st.triple.L) L.push_back(to_string(l));
  Json c{{"unitary", cert.unitary}, {"mode", cert.mode == HadamardMode::Exact ? "exact" : "numeric"},
         {"pairs", cert.pairs.size()}};
  if (cert.failing) c["failing"] = Json::array({cert.failing->first, cert.failing->second});
  if (!cert.note.empty()) c["note"] = cert.note;
  return Json{{"available", true},     {"description", st.description}, {"P", matrix_json(st.P)},
              {"M", matrix_json(st.triple.M)}, {"B", B}, {"L", L}, {"certificate", c}};
}

Json do_qscan(const Context& cx, const ProblemFile& pf, const RunOptions& opts, const std::string& family) {
  FrequencySet fs = build_family(cx, family, opts.n);
  Window w = opts.window.value_or(Window{});
  GridStats g = grid_scan(cx.inst, fs, w, opts.grid, pf.eps, cx.zeros.a());
  return Json{{"family", family},
              {"n", opts.n},
              {"lambda_size", fs.size()},
              {"grid", opts.grid},
              {"window", window_json(w)},
              {"eps", pf.eps},
              {"min", Json{{"value", g.min}, {"error", g.error}, {"at", vec_json(g.argmin)}}},
              {"max", Json{{"value", g.max}, {"error", g.error}, {"at", vec_json(g.argmax)}}}};
}

Json do_clique(const Context& cx, const ProblemFile& pf, const RunOptions& opts) {
  const unsigned kmax = opts.kmax.value_or(pf.kmax), radius = opts.radius.value_or(pf.radius);
  CandidatePool pool = enumerate_candidates(cx.inst, cx.zeros.a(), kmax, radius);
  unsigned kedge = 2 * kmax + 2;
  if (opts.seed_graded) {
    FrequencySet g = graded_family(cx.inst, cx.zeros, *opts.seed_graded);
    for (const auto& x : g.points) pool.frequencies.insert(x);
    pool.frequencies.provenance += " + " + g.provenance;
    kedge = std::max(kedge, g.depth + 2);
  }
  CliqueResult r = max_orthogonal_clique(cx.inst, cx.zeros.a(), pool.frequencies, kedge);
  BizeroReport bz = verify_bizero(cx.inst, cx.zeros.a(), r.witness, kedge);
  Json out{{"kmax", kmax},         {"radius", radius},  {"kmax_edges", kedge},
           {"pool_size", pool.frequencies.size()}, {"vertices", r.vertices}, {"edges", r.edges},
           {"size", r.size},       {"witness", frequencies_json(r.witness)}, {"witness_bizero", bizero_json(bz)}};
  if (cx.ortho.outcome == OrthoOutcome::AtMostP)
    out["exceeds_bound"] = r.size > static_cast<std::size_t>(cx.ortho.bound);
  return out;
}

Json do_render(const Context& cx, const ProblemFile& pf, const RunOptions& opts) {
  namespace fs = std::filesystem;
  const std::string dir = opts.output_dir.value_or(pf.output_dir);
  PointCloud cloud = attractor_points(cx.inst, opts.depth);
  Window w = bounding_window(cloud);
  Image img = rasterize(cloud, opts.width, opts.height, w);
  auto bytes = ppm_bytes(img);
  std::string name = render_file_name(cx.inst.tag, opts.depth, opts.width, opts.height);
  Json out{{"points", cloud.points.size()}, {"depth", opts.depth}, {"width", opts.width}, {"height", opts.height},
           {"window", window_json(w)},      {"file", name},         {"fnv1a64", hex64(fnv1a64(bytes))}};
  if (opts.write_files) {
    fs::create_directories(dir);
    write_ppm((fs::path(dir) / name).string(), img);
    out["path"] = (fs::path(dir) / name).string();
  }
  if (opts.heat) {
    Window hw = opts.window.value_or(Window{-5, 5, -5, 5});
    std::optional<IntVec2> a;
    if (cx.zeros.usable()) a = cx.zeros.a();
    HeatField hf = heat_field(cx.inst, opts.width, opts.height, hw, 1e-12, a, opts.site_depth);
    double worst = 0.0;
    for (const auto& s : hf.sites) worst = std::max(worst, hf.at(s.px, s.py));
    Image himg = rasterize(hf);
    auto hb = ppm_bytes(himg);
    std::string hname = render_file_name(cx.inst.tag + "_heat", opts.site_depth, opts.width, opts.height);
    Json h{{"window", window_json(hw)}, {"sites", hf.sites.size()}, {"max_site_value", worst},
           {"file", hname},             {"fnv1a64", hex64(fnv1a64(hb))}};
    if (opts.write_files) {
      write_ppm((fs::path(dir) / hname).string(), himg);
      h["path"] = (fs::path(dir) / hname).string();
    }
    out["heat"] = h;
  }
  return out;
}

}  // namespace

RunResult run_command(const std::string& command, const ProblemFile& pf, const RunOptions& opts) {
  RunResult res;
  Json& rep = res.report;
  rep["command"] = command;
  try {
    Context cx{prepare(pf, rep), {}, {}, {}, false};
    if (command == "zeros") {
      rep["zeros"] = zeros_json(analyze_zero_structure(cx.inst.D, scan_options(pf)));
    } else {
      analyze(cx, pf, rep);
      rep["spectral"] = spectral_json(cx.spectral);
      rep["orthogonality"] = ortho_json(cx.ortho);
      if (unsupported(cx)) {
        res.exit_code = 2;
      } else if (command == "classify") {
      } else if (command == "construct") {
        rep["construction"] = do_construct(cx, opts.family, opts.n);
      } else if (command == "hadamard") {
        rep["hadamard"] = do_hadamard(cx);
      } else if (command == "qscan") {
        rep["qscan"] = do_qscan(cx, pf, opts, opts.family);
      } else if (command == "clique") {
        rep["clique"] = do_clique(cx, pf, opts);
      } else if (command == "render") {
        rep["render"] = do_render(cx, pf, opts);
      } else if (command == "all") {
        std::string fam = default_family(cx);
        unsigned n = fam == "truncation" ? 2 : fam == "p-element" ? 1 : 3;
        rep["hadamard"] = do_hadamard(cx);
        rep["construction"] = do_construct(cx, fam, n);
        if (cx.spectral.outcome == SpectralOutcome::Spectral) {
          RunOptions q = opts;
          q.n = 2;
          rep["qscan"] = do_qscan(cx, pf, q, "truncation");
        }
        RunOptions c = opts;
        c.kmax = c.kmax.value_or(1);
        c.radius = c.radius.value_or(1);
        rep["clique"] = do_clique(cx, pf, c);
        rep["render"] = do_render(cx, pf, opts);
      } else {
        throw std::invalid_argument("unknown command '" + command + "'");
      }
    }
  } catch (const std::exception& e) {
    rep["error"] = e.what();
    res.exit_code = 1;
  }
  rep["exit_code"] = res.exit_code;
  res.text = pretty(rep);
  return res;
}

namespace {

std::string pair_str(const Json& v) {
  std::ostringstream os;
  os << "(" << v[0].dump() << ", " << v[1].dump() << ")";
  return os.str();
}

void print_evidence(std::ostream& os, const Json& ev) {
  for (const auto& e : ev)
    os << "    [" << (e["holds"].get<bool>() ? "x" : " ") << "] " << e["condition"].get<std::string>() << ": "
       << e["value"].get<std::string>() << "\n";
}

void print_set(std::ostream& os, const Json& fs, std::size_t limit = 12) {
  os << "  " << fs["provenance"].get<std::string>() << ": " << fs["size"] << " points, depth " << fs["depth"] << "\n";
  std::size_t i = 0;
  for (const auto& x : fs["points"]) {
    if (i++ == limit) {
      os << "    ...\n";
      break;
    }
    os << "    " << x["exact"].get<std::string>() << "\n";
  }
}

void print_bizero(std::ostream& os, const char* label, const Json& b) {
  os << "  " << label << ": " << (b["pass"].get<bool>() ? "pass" : "FAIL") << " (" << b["pairs_checked"]
     << " pairs, depth " << b["kmax"] << ")";
  if (b.contains("reason")) os << " " << b["reason"].get<std::string>();
  os << "\n";
}

}  // namespace

std::string pretty(const Json& r) {
  std::ostringstream os;
  os << "command: " << r["command"].get<std::string>() << "\n";
  if (r.contains("instance")) {
    const auto& in = r["instance"];
    const auto& m = in["matrix"];
    os << "instance " << in["tag"].get<std::string>() << ": M = [[" << m[0][0].get<std::string>() << ", "
       << m[0][1].get<std::string>() << "], [0, " << m[1][1].get<std::string>() << "]], p = " << in["p"] << ", D =";
    for (const auto& d : in["digits"]) os << " " << pair_str(d);
    os << "\n";
  }
  if (r.contains("normalization") && r["normalization"]["applied"].get<bool>()) {
    const auto& n = r["normalization"];
    os << "normalized digits: translate by " << pair_str(n["translation"]) << ", D =";
    for (const auto& d : n["digits"]) os << " " << pair_str(d);
    os << "\n";
  }
  if (r.contains("zeros")) {
    const auto& z = r["zeros"];
    os << "zero structure: " << z["exactness"].get<std::string>();
    if (z.contains("a")) os << ", a = " << pair_str(z["a"]);
    os << ", " << z["admissible"].size() << " admissible orbit(s)";
    if (!z["extra_zeros"].empty()) os << ", " << z["extra_zeros"].size() << " extra zero(s)";
    if (!z["note"].get<std::string>().empty()) os << "\n  " << z["note"].get<std::string>();
    os << "\n";
  }
  if (r.contains("spectral")) {
    const auto& s = r["spectral"];
    os << "spectrality: " << s["outcome"].get<std::string>();
    if (s["branch"] != "none") os << " (branch " << s["branch"].get<std::string>() << ")";
    if (s["conditional"].get<bool>()) os << " [conditional on numerical zero structure]";
    os << "\n  " << s["reason"].get<std::string>() << "\n";
    print_evidence(os, s["evidence"]);
  }
  if (r.contains("orthogonality")) {
    const auto& o = r["orthogonality"];
    os << "orthogonal exponentials: " << o["outcome"].get<std::string>();
    if (o.contains("bound")) os << " (" << o["bound"] << ")";
    if (!o["kappa"].is_null()) os << ", kappa = " << o["kappa"].get<std::string>();
    os << "\n  " << o["reason"].get<std::string>() << "\n";
    print_evidence(os, o["evidence"]);
  }
  if (r.contains("hadamard")) {
    const auto& h = r["hadamard"];
    if (!h["available"].get<bool>()) {
      os << "hadamard triple: unavailable, " << h["reason"].get<std::string>() << "\n";
    } else {
      os << "hadamard triple: " << h["description"].get<std::string>() << "\n  M1 = [[" << h["M"][0][0].get<std::string>()
         << ", " << h["M"][0][1].get<std::string>() << "], [" << h["M"][1][0].get<std::string>() << ", "
         << h["M"][1][1].get<std::string>() << "]]\n  B =";
      for (const auto& b : h["B"]) os << " " << b.get<std::string>();
      os << "\n  L =";
      for (const auto& l : h["L"]) os << " " << l.get<std::string>();
      os << "\n  check (" << h["certificate"]["mode"].get<std::string>()
         << "): " << (h["certificate"]["unitary"].get<bool>() ? "unitary" : "NOT unitary") << "\n";
    }
  }
  if (r.contains("construction")) {
    const auto& c = r["construction"];
    os << "construction " << c["family"].get<std::string>() << ":\n";
    print_set(os, c["frequencies"]);
    print_bizero(os, "bi-zero", c["bizero"]);
  }
  if (r.contains("qscan")) {
    const auto& q = r["qscan"];
    os << "Q scan over " << q["grid"] << "^2 grid, " << q["family"].get<std::string>() << " n = " << q["n"] << " ("
       << q["lambda_size"] << " points)\n  min " << q["min"]["value"] << " +- " << q["min"]["error"] << " at "
       << pair_str(q["min"]["at"]) << "\n  max " << q["max"]["value"] << " +- " << q["max"]["error"] << " at "
       << pair_str(q["max"]["at"]) << "\n";
  }
  if (r.contains("clique")) {
    const auto& c = r["clique"];
    os << "max orthogonal clique: " << c["size"] << " (pool " << c["pool_size"] << ", " << c["edges"]
       << " edges, edge depth " << c["kmax_edges"] << ")\n";
    print_set(os, c["witness"]);
    print_bizero(os, "witness bi-zero", c["witness_bizero"]);
    if (c.contains("exceeds_bound") && c["exceeds_bound"].get<bool>())
      os << "  WARNING: clique larger than the proven bound\n";
  }
  if (r.contains("render")) {
    const auto& g = r["render"];
    os << "render: " << g["points"] << " points -> " << g["file"].get<std::string>() << " fnv1a64 "
       << g["fnv1a64"].get<std::string>() << "\n";
    if (g.contains("heat"))
      os << "  heat: " << g["heat"]["sites"] << " zero sites, max |mu_hat|^2 there " << g["heat"]["max_site_value"]
         << " -> " << g["heat"]["file"].get<std::string>() << "\n";
  }
  if (r.contains("error")) os << "error: " << r["error"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace affspec
