#include "affspec/problem_file.hpp"

#include <fstream>
#include <sstream>

#include "affspec/scalar_parser.hpp"

namespace affspec {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<IntVec2> parse_digits(const std::string& v, int line) {
  std::vector<IntVec2> out;
  std::size_t i = 0;
  while (true) {
    i = v.find_first_not_of(" \t", i);
    if (i == std::string::npos) break;
    if (v[i] != '(') throw ProblemError("digit must look like (x,y)", line);
    auto close = v.find(')', i);
    if (close == std::string::npos) throw ProblemError("unterminated digit", line);
    std::string body = v.substr(i + 1, close - i - 1);
    auto comma = body.find(',');
    if (comma == std::string::npos) throw ProblemError("digit must look like (x,y)", line);
    try {
      std::size_t u1 = 0, u2 = 0;
      std::string s1 = trim(body.substr(0, comma)), s2 = trim(body.substr(comma + 1));
      long x = std::stol(s1, &u1), y = std::stol(s2, &u2);
      if (u1 != s1.size() || u2 != s2.size()) throw std::invalid_argument("junk");
      out.emplace_back(x, y);
    } catch (const std::logic_error&) {
      throw ProblemError("digit coordinates must be integers", line);
    }
    i = close + 1;
  }
  return out;
}

template <typename T>
T number(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    T x;
    if constexpr (std::is_floating_point_v<T>) x = std::stod(v, &used);
    else x = static_cast<T>(std::stol(v, &used));
    if (used != v.size()) throw std::invalid_argument("junk");
    return x;
  } catch (const std::logic_error&) {
    throw ProblemError("bad number '" + v + "'", line);
  }
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  ProblemFile pf;
  bool have_matrix = false, have_digits = false;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ProblemError("expected key = value", line);
    std::string k = trim(s.substr(0, eq)), v = trim(s.substr(eq + 1));
    if (k == "tag") {
      pf.tag = v;
    } else if (k == "matrix") {
      std::vector<std::string> parts;
      std::stringstream ss(v);
      std::string part;
      while (std::getline(ss, part, ',')) parts.push_back(trim(part));
      if (parts.size() != 4) throw ProblemError("matrix needs 4 comma-separated entries", line);
      for (int i = 0; i < 4; ++i) pf.matrix[i] = parts[i];
      have_matrix = true;
    } else if (k == "digits") {
      pf.digits = parse_digits(v, line);
      have_digits = true;
    } else if (k == "p") {
      pf.p = number<int>(v, line);
    } else if (k == "field") {
      try {
        pf.field = parse_root_base(v);
      } catch (const std::exception& e) {
        throw ProblemError(std::string("field: ") + e.what(), line);
      }
    } else if (k == "kmax") {
      pf.kmax = number<unsigned>(v, line);
    } else if (k == "radius") {
      pf.radius = number<unsigned>(v, line);
    } else if (k == "eps") {
      pf.eps = number<double>(v, line);
    } else if (k == "scan_resolution") {
      pf.scan_resolution = number<int>(v, line);
    } else if (k == "scan_refinements") {
      pf.scan_refinements = number<int>(v, line);
    } else if (k == "scan_tol") {
      pf.scan_tol = number<double>(v, line);
    } else if (k == "output_dir") {
      pf.output_dir = v;
    } else {
      throw ProblemError("unknown key '" + k + "'", line);
    }
  }
  if (!have_matrix) throw ProblemError("missing matrix", 0);
  if (!have_digits) throw ProblemError("missing digits", 0);
  if (pf.p == 0) pf.p = static_cast<int>(pf.digits.size());
  if (pf.p != static_cast<int>(pf.digits.size()))
    throw ProblemError("p = " + std::to_string(pf.p) + " but " + std::to_string(pf.digits.size()) + " digits given", 0);
  to_instance(pf);  // validates
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ProblemError("cannot open " + path, 0);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_problem(ss.str());
}

std::string serialize(const ProblemFile& pf) {
  MeasureInstance inst = to_instance(pf);
  std::ostringstream os;
  os << "tag = " << pf.tag << "\n";
  os << "matrix = " << inst.M.rho1_inv.str() << ", " << inst.M.c.str() << ", 0, " << inst.M.rho2_inv.str() << "\n";
  if (!inst.M.field().is_rational()) os << "field = " << inst.M.field().str() << "\n";
  os << "digits =";
  for (const auto& d : pf.digits) os << " (" << d(0) << "," << d(1) << ")";
  os << "\n";
  os << "p = " << pf.p << "\n";
  os << "kmax = " << pf.kmax << "\n";
  os << "radius = " << pf.radius << "\n";
  os << "eps = " << fmt_double(pf.eps) << "\n";
  os << "scan_resolution = " << pf.scan_resolution << "\n";
  os << "scan_refinements = " << pf.scan_refinements << "\n";
  os << "scan_tol = " << fmt_double(pf.scan_tol) << "\n";
  os << "output_dir = " << pf.output_dir << "\n";
  return os.str();
}

MeasureInstance to_instance(const ProblemFile& pf) {
  std::vector<AlgebraicScalar> m;
  try {
    m = parse_scalar_exprs({pf.matrix[0], pf.matrix[1], pf.matrix[2], pf.matrix[3]}, pf.field);
  } catch (const ParseError& e) {
    throw ProblemError(std::string("matrix: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ProblemError(std::string("matrix: ") + e.what(), 0);
  }
  if (!m[2].is_zero()) throw ProblemError("matrix must be upper triangular (lower-left entry 0)", 0);
  try {
    return make_instance(make_expanding_matrix(m[0], m[1], m[3]), make_digit_set(pf.digits), pf.tag);
  } catch (const std::invalid_argument& e) {
    throw ProblemError(e.what(), 0);
  }
}

ProblemFile from_instance(const MeasureInstance& inst) {
  ProblemFile pf;
  pf.tag = inst.tag;
  pf.matrix = {inst.M.rho1_inv.str(), inst.M.c.str(), "0", inst.M.rho2_inv.str()};
  if (!inst.M.field().is_rational()) pf.field = inst.M.field();
  pf.digits = inst.D.digits;
  pf.p = inst.D.p;
  return pf;
}

ScanOptions scan_options(const ProblemFile& pf) {
  ScanOptions o;
  o.resolution = pf.scan_resolution;
  o.refinements = pf.scan_refinements;
  o.tol = pf.scan_tol;
  return o;
}

}  // namespace affspec
