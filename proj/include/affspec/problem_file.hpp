#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "affspec/measure_model.hpp"
#include "affspec/zero_structure.hpp"

namespace affspec {

class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& msg, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// key = value lines, '#' starts a comment.
//   tag     = ex61
//   matrix  = 6, 3/4, 0, 6          (row-major scalar expressions)
//   digits  = (0,0) (1,0) (0,1)
//   p       = 3                     (optional, must equal the digit count)
//   field   = (5/1)^(1/2)           (optional common field)
// plus kmax, radius, eps, scan_resolution, scan_refinements, scan_tol, output_dir.
struct ProblemFile {
  std::string tag = "instance";
  std::array<std::string, 4> matrix;
  std::vector<IntVec2> digits;
  int p = 0;
  std::optional<RootBase> field;
  unsigned kmax = 3;
  unsigned radius = 2;
  double eps = 1e-10;
  int scan_resolution = 512;
  int scan_refinements = 4;
  double scan_tol = 1e-9;
  std::string output_dir = ".";
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string serialize(const ProblemFile& pf);

MeasureInstance to_instance(const ProblemFile& pf);
ProblemFile from_instance(const MeasureInstance& inst);
ScanOptions scan_options(const ProblemFile& pf);

}  // namespace affspec
