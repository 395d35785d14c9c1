#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "affspec/numerics.hpp"
#include "affspec/problem_file.hpp"

namespace affspec {

using Json = nlohmann::ordered_json;

struct RunOptions {
  std::string family = "truncation";  // truncation | infinite | graded | p-element
  unsigned n = 2;
  int grid = 16;
  std::optional<Window> window;
  std::optional<unsigned> kmax;
  std::optional<unsigned> radius;
  std::optional<unsigned> seed_graded;  // clique: add graded_family(N) to the pool
  unsigned depth = 4;
  int width = 512;
  int height = 512;
  bool heat = false;
  unsigned site_depth = 3;
  std::optional<std::string> output_dir;
  bool write_files = true;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 Unsupported, 1 error
  Json report;
  std::string text;
};

// Commands: zeros classify construct hadamard qscan clique render all.
RunResult run_command(const std::string& command, const ProblemFile& pf, const RunOptions& opts = {});

std::string pretty(const Json& report);

}  // namespace affspec
