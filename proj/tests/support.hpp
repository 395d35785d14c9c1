#pragma once

#include <random>
#include <string>

#include "affspec/problem_file.hpp"

namespace testing_support {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline affspec::Rational random_rational(long num = 12, long den = 9) {
  long d = uniform(1, den);
  return affspec::Rational(affspec::BigInt(uniform(-num, num)), affspec::BigInt(d));
}

inline affspec::MeasureInstance fixture(const std::string& name) {
  return affspec::to_instance(affspec::load_problem(std::string(FIXTURE_DIR) + "/" + name + ".txt"));
}

}  // namespace testing_support
