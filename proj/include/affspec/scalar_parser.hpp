#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "affspec/exact_scalar.hpp"

namespace affspec {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// scalar := term (('+'|'-') term)*
// term := rational ('*' radical)? | radical
// radical := '(' rational ')' '^' '(' int '/' int ')'
AlgebraicScalar parse_scalar_expr(const std::string& text);

// Parses several expressions into one common field.  With `field` given, every
// radical must be expressible over it; otherwise the field is picked from the
// radicals that occur (highest degree first).
std::vector<AlgebraicScalar> parse_scalar_exprs(const std::vector<std::string>& texts,
                                                const std::optional<RootBase>& field = std::nullopt);

// "(t/s)^(1/r)" or a rational.
RootBase parse_root_base(const std::string& text);

}  // namespace affspec
