#pragma once

#include <stdexcept>
#include <string>

#include "system.hpp"

namespace hvf {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

// Parses the vector-field DSL:
//   system := "dim" INT ";" field (";" field)* [";" "step" INT]
//   field  := NAME "=" sum of scalar-expression * D<i> terms
// Whitespace-insensitive; "#" starts a comment.
VectorFieldSystem parse_system(const std::string& source);

// Parses a pure scalar expression (no D symbols) over x1..xn.
Expr parse_expression(const std::string& source, int n);

}  // namespace hvf
