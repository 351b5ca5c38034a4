#pragma once

#include <string>

#include "cdh/weyl.hpp"

namespace cdh {

/// Parses an operator expression into normal order.
///
///   expr    := ['-'] term (('+' | '-') term)*
///   term    := factor (['*'] factor)*        juxtaposition composes
///   factor  := primary ['^' integer]
///   primary := 'z' | 'd' | 'A' | 'B' | 'C' | 'X' | 'Y' | rational | '(' expr ')'
///   rational:= digits ['/' digits]
///
/// X and Y stand for build_X() and build_Y(). ArgumentError with the
/// offending position on malformed input.
WeylOperator parse_weyl_expression(const std::string& text);

}  // namespace cdh
