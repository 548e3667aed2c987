#pragma once

// Arithmetic expressions in scenario files: numbers, exact rationals such as
// 50/101, named constants and parameters, combined with + - * / and
// parentheses. Results must be affine in the parameters.

#include "cap/model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cap {

using ConstantTable = std::map<std::string, double, std::less<>>;

AffineExpression parse_affine(std::string_view text, const std::vector<std::string>& parameters,
                              const ConstantTable& constants = {});

/// Parameter-free expression.
double parse_number(std::string_view text, const ConstantTable& constants = {});

} // namespace cap
