#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "germdet/jet.hpp"

namespace germdet {

// Accepts sums of terms such as `x^2*y + 3*y^4 - 1/2*x^5`. Terms of degree
// above the cap are dropped. Errors: ParseError (with column), UnknownVariable.
Jet parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                     const JetContext& ctx);

// Ascending total degree; within a degree the first variable leads.
std::string format_polynomial(const Jet& f, const std::vector<std::string>& vars);

// Splits "a,b;c,d" style lists at top level, trimming whitespace.
std::vector<std::string> split_list(std::string_view text, char sep);

// Default names x, y, z, w, then x4, x5, ...
std::vector<std::string> default_variable_names(int nvars);

}  // namespace germdet
