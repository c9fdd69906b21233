#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fostab/vector_field.hpp"

namespace fostab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes: 0 success (any verdict), 2 usage/parse/config errors, 3 numeric failures.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Rounds to 12 significant digits, the precision used for every number the tool prints.
double round12(double v);

// D^0.8 x1 = 35(x2 - x1), D^1 x2 = -7 x1 - x1 x3 + 28 x2, D^0.9 x3 = x1 x2 - 3 x3
PolynomialVectorField chen_field();

}  // namespace fostab::cli
