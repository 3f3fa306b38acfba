#pragma once

#include <string>

namespace c2pl {

/// Shortest decimal text that reads back to exactly v, always containing a
/// '.' so that both C and Prolog readers see a floating literal. Infinite
/// and NaN values yield "inf", "-inf" and "nan".
std::string formatDouble(double v);

}  // namespace c2pl
