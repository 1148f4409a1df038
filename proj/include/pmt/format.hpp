#pragma once

#include <string>

namespace pmt {

// Shortest decimal string that parses back to the same double.
// Infinities print as "inf" / "-inf", NaN as "nan".
std::string format_double(double v);

}  // namespace pmt
