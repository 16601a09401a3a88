#pragma once

#include <string>

namespace orbsim {

// Every float the simulator writes goes through these: 9 significant digits.
std::string fmt9(double value);
double round9(double value);

}  // namespace orbsim
