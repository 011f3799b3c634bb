#pragma once

namespace qmcopt {

// Standard normal CDF evaluated in 256-bit arithmetic and rounded to
// double. Test and acceptance oracle only; the library itself never calls
// into multiprecision code.
double normal_cdf_highprec(double x);

}  // namespace qmcopt
