#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace toeplitz {

// Exact rational arithmetic for metric values. The product metric sums
// dyadic terms 2^-|n| out to the window radius, so denominators routinely
// exceed machine range; cpp_rational keeps every comparison exact.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

}  // namespace toeplitz
