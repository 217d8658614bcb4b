// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hexdiv {

// Exact rational coefficient type. Conversions from double are exact
// (a finite double is a dyadic rational), so construction-time algebra
// carries no rounding at all: identities that should be zero are the
// zero polynomial, not a small number.
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long n) { return Rat(n); }
inline Rat rat(long n, long d) { return Rat(n, d); }

inline Rat rat_from(double x) { return Rat(x); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace hexdiv
