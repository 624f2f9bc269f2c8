#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "glsim/errors.hpp"

namespace glsim {

// All game values, distribution weights and thresholds are exact rationals.
// Floating point appears only in Monte Carlo estimators.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p/q", plain integers, and decimal literals ("0.1" -> 1/10).
Rational parse_rational(const std::string& text);

// Smallest integer >= r.
BigInt ceil_rational(const Rational& r);

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

}  // namespace glsim
