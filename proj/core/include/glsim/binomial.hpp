#pragma once

#include <cstdint>

#include "glsim/rational.hpp"

namespace glsim {

BigInt binomial_coefficient(int64_t n, int64_t k);

// Pr[Bin(n, p) >= k], exact.
Rational binomial_tail_geq(int64_t n, const BigInt& k, const Rational& p);

struct Interval {
    double low = 0;
    double high = 0;
    bool contains(double v) const { return v >= low && v <= high; }
};

// Wilson score interval for an observed proportion, z defaults to 95%.
Interval wilson_interval(int64_t successes, int64_t trials, double z = 1.959963984540054);

}  // namespace glsim
