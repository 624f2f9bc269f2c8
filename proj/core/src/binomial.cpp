#include "glsim/binomial.hpp"

#include <cmath>
#include <vector>

#include "glsim/errors.hpp"

namespace glsim {

BigInt binomial_coefficient(int64_t n, int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (int64_t i = 0; i < k; ++i) {
        c *= n - i;
        c /= i + 1;
    }
    return c;
}

Rational binomial_tail_geq(int64_t n, const BigInt& k, const Rational& p) {
    if (n < 0) throw domain_error("binomial tail needs n >= 0");
    if (p < 0 || p > 1) throw domain_error("binomial tail needs p in [0,1]");
    if (k <= 0) return 1;
    if (k > n) return 0;
    int64_t k0 = k.convert_to<int64_t>();
    BigInt pn = numerator(p);
    BigInt pd = denominator(p);
    BigInt qn = pd - pn;
    // sum_{j=k}^{n} C(n,j) pn^j qn^(n-j) / pd^n
    std::vector<BigInt> p_pow(size_t(n) + 1), q_pow(size_t(n) + 1);
    p_pow[0] = q_pow[0] = 1;
    for (int64_t i = 1; i <= n; ++i) {
        p_pow[size_t(i)] = p_pow[size_t(i - 1)] * pn;
        q_pow[size_t(i)] = q_pow[size_t(i - 1)] * qn;
    }
    BigInt num = 0;
    for (int64_t j = k0; j <= n; ++j) {
        num += binomial_coefficient(n, j) * p_pow[size_t(j)] * q_pow[size_t(n - j)];
    }
    BigInt den = 1;
    for (int64_t i = 0; i < n; ++i) den *= pd;
    return Rational(num, den);
}

Interval wilson_interval(int64_t successes, int64_t trials, double z) {
    if (trials <= 0) throw domain_error("Wilson interval needs trials >= 1");
    double n = double(trials);
    double phat = double(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return Interval{center - half, center + half};
}

}  // namespace glsim
