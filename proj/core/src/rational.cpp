#include "glsim/rational.hpp"

#include <cctype>

namespace glsim {

namespace {

bool is_integer_text(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw domain_error("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_integer_text(num) || !is_integer_text(den)) {
            throw domain_error("bad rational literal: " + text);
        }
        BigInt d{den};
        if (d == 0) throw domain_error("zero denominator: " + text);
        return Rational(BigInt(num), d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!is_integer_text(whole) || (!frac.empty() && !is_integer_text(frac))) {
            throw domain_error("bad rational literal: " + text);
        }
        BigInt scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt wpart{whole};
        BigInt fpart = frac.empty() ? BigInt(0) : BigInt(frac);
        BigInt num = wpart * scale + (neg ? -fpart : fpart);
        return Rational(num, scale);
    }
    if (!is_integer_text(text)) throw domain_error("bad rational literal: " + text);
    return Rational(BigInt(text));
}

BigInt ceil_rational(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);  // always > 0 after normalization
    BigInt q = num / den;
    if (num > 0 && q * den != num) ++q;
    return q;
}

}  // namespace glsim
