#include "lll/rational.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace lll {

Rational parse_rational(const std::string& text) {
    auto bad = [&] { throw ValidationError("invalid rational literal: '" + text + "'"); };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text));
        }
        if (slash == 0 || slash + 1 >= text.size()) bad();
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den <= 0) bad();
        return Rational(num, den);
    } catch (const std::exception&) {
        bad();
    }
    return Rational(0);  // unreachable
}

std::string format_rational(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string format_decimal(const Rational& q, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, to_double(q));
    return buf;
}

double to_double(const Rational& q) {
    return q.convert_to<double>();
}

namespace {

double log_integer(const Integer& x) {
    // Direct conversion overflows past ~1e308; shift down and add back k*log 2.
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits < 900) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 512;
    const Integer scaled = x >> shift;
    return std::log(scaled.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

}  // namespace

double log_rational(const Rational& q) {
    if (q <= 0) throw ValidationError("log_rational requires a positive value");
    return log_integer(numerator(q)) - log_integer(denominator(q));
}

Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Integer result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

Rational pow_rational(const Rational& base, unsigned exp) {
    Rational result = 1;
    Rational b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

}  // namespace lll
