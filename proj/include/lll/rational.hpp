#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace lll {

// All analysis arithmetic is exact rational; floating point appears only in
// reporting, clearly separated (to_double / log_rational renderings).
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invariant violation while constructing variables, events, systems or inputs.
struct ValidationError : Error {
    using Error::Error;
};

// Parses "a/b" or "a" with optional sign; denominator must be positive.
Rational parse_rational(const std::string& text);

// Canonical "num/den" form, denominator always printed ("1/2", "0/1", "3/1").
std::string format_rational(const Rational& q);

// Decimal rendering to `significant` digits, for human-readable output.
std::string format_decimal(const Rational& q, int significant = 6);

double to_double(const Rational& q);

// Natural log of a positive rational, stable for values whose numerator or
// denominator exceeds double range.
double log_rational(const Rational& q);

Integer binomial(unsigned n, unsigned k);

Rational pow_rational(const Rational& base, unsigned exp);

}  // namespace lll
