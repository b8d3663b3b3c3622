#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace prgkit {

// Exact arithmetic for acceptance probabilities and fooling errors.
// Everything on the exact measurement path is a ratio of big integers;
// doubles appear only in reports.
using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline rational rational_pow2(const bigint& numerator, unsigned pow2_exponent) {
    return rational(numerator, bigint(1) << pow2_exponent);
}

inline double to_double(const rational& r) { return r.template convert_to<double>(); }

inline std::string fraction_string(const rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline rational rational_abs(const rational& r) { return r < 0 ? rational(-r) : r; }

}  // namespace prgkit
