/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hafnia {

/// Exact scalar mode: arbitrary-precision rational, always canonical
/// (reduced, positive denominator). Float mode is plain double; a
/// computation runs entirely in one mode.
using Rational = mpq_class;

struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static const char* name() { return "exact"; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static const char* name() { return "float"; }
};

template <typename T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign_of(const Rational& x) { return sgn(x); }
inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

inline Rational abs_of(const Rational& x) { return Rational(abs(x)); }
inline double abs_of(double x) { return std::fabs(x); }

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

inline bool is_finite(const Rational&) { return true; }
inline bool is_finite(double x) { return std::isfinite(x); }

/// Exact rational from a decimal token: "3", "-2.5", "1.25e2". The decimal
/// digits are taken literally, so "0.1" becomes 1/10, not the binary double.
inline Rational rational_from_decimal(const std::string& token) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < token.size() && (token[pos] == '+' || token[pos] == '-')) {
        neg = token[pos] == '-';
        ++pos;
    }
    mpz_class digits = 0;
    long frac_digits = 0;
    bool any_digit = false, in_frac = false;
    for (; pos < token.size(); ++pos) {
        char c = token[pos];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            if (in_frac) ++frac_digits;
            any_digit = true;
        } else if (c == '.') {
            if (in_frac) throw std::invalid_argument("bad decimal: " + token);
            in_frac = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw std::invalid_argument("bad decimal: " + token);
        }
    }
    if (!any_digit) throw std::invalid_argument("bad decimal: " + token);
    long exp10 = 0;
    if (pos < token.size()) {
        ++pos;  // past 'e'
        bool eneg = false;
        if (pos < token.size() && (token[pos] == '+' || token[pos] == '-')) {
            eneg = token[pos] == '-';
            ++pos;
        }
        if (pos == token.size()) throw std::invalid_argument("bad decimal: " + token);
        for (; pos < token.size(); ++pos) {
            char c = token[pos];
            if (c < '0' || c > '9') throw std::invalid_argument("bad decimal: " + token);
            exp10 = exp10 * 10 + (c - '0');
            if (exp10 > 1000000) throw std::invalid_argument("exponent out of range: " + token);
        }
        if (eneg) exp10 = -exp10;
    }
    long shift = exp10 - frac_digits;
    mpz_class num = digits, den = 1;
    if (shift >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        num *= p;
    } else {
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    }
    if (neg) num = -num;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Scalar token: either "p/q" or a decimal literal.
inline Rational parse_rational(const std::string& token) {
    auto slash = token.find('/');
    if (slash == std::string::npos) return rational_from_decimal(token);
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), token.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational: " + token);
    if (sgn(Rational(q.get_den())) == 0)
        throw std::invalid_argument("rational with zero denominator: " + token);
    q.canonicalize();
    return q;
}

inline std::string scalar_to_string(const Rational& x) { return x.get_str(); }

inline std::string scalar_to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace hafnia
