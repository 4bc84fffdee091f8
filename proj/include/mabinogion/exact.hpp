#pragma once

/**
 * @file exact.hpp
 * @brief Arbitrary-precision integers and rationals plus the small set of
 *        combinatorial primitives (binomial rows, central binomial
 *        probability) that every exact formula in this library is built on.
 *
 * All exact values are carried as boost::multiprecision::cpp_rational, which
 * keeps fractions reduced to lowest terms with a positive denominator, so
 * equality of values is equality of representations.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// 2^e as an exact integer, e >= 0.
inline BigInt pow2(long e) {
    if (e < 0) throw std::domain_error("pow2: negative exponent");
    return BigInt(1) << e;
}

/// Binomial coefficient C(n, k). Out-of-range k (k < 0 or k > n) gives 0.
inline BigInt binomial(long n, long k) {
    if (n < 0) throw std::domain_error("binomial: n must be nonnegative");
    if (k < 0 || k > n) return 0;
    if (2 * k > n) k = n - k;
    BigInt c = 1;
    for (long i = 1; i <= k; ++i) {
        c *= n - k + i;  // running value stays integral: it is C(n-k+i, i)
        c /= i;
    }
    return c;
}

/// Walks one row of Pascal's triangle without materializing factorials:
/// value() == C(n, index()), and advance() moves right one column.
class BinomRow {
  public:
    explicit BinomRow(long n) : n_(n) {
        if (n < 0) throw std::domain_error("BinomRow: negative row");
    }

    long row() const { return n_; }
    long index() const { return i_; }
    const BigInt& value() const { return value_; }

    /// C(n, i+1) = C(n, i) * (n - i) / (i + 1); the division is exact.
    void advance() {
        if (i_ >= n_) throw std::logic_error("BinomRow: advanced past end of row");
        value_ *= n_ - i_;
        ++i_;
        value_ /= i_;
    }

  private:
    long n_;
    long i_ = 0;
    BigInt value_ = 1;
};

/// In-row ratios C(n, i+1)/C(n, i) = (n - i)/(i + 1) for i = 0..n-1.
inline std::vector<Rat> binom_row_ratios(long n) {
    if (n < 0) throw std::domain_error("binom_row_ratios: negative row");
    std::vector<Rat> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.emplace_back(BigInt(n - i), BigInt(i + 1));
    return out;
}

/// Probability of exactly k heads in 2k fair coin flips: 2^{-2k} C(2k, k).
inline Rat central_prob(long k) {
    if (k < 0) throw std::domain_error("central_prob: k must be nonnegative");
    return Rat(binomial(2 * k, k), pow2(2 * k));
}

/// Nearest double to an exact rational (round half to even), within 1 ulp of
/// the true quotient by construction. Throws on overflow past double range.
inline double to_real(const Rat& x) {
    using boost::multiprecision::msb;
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    if (negative) num = -num;

    // Scale so the integer quotient q = floor(num/den) has 53 or 54 bits.
    long shift = 53 - (static_cast<long>(msb(num)) - static_cast<long>(msb(den)));
    if (shift > 0)
        num <<= shift;
    else if (shift < 0)
        den <<= -shift;

    BigInt q, r;
    boost::multiprecision::divide_qr(num, den, q, r);

    if (msb(q) >= 53) {
        // 54 significant bits: drop the lowest, rounding half to even.
        const bool low = boost::multiprecision::bit_test(q, 0);
        q >>= 1;
        shift -= 1;
        if (low && (r != 0 || boost::multiprecision::bit_test(q, 0))) ++q;
    } else {
        // 53 bits: round on the remainder alone.
        const BigInt twice = 2 * r;
        if (twice > den || (twice == den && boost::multiprecision::bit_test(q, 0))) ++q;
    }

    double result = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    if (std::isinf(result)) throw std::overflow_error("to_real: value exceeds double range");
    return negative ? -result : result;
}

/// Base-10 integer parser (cpp_int's string constructor treats a leading
/// zero as an octal prefix, which is wrong for decimal fragments like "05").
inline BigInt parse_decimal_integer(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_decimal_integer: empty string");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size()) throw std::invalid_argument("parse_decimal_integer: no digits");
    BigInt value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c < '0' || c > '9')
            throw std::invalid_argument("parse_decimal_integer: invalid digit");
        value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
}

/// Parses "p/q", a plain integer, or a decimal literal ("0.75") exactly.
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_decimal_integer(text.substr(0, slash));
        BigInt den = parse_decimal_integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rat(parse_decimal_integer(text));
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty()) return Rat(parse_decimal_integer(whole));
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool negative = !whole.empty() && whole[0] == '-';
    BigInt num = parse_decimal_integer(whole.empty() || whole == "-" || whole == "+" ? "0" : whole);
    if (negative) num = -num;
    num = num * den + parse_decimal_integer(frac);
    return Rat(negative ? -num : num, den);
}

/// Ceiling of num/den for positive den.
inline BigInt ceil_div(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw std::domain_error("ceil_div: denominator must be positive");
    BigInt q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r > 0) ++q;
    return q;
}

/// Ceiling of an exact rational.
inline BigInt ceil_rat(const Rat& x) {
    return ceil_div(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

}  // namespace mab
