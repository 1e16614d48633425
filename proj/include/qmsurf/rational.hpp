#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmsurf {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

inline Integer abs_int(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(Integer x, Integer y) {
    x = abs_int(x);
    y = abs_int(y);
    while (y != 0) {
        Integer r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

inline Integer lcm(const Integer& x, const Integer& y) {
    if (x == 0 || y == 0) return 0;
    return abs_int(x / gcd(x, y) * y);
}

/// Floor division for signed integers (cpp_int `/` truncates toward zero).
inline Integer floor_div(const Integer& x, const Integer& y) {
    Integer q = x / y;
    Integer r = x - q * y;
    if (r != 0 && ((r < 0) != (y < 0))) --q;
    return q;
}

inline Integer mod_floor(const Integer& x, const Integer& m) {
    Integer r = x % m;
    if (r < 0) r += abs_int(m);
    return r;
}

inline Integer isqrt(const Integer& n) {
    if (n < 0) throw std::domain_error("isqrt of negative integer");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    return r * r == n;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Integer n, const Integer& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Distinct prime divisors of |n| in ascending order (trial division).
inline std::vector<Integer> prime_divisors(Integer n) {
    std::vector<Integer> primes;
    n = abs_int(n);
    if (n < 2) return primes;
    for (Integer p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    auto ps = prime_divisors(n);
    return ps.size() == 1 && ps.front() == n;
}

/// "p/q" (or "p" when the denominator is 1).
inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline std::string to_string(const Integer& z) { return z.str(); }

/// Parses "p", "p/q", or a terminating decimal such as "-0.25".
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) -> Integer {
        if (s.empty()) fail();
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) fail();
        for (std::size_t k = i; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9') fail();
        Integer v(std::string(s.substr(i)));
        return s[0] == '-' ? Integer(-v) : v;
    };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer d = parse_int(text.substr(slash + 1));
        if (d == 0) fail();
        return Rational(parse_int(text.substr(0, slash)), d);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole == "-" || whole == "+" || whole.empty()) whole = "0";
        Integer w = parse_int(whole);
        Integer scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        Integer f = frac.empty() ? Integer(0) : parse_int(frac);
        if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) fail();
        Integer n = abs_int(w) * scale + f;
        return Rational(negative || w < 0 ? Integer(-n) : n, scale);
    }
    return Rational(parse_int(text));
}

}  // namespace qmsurf
