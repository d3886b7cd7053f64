#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <string>

#include <gmpxx.h>

namespace liesym {

/// Exact arbitrary-precision rational, always stored reduced with a positive
/// denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}
    Rational(int v) : v_(v) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "p", "-p", "p/q".
    static Rational parse(const std::string& text);

    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// Integer power; negative exponents invert (throws on 0^-k).
    Rational pow(long k) const;

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    /// Largest integer not above this value.
    Rational floor() const;

    /// Nearest double, ties to even.
    double to_double() const;
    std::string str() const { return v_.get_str(); }
    std::size_t hash() const;

private:
    mpq_class v_{0};
};

/// Small exact fraction used inside exponents. Overflow throws.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Frac() = default;
    constexpr Frac(std::int64_t n) : num(n) {}
    Frac(std::int64_t n, std::int64_t d);

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    Frac operator-() const { return Frac(-num, den); }
    friend Frac operator+(const Frac& a, const Frac& b);
    friend Frac operator-(const Frac& a, const Frac& b) { return a + (-b); }
    friend Frac operator*(const Frac& a, const Frac& b);
    friend Frac operator/(const Frac& a, const Frac& b);
    friend bool operator==(const Frac&, const Frac&) = default;
    friend std::strong_ordering operator<=>(const Frac& a, const Frac& b);

    /// Largest integer not above this value.
    std::int64_t floor() const;
    Rational to_rational() const { return Rational(static_cast<long>(num), static_cast<long>(den)); }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

}  // namespace liesym
