#include "liesym/rational.hpp"

#include <limits>
#include <numeric>

#include <mpfr.h>

#include "liesym/error.hpp"

namespace liesym {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonMonomialDivisor: return "non-monomial divisor";
        case ErrorKind::SymbolicPowerSubstitution: return "symbolic-power substitution";
        case ErrorKind::NonlinearLeading: return "nonlinear in leading derivative";
        case ErrorKind::UnsupportedFieldShape: return "unsupported field shape";
        case ErrorKind::ResidualOldVariable: return "residual old variable";
        case ErrorKind::UnderdeterminedDecomposition: return "underdetermined decomposition";
        case ErrorKind::UnboundParameter: return "unbound parameter";
        case ErrorKind::NonlinearHighest: return "nonlinear in highest derivative";
        case ErrorKind::Declaration: return "declaration error";
        case ErrorKind::Syntax: return "syntax error";
        case ErrorKind::Domain: return "domain error";
    }
    return "error";
}

Rational::Rational(long num, long den) {
    if (den == 0) throw Error(ErrorKind::Domain, "zero denominator");
    v_ = mpq_class(mpz_class(num), mpz_class(den));
    v_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw Error(ErrorKind::Syntax, "bad rational literal '" + text + "'");
    if (q.get_den() == 0) throw Error(ErrorKind::Domain, "zero denominator");
    return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::Domain, "division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::pow(long k) const {
    if (k < 0) {
        if (is_zero()) throw Error(ErrorKind::Domain, "zero to a negative power");
        return Rational(1) / pow(-k);
    }
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(k));
    return Rational(mpq_class(n, d));
}

double Rational::to_double() const {
    mpfr_t f;
    mpfr_init2(f, 53);
    mpfr_set_q(f, v_.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(f, MPFR_RNDN);
    mpfr_clear(f);
    return d;
}

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

std::size_t Rational::hash() const {
    std::size_t h = mpz_get_ui(v_.get_num_mpz_t());
    h = h * 1000003u ^ mpz_get_ui(v_.get_den_mpz_t());
    return h * 31u + static_cast<std::size_t>(sgn(v_) + 1);
}

namespace {

std::int64_t checked(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorKind::Domain, "exponent arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Frac::Frac(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error(ErrorKind::Domain, "zero denominator in exponent");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

Frac operator+(const Frac& a, const Frac& b) {
    if (a.den == 1 && b.den == 1) return Frac(checked(static_cast<__int128>(a.num) + b.num), 1);
    __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    __int128 g = gcd128(n, d);
    if (g == 0) g = 1;
    return Frac(checked(n / g), checked(d / g));
}

Frac operator*(const Frac& a, const Frac& b) {
    __int128 n = static_cast<__int128>(a.num) * b.num;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    __int128 g = gcd128(n, d);
    if (g == 0) g = 1;
    return Frac(checked(n / g), checked(d / g));
}

Frac operator/(const Frac& a, const Frac& b) {
    if (b.num == 0) throw Error(ErrorKind::Domain, "division by zero in exponent");
    return a * Frac(b.den, b.num);
}

std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
    __int128 l = static_cast<__int128>(a.num) * b.den;
    __int128 r = static_cast<__int128>(b.num) * a.den;
    return l <=> r;
}

std::int64_t Frac::floor() const {
    std::int64_t q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
}

std::string Frac::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace liesym
