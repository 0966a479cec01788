#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ising {

using Rational = mpq_class;

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Closed interval with MPFR endpoints, rounded outward.
class BigInterval {
public:
    explicit BigInterval(mpfr_prec_t prec);
    BigInterval(const BigInterval& o);
    BigInterval& operator=(const BigInterval& o);
    ~BigInterval();

    mpfr_ptr lo() { return lo_; }
    mpfr_ptr hi() { return hi_; }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_double() const;
    bool contains(double x) const;
    std::string str(int digits = 20) const;
    std::string lo_str(int digits = 20) const;
    std::string hi_str(int digits = 20) const;

private:
    mpfr_t lo_, hi_;
};

// a + b*sqrt(7) with rational a, b. Kept normalized: when b == 0 the value
// behaves as a plain Rational (kind() reports it as such).
class Scalar {
public:
    enum class Kind { rational, quadratic };

    Scalar() = default;
    Scalar(long v) : a_(v) {}
    Scalar(int v) : a_(v) {}
    Scalar(const Rational& a) : a_(a) { a_.canonicalize(); }
    Scalar(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }

    static Scalar sqrt7() { return Scalar(Rational(0), Rational(1)); }
    static Scalar parse(std::string_view text);

    Kind kind() const { return sgn(b_) == 0 ? Kind::rational : Kind::quadratic; }
    bool is_rational() const { return sgn(b_) == 0; }
    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    const Rational& rational_part() const { return a_; }
    const Rational& sqrt7_part() const { return b_; }

    int sign() const;
    Scalar conjugate() const { return Scalar(a_, -b_); }
    Rational norm() const { return a_ * a_ - 7 * b_ * b_; }
    Scalar inverse() const;
    Scalar pow(unsigned e) const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    Scalar operator-() const { return Scalar(-a_, -b_); }

    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
    friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

    // "p/q" or "p/q + r/s*sqrt7"
    std::string str() const;
    BigInterval to_interval(mpfr_prec_t precision_bits = 128) const;
    double to_double() const { return to_interval(64).mid_double(); }

private:
    Rational a_{0}, b_{0};
};

inline std::strong_ordering cmp(const Scalar& x, const Scalar& y) { return x <=> y; }

std::string rational_str(const Rational& q);
Rational parse_rational(std::string_view text);

// Simplest rational (smallest denominator) in the closed interval [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

} // namespace ising
