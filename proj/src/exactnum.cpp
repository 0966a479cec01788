#include "ising/exactnum.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace ising {

BigInterval::BigInterval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

BigInterval::BigInterval(const BigInterval& o) {
    mpfr_init2(lo_, o.precision());
    mpfr_init2(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

BigInterval& BigInterval::operator=(const BigInterval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.precision());
        mpfr_set_prec(hi_, o.precision());
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

BigInterval::~BigInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

double BigInterval::mid_double() const {
    mpfr_t m;
    mpfr_init2(m, precision() + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

bool BigInterval::contains(double x) const {
    return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
}

namespace {

std::string mpfr_text(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
    std::vector<char> buf(digits + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*R*g", digits, rnd, v);
    return std::string(buf.data());
}

} // namespace

std::string BigInterval::lo_str(int digits) const { return mpfr_text(lo_, digits, MPFR_RNDD); }
std::string BigInterval::hi_str(int digits) const { return mpfr_text(hi_, digits, MPFR_RNDU); }
std::string BigInterval::str(int digits) const { return "[" + lo_str(digits) + ", " + hi_str(digits) + "]"; }

int Scalar::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: whichever of a^2 and 7b^2 is larger wins
    int c = cmp(Rational(a_ * a_), Rational(7 * b_ * b_));
    if (c == 0) return 0;
    return c > 0 ? sa : sb;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (is_rational()) return Scalar(Rational(1 / a_));
    Rational n = norm();
    return Scalar(Rational(a_ / n), Rational(-b_ / n));
}

Scalar Scalar::pow(unsigned e) const {
    Scalar result(1), base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    a_ += o.a_;
    if (sgn(o.b_) != 0) b_ += o.b_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    a_ -= o.a_;
    if (sgn(o.b_) != 0) b_ -= o.b_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (sgn(o.b_) == 0) {
        a_ *= o.a_;
        if (sgn(b_) != 0) b_ *= o.a_;
        return *this;
    }
    if (sgn(b_) == 0) {
        b_ = a_ * o.b_;
        a_ *= o.a_;
        return *this;
    }
    Rational na = a_ * o.a_ + 7 * b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw DivisionByZero();
    if (o.is_rational()) {
        a_ /= o.a_;
        if (sgn(b_) != 0) b_ /= o.a_;
        return *this;
    }
    return *this *= o.inverse();
}

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string rational_str(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Scalar::str() const {
    if (is_rational()) return rational_str(a_);
    return rational_str(a_) + " + " + rational_str(b_) + "*sqrt7";
}

namespace {

std::string strip(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

bool valid_integer(std::string_view s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string s = strip(text);
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational: '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Scalar Scalar::parse(std::string_view text) {
    std::string s = strip(text);
    if (s.empty()) throw ParseError("empty scalar");
    const std::string tail = "*sqrt7";
    if (s.size() < tail.size() || s.compare(s.size() - tail.size(), tail.size(), tail) != 0)
        return Scalar(parse_rational(s));

    std::string body = s.substr(0, s.size() - tail.size());
    if (body.empty() || body.back() == '+' || body.back() == '-') body += "1";
    // split at the last '+' or '-' that is not a leading sign
    size_t cut = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != '+' && body[i - 1] != '-') {
            cut = i;
            break;
        }
    }
    if (cut == std::string::npos) return Scalar(Rational(0), parse_rational(body));
    Rational a = parse_rational(body.substr(0, cut));
    std::string bs = body.substr(cut);
    if (bs.size() > 1 && bs[0] == '+') bs.erase(0, 1);
    Rational b = parse_rational(bs);
    return Scalar(a, b);
}

BigInterval Scalar::to_interval(mpfr_prec_t precision_bits) const {
    if (precision_bits < 24) throw std::invalid_argument("precision_bits must be >= 24");
    BigInterval r(precision_bits);
    mpfr_set_q(r.lo(), a_.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi(), a_.get_mpq_t(), MPFR_RNDU);
    if (sgn(b_) == 0) return r;

    mpfr_t s_lo, s_hi, b_lo, b_hi, t;
    mpfr_inits2(precision_bits, s_lo, s_hi, b_lo, b_hi, t, (mpfr_ptr)nullptr);
    mpfr_sqrt_ui(s_lo, 7, MPFR_RNDD);
    mpfr_sqrt_ui(s_hi, 7, MPFR_RNDU);
    mpfr_set_q(b_lo, b_.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(b_hi, b_.get_mpq_t(), MPFR_RNDU);
    if (sgn(b_) > 0) {
        mpfr_mul(t, b_lo, s_lo, MPFR_RNDD);
        mpfr_add(r.lo(), r.lo(), t, MPFR_RNDD);
        mpfr_mul(t, b_hi, s_hi, MPFR_RNDU);
        mpfr_add(r.hi(), r.hi(), t, MPFR_RNDU);
    } else {
        mpfr_mul(t, b_lo, s_hi, MPFR_RNDD);
        mpfr_add(r.lo(), r.lo(), t, MPFR_RNDD);
        mpfr_mul(t, b_hi, s_lo, MPFR_RNDU);
        mpfr_add(r.hi(), r.hi(), t, MPFR_RNDU);
    }
    mpfr_clears(s_lo, s_hi, b_lo, b_hi, t, (mpfr_ptr)nullptr);
    return r;
}

Rational simplest_between(const Rational& lo_in, const Rational& hi_in) {
    Rational lo = lo_in, hi = hi_in;
    if (lo > hi) std::swap(lo, hi);
    if (lo <= 0 && hi >= 0) return Rational(0);
    bool neg = hi < 0;
    if (neg) {
        Rational t = -lo;
        lo = -hi;
        hi = t;
    }
    // continued-fraction descent; the convergents h/k are built bottom-up
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational x = lo, y = hi;
    while (true) {
        mpz_class fx = x.get_num() / x.get_den(); // floor for positive x
        if (Rational(fx) == x) {
            mpz_class h = fx * h1 + h0, k = fx * k1 + k0;
            Rational r(h, k);
            r.canonicalize();
            return neg ? Rational(-r) : r;
        }
        mpz_class fy = y.get_num() / y.get_den();
        if (fx < fy) {
            mpz_class a = fx + 1;
            mpz_class h = a * h1 + h0, k = a * k1 + k0;
            Rational r(h, k);
            r.canonicalize();
            return neg ? Rational(-r) : r;
        }
        mpz_class h = fx * h1 + h0, k = fx * k1 + k0;
        h0 = h1; h1 = h; k0 = k1; k1 = k;
        Rational nx = 1 / (y - fx), ny = 1 / (x - fx);
        x = nx;
        y = ny;
    }
}

} // namespace ising
