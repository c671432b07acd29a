#include "qal/dyadic.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qal {

Precision::Precision(int b) : bits(b) {
    if (b < 1) throw std::invalid_argument("precision must be at least one bit");
}

Dyadic::Dyadic(long long v) : m_(static_cast<long>(v)), e_(0) {
    if constexpr (sizeof(long) < sizeof(long long)) {
        m_ = mpz_class(std::to_string(v));
    }
    canonicalize();
}

Dyadic::Dyadic(mpz_class mantissa, std::int64_t exponent) : m_(std::move(mantissa)), e_(exponent) {
    canonicalize();
}

Dyadic Dyadic::ratio(long long num, std::int64_t k) { return Dyadic(num).scaled(-k); }

Dyadic Dyadic::from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
    int ex = 0;
    double frac = std::frexp(v, &ex);
    // frac has at most 53 significant bits
    auto scaled = static_cast<long long>(std::ldexp(frac, 53));
    return Dyadic(scaled).scaled(ex - 53);
}

void Dyadic::canonicalize() {
    if (m_ == 0) {
        e_ = 0;
        return;
    }
    mp_bitcnt_t tz = mpz_scan1(m_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_tdiv_q_2exp(m_.get_mpz_t(), m_.get_mpz_t(), tz);
        e_ += static_cast<std::int64_t>(tz);
    }
}

Dyadic Dyadic::abs() const {
    Dyadic r = *this;
    mpz_abs(r.m_.get_mpz_t(), r.m_.get_mpz_t());
    return r;
}

Dyadic Dyadic::scaled(std::int64_t k) const {
    Dyadic r = *this;
    if (!r.is_zero()) r.e_ += k;
    return r;
}

double Dyadic::to_double() const {
    long ex = 0;
    double d = mpz_get_d_2exp(&ex, m_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(ex + e_));
}

mpq_class Dyadic::to_mpq() const {
    mpq_class q(m_);
    if (e_ > 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e_));
    } else if (e_ < 0) {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e_));
    }
    return q;
}

std::string Dyadic::str() const {
    if (e_ == 0) return m_.get_str();
    return m_.get_str() + "*2^" + std::to_string(e_);
}

std::string Dyadic::decimal(int frac_digits) const {
    if (e_ >= 0) {
        mpz_class v = m_;
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(e_));
        return v.get_str();
    }
    // m / 2^k = m * 5^k / 10^k
    auto k = static_cast<unsigned long>(-e_);
    mpz_class a = abs().m_;
    mpz_class five;
    mpz_ui_pow_ui(five.get_mpz_t(), 5, k);
    a *= five;
    std::string digits = a.get_str();
    if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
    std::string ip = digits.substr(0, digits.size() - k);
    std::string fp = digits.substr(digits.size() - k);
    bool truncated = false;
    if (frac_digits >= 0 && fp.size() > static_cast<std::size_t>(frac_digits)) {
        truncated = true;
        fp.resize(static_cast<std::size_t>(frac_digits));
    }
    std::string out = (sign() < 0 ? "-" : "") + ip;
    if (!fp.empty()) out += "." + fp;
    if (truncated) out += "(+-1e-" + std::to_string(frac_digits) + ")";
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

mpz_class parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::string t = (s[0] == '+') ? s.substr(1) : s;
    mpz_class v;
    if (t.empty() || v.set_str(t, 10) != 0) throw std::invalid_argument("bad integer: " + s);
    return v;
}

mpq_class parse_rational(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    auto star = s.find('*');
    if (star != std::string::npos) {
        std::string rest = s.substr(star + 1);
        if (rest.rfind("2^", 0) != 0) throw std::invalid_argument("expected m*2^e: " + s);
        std::string ex = rest.substr(2);
        if (!ex.empty() && ex.front() == '(' && ex.back() == ')') ex = ex.substr(1, ex.size() - 2);
        mpz_class m = parse_int(trim(s.substr(0, star)));
        long long e = std::stoll(ex);
        return Dyadic(m, e).to_mpq();
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class p = parse_int(trim(s.substr(0, slash)));
        mpz_class q = parse_int(trim(s.substr(slash + 1)));
        if (q == 0) throw std::invalid_argument("zero denominator");
        mpq_class r(p, q);
        r.canonicalize();
        return r;
    }
    // decimal with optional exponent
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long long ex10 = 0;
    if (epos != std::string::npos) {
        std::size_t used = 0;
        std::string es = s.substr(epos + 1);
        ex10 = std::stoll(es, &used);
        if (used != es.size()) throw std::invalid_argument("bad exponent: " + s);
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        neg = mant[0] == '-';
        mant = mant.substr(1);
    }
    auto dot = mant.find('.');
    std::string ip = mant.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : mant.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw std::invalid_argument("bad number: " + s);
    for (char ch : ip + fp) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad number: " + s);
    }
    mpz_class num(ip + fp == "" ? "0" : ip + fp, 10);
    ex10 -= static_cast<long long>(fp.size());
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(ex10 < 0 ? -ex10 : ex10));
    mpq_class r = ex10 >= 0 ? mpq_class(num * ten_pow) : mpq_class(num, ten_pow);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

// floor(q * 2^bits) etc. as a Dyadic in D_bits
Dyadic round_rational(const mpq_class& q, int bits, Rounding dir) {
    mpz_class num = q.get_num();
    mpz_class den = q.get_den();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    mpz_class k;
    switch (dir) {
        case Rounding::down: mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
        case Rounding::up: mpz_cdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
        case Rounding::nearest: {
            mpz_class n2 = 2 * num + den;
            mpz_class d2 = 2 * den;
            mpz_fdiv_q(k.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
            break;
        }
    }
    return Dyadic(k, -bits);
}

}  // namespace

Dyadic Dyadic::parse(std::string_view text) {
    mpq_class q = parse_rational(text);
    const mpz_class& den = q.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1) {
        throw std::invalid_argument("not a dyadic rational: " + std::string(text));
    }
    auto k = static_cast<std::int64_t>(mpz_scan1(den.get_mpz_t(), 0));
    return Dyadic(q.get_num(), -k);
}

Dyadic Dyadic::parse_rounded(std::string_view text, int bits, bool* exact) {
    mpq_class q = parse_rational(text);
    const mpz_class& den = q.get_den();
    if (mpz_popcount(den.get_mpz_t()) == 1) {
        auto k = static_cast<std::int64_t>(mpz_scan1(den.get_mpz_t(), 0));
        if (exact) *exact = true;
        return Dyadic(q.get_num(), -k);
    }
    if (exact) *exact = false;
    return round_rational(q, bits, Rounding::nearest);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Dyadic r;
    if (a.e_ == b.e_) {
        r.m_ = a.m_ + b.m_;
        r.e_ = a.e_;
    } else if (a.e_ > b.e_) {
        mpz_mul_2exp(r.m_.get_mpz_t(), a.m_.get_mpz_t(), static_cast<mp_bitcnt_t>(a.e_ - b.e_));
        r.m_ += b.m_;
        r.e_ = b.e_;
    } else {
        mpz_mul_2exp(r.m_.get_mpz_t(), b.m_.get_mpz_t(), static_cast<mp_bitcnt_t>(b.e_ - a.e_));
        r.m_ += a.m_;
        r.e_ = a.e_;
    }
    r.canonicalize();
    return r;
}

Dyadic operator-(const Dyadic& a) {
    Dyadic r = a;
    mpz_neg(r.m_.get_mpz_t(), r.m_.get_mpz_t());
    return r;
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    Dyadic r;
    if (a.is_zero() || b.is_zero()) return r;
    r.m_ = a.m_ * b.m_;  // product of odd numbers is odd
    r.e_ = a.e_ + b.e_;
    return r;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::strong_ordering::equal;
    int c;
    if (a.e_ == b.e_) {
        c = cmp(a.m_, b.m_);
    } else if (a.e_ > b.e_) {
        mpz_class t;
        mpz_mul_2exp(t.get_mpz_t(), a.m_.get_mpz_t(), static_cast<mp_bitcnt_t>(a.e_ - b.e_));
        c = cmp(t, b.m_);
    } else {
        mpz_class t;
        mpz_mul_2exp(t.get_mpz_t(), b.m_.get_mpz_t(), static_cast<mp_bitcnt_t>(b.e_ - a.e_));
        c = cmp(a.m_, t);
    }
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

Dyadic dy_add(const Dyadic& a, const Dyadic& b) { return a + b; }
Dyadic dy_mul(const Dyadic& a, const Dyadic& b) { return a * b; }

Dyadic dy_round(const Dyadic& a, std::int64_t m, Rounding dir) {
    if (a.in_D(m)) return a;
    auto shift = static_cast<mp_bitcnt_t>(-m - a.exponent());
    mpz_class k;
    switch (dir) {
        case Rounding::down: mpz_fdiv_q_2exp(k.get_mpz_t(), a.mantissa().get_mpz_t(), shift); break;
        case Rounding::up: mpz_cdiv_q_2exp(k.get_mpz_t(), a.mantissa().get_mpz_t(), shift); break;
        case Rounding::nearest: {
            // mantissa is odd here, so a tie is impossible unless shift == 1; ties go up
            mpz_class t = a.mantissa();
            mpz_class half;
            mpz_setbit(half.get_mpz_t(), shift - 1);
            t += half;
            mpz_fdiv_q_2exp(k.get_mpz_t(), t.get_mpz_t(), shift);
            break;
        }
    }
    return Dyadic(k, -m);
}

Dyadic dy_div(const Dyadic& a, const Dyadic& b, std::int64_t m, Rounding dir) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (a.is_zero()) return Dyadic();
    std::int64_t s = a.exponent() - b.exponent() + m;
    mpz_class num = a.mantissa();
    mpz_class den = b.mantissa();
    if (s >= 0) {
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    } else {
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    mpz_class k;
    switch (dir) {
        case Rounding::down: mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
        case Rounding::up: mpz_cdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
        case Rounding::nearest: {
            mpz_class n2 = 2 * num + den;
            mpz_class d2 = 2 * den;
            mpz_fdiv_q(k.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
            break;
        }
    }
    return Dyadic(k, -m);
}

Dyadic dy_midpoint(const Dyadic& a, const Dyadic& b) { return (a + b).scaled(-1); }

Dyadic dy_pow2(std::int64_t k) { return Dyadic(mpz_class(1), k); }

const Dyadic& dy_min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
const Dyadic& dy_max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

std::int64_t dy_ceil_log2(const Dyadic& a) {
    if (a.is_zero()) throw std::domain_error("log2 of zero");
    mpz_class m = abs(a.mantissa());
    auto bits = static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
    // 2^(bits-1) <= m < 2^bits; m odd so m == 2^(bits-1) only when m == 1
    std::int64_t k = (m == 1) ? 0 : bits;
    return k + a.exponent();
}

std::int64_t dy_floor_log2(const Dyadic& a) {
    if (a.is_zero()) throw std::domain_error("log2 of zero");
    mpz_class m = abs(a.mantissa());
    auto bits = static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
    return bits - 1 + a.exponent();
}

}  // namespace qal
