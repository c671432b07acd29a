#include "qal/interval.hpp"

#include <array>
#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qal {

DyadicInterval::DyadicInterval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw std::invalid_argument("interval with lo > hi: " + lo_.str() + " " + hi_.str());
}

Dyadic DyadicInterval::mag() const { return dy_max(lo_.abs(), hi_.abs()); }

Dyadic DyadicInterval::mig() const {
    if (contains_zero()) return Dyadic();
    return dy_min(lo_.abs(), hi_.abs());
}

DyadicInterval DyadicInterval::abs() const {
    if (lo_.sign() >= 0) return *this;
    if (hi_.sign() <= 0) return {-hi_, -lo_};
    return {Dyadic(), mag()};
}

std::optional<int> DyadicInterval::certain_sign() const {
    if (lo_.sign() > 0) return 1;
    if (hi_.sign() < 0) return -1;
    if (lo_.is_zero() && hi_.is_zero()) return 0;
    return std::nullopt;
}

std::string DyadicInterval::str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

std::ostream& operator<<(std::ostream& os, const DyadicInterval& x) {
    return os << "[" << x.lo().to_double() << ", " << x.hi().to_double() << "]";
}

Sign sign_of(const DyadicInterval& x) {
    auto s = x.certain_sign();
    if (!s) return Sign::undecided;
    if (*s > 0) return Sign::pos;
    if (*s < 0) return Sign::neg;
    return Sign::zero;
}

Sign negate(Sign s) {
    if (s == Sign::pos) return Sign::neg;
    if (s == Sign::neg) return Sign::pos;
    return s;
}

DyadicInterval hull(const DyadicInterval& a, const DyadicInterval& b) {
    return {dy_min(a.lo(), b.lo()), dy_max(a.hi(), b.hi())};
}

std::optional<DyadicInterval> intersect(const DyadicInterval& a, const DyadicInterval& b) {
    const Dyadic& lo = dy_max(a.lo(), b.lo());
    const Dyadic& hi = dy_min(a.hi(), b.hi());
    if (hi < lo) return std::nullopt;
    return DyadicInterval(lo, hi);
}

DyadicInterval round_out(const DyadicInterval& x, const Precision& p) {
    return {dy_round(x.lo(), p.bits, Rounding::down), dy_round(x.hi(), p.bits, Rounding::up)};
}

DyadicInterval inflate(const DyadicInterval& x, const Dyadic& r) { return {x.lo() - r, x.hi() + r}; }

DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, const Precision& p) {
    return round_out({a.lo() + b.lo(), a.hi() + b.hi()}, p);
}

DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, const Precision& p) {
    return round_out({a.lo() - b.hi(), a.hi() - b.lo()}, p);
}

DyadicInterval iv_mul_exact(const DyadicInterval& a, const DyadicInterval& b) {
    if (a.lo().sign() >= 0 && b.lo().sign() >= 0) return {a.lo() * b.lo(), a.hi() * b.hi()};
    if (a.hi().sign() <= 0 && b.hi().sign() <= 0) return {a.hi() * b.hi(), a.lo() * b.lo()};
    std::array<Dyadic, 4> v{a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return {*mn, *mx};
}

DyadicInterval iv_sqr_exact(const DyadicInterval& a) {
    if (a.lo().sign() >= 0) return {a.lo() * a.lo(), a.hi() * a.hi()};
    if (a.hi().sign() <= 0) return {a.hi() * a.hi(), a.lo() * a.lo()};
    Dyadic m = a.mag();
    return {Dyadic(), m * m};
}

DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, const Precision& p) {
    return round_out(iv_mul_exact(a, b), p);
}

DyadicInterval iv_sqr(const DyadicInterval& a, const Precision& p) { return round_out(iv_sqr_exact(a), p); }

DyadicInterval iv_neg(const DyadicInterval& a) { return {-a.hi(), -a.lo()}; }

DyadicInterval iv_scale2(const DyadicInterval& a, std::int64_t k) { return {a.lo().scaled(k), a.hi().scaled(k)}; }

DyadicInterval iv_div(const DyadicInterval& a, const DyadicInterval& b, const Precision& p) {
    if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
    std::array<std::pair<const Dyadic*, const Dyadic*>, 4> q{
        std::pair{&a.lo(), &b.lo()}, std::pair{&a.lo(), &b.hi()}, std::pair{&a.hi(), &b.lo()},
        std::pair{&a.hi(), &b.hi()}};
    std::optional<Dyadic> lo, hi;
    for (auto [x, y] : q) {
        Dyadic d = dy_div(*x, *y, p.bits, Rounding::down);
        Dyadic u = dy_div(*x, *y, p.bits, Rounding::up);
        if (!lo || d < *lo) lo = d;
        if (!hi || *hi < u) hi = u;
    }
    return {*lo, *hi};
}

DyadicInterval iv_quad_step(const DyadicInterval& X, const DyadicInterval& C, const Precision& p) {
    DyadicInterval s = iv_sqr_exact(X);
    return round_out({s.lo() + C.lo(), s.hi() + C.hi()}, p);
}

DyadicInterval iv_deriv_enclosure(const DyadicInterval& X, const Precision& /*p*/) { return iv_scale2(X, 1); }

}  // namespace qal
