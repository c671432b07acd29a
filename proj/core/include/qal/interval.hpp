#pragma once

#include "qal/dyadic.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace qal {

enum class Sign { neg, zero, pos, undecided };

class DyadicInterval {
public:
    DyadicInterval() = default;
    DyadicInterval(const Dyadic& point) : lo_(point), hi_(point) {}  // NOLINT
    DyadicInterval(Dyadic lo, Dyadic hi);

    const Dyadic& lo() const { return lo_; }
    const Dyadic& hi() const { return hi_; }
    Dyadic width() const { return hi_ - lo_; }
    Dyadic mid() const { return dy_midpoint(lo_, hi_); }
    Dyadic radius() const { return width().scaled(-1); }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const DyadicInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    // o inside the open interval (lo, hi)
    bool interior_contains(const DyadicInterval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
    bool overlaps(const DyadicInterval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
    // interiors meet (touching at one point does not count)
    bool interiors_overlap(const DyadicInterval& o) const { return lo_ < o.hi_ && o.lo_ < hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }

    // max |x| and min |x| over the interval
    Dyadic mag() const;
    Dyadic mig() const;
    DyadicInterval abs() const;

    // +1 / -1 when every element has that sign, 0 when the interval is exactly {0}, nullopt otherwise
    std::optional<int> certain_sign() const;

    std::string str() const;
    double width_double() const { return width().to_double(); }

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

private:
    Dyadic lo_;
    Dyadic hi_;
};

std::ostream& operator<<(std::ostream& os, const DyadicInterval& x);

Sign sign_of(const DyadicInterval& x);
Sign negate(Sign s);

DyadicInterval hull(const DyadicInterval& a, const DyadicInterval& b);
std::optional<DyadicInterval> intersect(const DyadicInterval& a, const DyadicInterval& b);
DyadicInterval round_out(const DyadicInterval& x, const Precision& p);
DyadicInterval inflate(const DyadicInterval& x, const Dyadic& r);

// Exact ring operations, followed by a single outward rounding at p.
DyadicInterval iv_add(const DyadicInterval& a, const DyadicInterval& b, const Precision& p);
DyadicInterval iv_sub(const DyadicInterval& a, const DyadicInterval& b, const Precision& p);
DyadicInterval iv_mul(const DyadicInterval& a, const DyadicInterval& b, const Precision& p);
DyadicInterval iv_sqr(const DyadicInterval& a, const Precision& p);
DyadicInterval iv_neg(const DyadicInterval& a);
DyadicInterval iv_scale2(const DyadicInterval& a, std::int64_t k);
// a / b with 0 not in b.
DyadicInterval iv_div(const DyadicInterval& a, const DyadicInterval& b, const Precision& p);

DyadicInterval iv_mul_exact(const DyadicInterval& a, const DyadicInterval& b);
DyadicInterval iv_sqr_exact(const DyadicInterval& a);

// Enclosure of {x^2 + c : x in X, c in C}.
DyadicInterval iv_quad_step(const DyadicInterval& X, const DyadicInterval& C, const Precision& p);
// Enclosure of {2x : x in X}.
DyadicInterval iv_deriv_enclosure(const DyadicInterval& X, const Precision& p);

}  // namespace qal
