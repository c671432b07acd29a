#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qal {

enum class Rounding { down, up, nearest };

// Absolute rounding granule 2^-bits.
struct Precision {
    int bits;
    explicit Precision(int b);
};

// Exact binary rational mantissa * 2^exponent, kept with an odd mantissa.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long long v);  // NOLINT(google-explicit-constructor)
    Dyadic(int v) : Dyadic(static_cast<long long>(v)) {}  // NOLINT
    Dyadic(mpz_class mantissa, std::int64_t exponent);

    // num * 2^-k
    static Dyadic ratio(long long num, std::int64_t k);
    static Dyadic from_double(double v);

    // Accepts "m*2^e", "p/q" with q a power of two, and exact decimal notation.
    static Dyadic parse(std::string_view text);
    // Like parse, but any rational (or decimal) input is rounded to the nearest element of D_bits.
    static Dyadic parse_rounded(std::string_view text, int bits, bool* exact = nullptr);

    const mpz_class& mantissa() const { return m_; }
    std::int64_t exponent() const { return e_; }
    int sign() const { return sgn(m_); }
    bool is_zero() const { return m_ == 0; }
    // Smallest k >= 0 with this value in D_k.
    std::int64_t denominator_bits() const { return e_ < 0 ? -e_ : 0; }
    bool in_D(std::int64_t m) const { return e_ >= -m; }

    Dyadic abs() const;
    Dyadic scaled(std::int64_t k) const;  // value * 2^k
    double to_double() const;
    mpq_class to_mpq() const;

    std::string str() const;
    std::string decimal(int frac_digits) const;

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a);
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.e_ == b.e_ && a.m_ == b.m_; }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
    Dyadic& operator-=(const Dyadic& b) { return *this = *this - b; }
    Dyadic& operator*=(const Dyadic& b) { return *this = *this * b; }

private:
    void canonicalize();

    mpz_class m_{0};
    std::int64_t e_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

Dyadic dy_add(const Dyadic& a, const Dyadic& b);
Dyadic dy_mul(const Dyadic& a, const Dyadic& b);
Dyadic dy_round(const Dyadic& a, std::int64_t m, Rounding dir);
// a / b rounded to D_m in the given direction; b must be nonzero.
Dyadic dy_div(const Dyadic& a, const Dyadic& b, std::int64_t m, Rounding dir);
Dyadic dy_midpoint(const Dyadic& a, const Dyadic& b);
Dyadic dy_pow2(std::int64_t k);
const Dyadic& dy_min(const Dyadic& a, const Dyadic& b);
const Dyadic& dy_max(const Dyadic& a, const Dyadic& b);
// Smallest integer k with |a| <= 2^k; a must be nonzero.
std::int64_t dy_ceil_log2(const Dyadic& a);
std::int64_t dy_floor_log2(const Dyadic& a);

}  // namespace qal
