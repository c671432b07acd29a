#pragma once
// Reference attractors for parameters whose attractor is known in closed form or by brute force.

#include "reference.hpp"

#include <qal/attractor.hpp>
#include <qal/param_space.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ref {

struct KnownAttractor {
    std::string name;
    std::function<qal::ParamOracle()> make;
    qal::Hints hints;
    std::vector<Real> points;                      // finite attractor
    std::optional<std::pair<Real, Real>> interval;  // or an interval
};

inline Real dist_to(const Real& x, const KnownAttractor& a) {
    if (a.interval) {
        if (x < a.interval->first) return a.interval->first - x;
        if (a.interval->second < x) return x - a.interval->second;
        return 0;
    }
    Real best = -1;
    for (const auto& p : a.points) {
        Real d = boost::multiprecision::abs(x - p);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

// s sorted.
inline Real dist_to_set(const Real& x, const std::vector<Real>& s) {
    auto it = std::lower_bound(s.begin(), s.end(), x);
    Real best = -1;
    if (it != s.end()) best = *it - x;
    if (it != s.begin()) {
        Real d = x - *std::prev(it);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

inline Real hausdorff(std::vector<Real> s, const KnownAttractor& a) {
    std::sort(s.begin(), s.end());
    Real h = 0;
    for (const auto& x : s) h = std::max(h, dist_to(x, a));
    if (a.interval) {
        auto [lo, hi] = *a.interval;
        std::vector<Real> probe{lo, hi};
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            Real m = (s[i] + s[i + 1]) / 2;
            if (lo < m && m < hi) probe.push_back(m);
        }
        for (const auto& x : probe) h = std::max(h, dist_to_set(x, s));
    } else {
        for (const auto& p : a.points) h = std::max(h, dist_to_set(p, s));
    }
    return h;
}

inline std::vector<Real> to_reals(const std::vector<qal::Dyadic>& xs) {
    std::vector<Real> out;
    for (const auto& x : xs) out.push_back(to_real(x));
    return out;
}

inline Real hausdorff_sets(std::vector<Real> a, std::vector<Real> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Real h = 0;
    for (const auto& x : a) h = std::max(h, dist_to_set(x, b));
    for (const auto& x : b) h = std::max(h, dist_to_set(x, a));
    return h;
}

// Parabolic 3-cycle of -7/4: a long orbit gets close, Newton on (P^3)'(w) = 1 finishes.
inline std::vector<Real> parabolic_three_cycle() {
    Real c = Real(-7) / 4;
    double x = 0;
    for (int i = 0; i < 300000; ++i) x = x * x - 1.75;
    std::vector<Real> out;
    Real w = x;
    for (int j = 0; j < 3; ++j) {
        for (int it = 0; it < 200; ++it) {
            Real a = w, b = pc(a, c), d = pc(b, c);
            Real h = 8 * a * b * d - 1;
            Real dh = 8 * (b * d + a * (2 * a) * d + a * b * (2 * b) * (2 * a));
            w -= h / dh;
        }
        out.push_back(w);
        w = pc(w, c);
    }
    return out;
}

inline Real s3_center() {
    return bisect([](const Real& c) { return c * c * c + 2 * c * c + c + 1; }, Real(-1.8), Real(-1.7));
}

inline std::vector<KnownAttractor> known_attractors() {
    using namespace qal;
    std::vector<KnownAttractor> v;
    v.push_back({"0", [] { return oracle_exact(Dyadic(0)); }, {}, {Real(0)}, {}});
    v.push_back({"-1/2", [] { return oracle_exact(Dyadic::ratio(-1, 1)); }, {}, {(Real(1) - sqrt_r(Real(3))) / 2}, {}});
    v.push_back({"-1", [] { return oracle_exact(Dyadic(-1)); }, {}, {Real(0), Real(-1)}, {}});
    Hints h14;
    h14.period = 1;
    h14.case_tag = CaseTag::c1c;
    v.push_back({"1/4", [] { return oracle_exact(Dyadic::ratio(1, 2)); }, h14, {Real(1) / 2}, {}});
    Hints h74;
    h74.period = 3;
    h74.case_tag = CaseTag::c1c;
    v.push_back({"-7/4", [] { return oracle_exact(Dyadic::ratio(-7, 2)); }, h74, parabolic_three_cycle(), {}});
    Hints h2;
    h2.period = 1;
    h2.case_tag = CaseTag::c2;
    v.push_back({"-2", [] { return oracle_exact(Dyadic(-2)); }, h2, {}, std::make_pair(Real(-2), Real(2))});
    Real s = s3_center();
    v.push_back({"superstable-3", [] { return superstable_center(3); }, {}, {Real(0), s, s * s + s}, {}});
    return v;
}

}  // namespace ref
