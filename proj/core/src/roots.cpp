#include "qal/roots.hpp"

#include <algorithm>

namespace qal {

bool RootSearch::all_unique() const {
    return complete && std::all_of(roots.begin(), roots.end(), [](const RootEnclosure& r) { return r.unique; });
}

std::optional<DyadicInterval> newton_step(const IntervalFunction& f, const DyadicInterval& x, const Precision& p) {
    FunctionEnclosure e = f(x, p);
    if (e.deriv.contains_zero()) return x;
    Dyadic m = x.mid();
    FunctionEnclosure fm = f(DyadicInterval(m), p);
    DyadicInterval q = iv_div(fm.value, e.deriv, p);
    DyadicInterval n = iv_sub(DyadicInterval(m), q, p);
    return intersect(n, x);
}

namespace {

struct Box {
    DyadicInterval x;
};

// Split slightly left of centre so that short dyadic roots rarely land on a box boundary.
Dyadic split_point(const DyadicInterval& x) { return x.lo() + x.width() * Dyadic::ratio(15, 5); }

DyadicInterval refine_unique(const IntervalFunction& f, DyadicInterval x, const Precision& p, int steps) {
    for (int i = 0; i < steps; ++i) {
        auto n = newton_step(f, x, p);
        if (!n) break;  // cannot happen for a certified box; keep the last enclosure
        if (n->width() >= x.width()) {
            x = *n;
            break;
        }
        x = *n;
    }
    return x;
}

}  // namespace

RootSearch isolate_roots(const IntervalFunction& f, const DyadicInterval& domain, const Precision& p,
                         const RootOptions& opts) {
    RootSearch out;
    int mw_bits = opts.min_width_bits > 0 ? opts.min_width_bits : std::max(8, p.bits - 8);
    Dyadic min_width = dy_pow2(-mw_bits);

    std::vector<RootEnclosure> found;
    std::vector<Box> stack{{domain}};
    long boxes = 0;
    while (!stack.empty()) {
        Box b = std::move(stack.back());
        stack.pop_back();
        if (++boxes > opts.max_boxes) {
            out.complete = false;
            found.push_back({b.x, false});
            continue;
        }
        const DyadicInterval& x = b.x;
        FunctionEnclosure e = f(x, p);
        if (!e.value.contains_zero()) continue;
        Dyadic m = x.mid();
        FunctionEnclosure fm = f(DyadicInterval(m), p);
        DyadicInterval mv = iv_add(fm.value, iv_mul(e.deriv, iv_sub(x, DyadicInterval(m), p), p), p);
        if (!mv.contains_zero()) continue;

        bool small = x.width() <= min_width;
        // When the value at a single point is as uncertain as the variation across the box,
        // splitting further cannot separate anything.
        bool saturated = false;
        if (!x.is_point()) {
            Dyadic spread = e.deriv.contains_zero() ? e.value.width().scaled(-1) : e.deriv.mig() * x.width().scaled(-2);
            saturated = spread <= fm.value.width();
        }

        if (!e.deriv.contains_zero()) {
            DyadicInterval q = iv_div(fm.value, e.deriv, p);
            DyadicInterval n = iv_sub(DyadicInterval(m), q, p);
            auto nx = intersect(n, x);
            if (!nx) continue;
            if (x.interior_contains(n) || (x.is_point() && n == x)) {
                found.push_back({refine_unique(f, n, p, opts.newton_steps), true});
                continue;
            }
            if (small || saturated) {
                Sign sl = sign_of(f(DyadicInterval(x.lo()), p).value);
                Sign sh = sign_of(f(DyadicInterval(x.hi()), p).value);
                if ((sl == Sign::neg && sh == Sign::pos) || (sl == Sign::pos && sh == Sign::neg)) {
                    found.push_back({x, true});
                } else if (sl != Sign::undecided && sl == sh && sl != Sign::zero) {
                    continue;  // monotone without sign change
                } else {
                    found.push_back({x, false});
                }
                continue;
            }
        } else if (small || saturated) {
            found.push_back({x, false});
            continue;
        }
        Dyadic s = split_point(x);
        stack.push_back({DyadicInterval(s, x.hi())});
        stack.push_back({DyadicInterval(x.lo(), s)});
    }

    std::sort(found.begin(), found.end(),
              [](const RootEnclosure& a, const RootEnclosure& b) { return a.enclosure.lo() < b.enclosure.lo(); });
    // Merge enclosures whose closures meet.
    for (auto& r : found) {
        if (!out.roots.empty() && !(out.roots.back().enclosure.hi() < r.enclosure.lo())) {
            RootEnclosure& last = out.roots.back();
            DyadicInterval h = hull(last.enclosure, r.enclosure);
            if (last.unique && r.unique) {
                if (!f(h, p).deriv.contains_zero() || h.is_point()) {
                    last = {h, true};
                    continue;
                }
                const Dyadic& b = dy_max(last.enclosure.lo(), r.enclosure.lo());
                Sign sb = sign_of(f(DyadicInterval(b), p).value);
                if (sb == Sign::pos || sb == Sign::neg) {
                    out.roots.push_back(r);  // two distinct roots sharing a boundary point
                    continue;
                }
            }
            last = {h, false};
            continue;
        }
        out.roots.push_back(r);
    }
    return out;
}

}  // namespace qal
