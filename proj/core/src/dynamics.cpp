#include "qal/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qal {

int working_precision(int m) { return std::max(64, m + 32); }

OrbitEnclosure critical_orbit(const DyadicInterval& C, int N, const Precision& p) {
    if (N < 1) throw std::invalid_argument("critical_orbit needs N >= 1");
    OrbitEnclosure out;
    out.precision_used = p;
    out.param = C;
    out.steps.reserve(static_cast<std::size_t>(N) + 1);
    out.steps.emplace_back(Dyadic());
    Dyadic limit = dy_pow2(-4);
    for (int k = 0; k < N; ++k) {
        out.steps.push_back(iv_quad_step(out.steps.back(), C, p));
        if (limit < out.steps.back().width()) out.blown_up = true;
    }
    return out;
}

OrbitEnclosure critical_orbit(ParamOracle& o, int N, const Precision& p) {
    return critical_orbit(o.enclose(p.bits), N, p);
}

std::vector<DyadicInterval> forward_orbit(const DyadicInterval& x0, const DyadicInterval& C, int N, const Precision& p) {
    std::vector<DyadicInterval> out{x0};
    out.reserve(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k < N; ++k) out.push_back(iv_quad_step(out.back(), C, p));
    return out;
}

DynamicalInterval dynamical_interval(const DyadicInterval& C, const Precision& p) {
    return {C, iv_quad_step(C, C, p)};
}

std::string to_string(CycleKind k) {
    switch (k) {
        case CycleKind::attracting: return "attracting";
        case CycleKind::superattracting: return "superattracting";
        case CycleKind::parabolic: return "parabolic";
        case CycleKind::repelling: return "repelling";
        case CycleKind::undecided: return "undecided";
    }
    return "undecided";
}

DyadicInterval cycle_multiplier(const std::vector<DyadicInterval>& points, const Precision& p) {
    DyadicInterval m(Dyadic(1));
    for (const auto& x : points) m = iv_mul(m, iv_deriv_enclosure(x, p), p);
    return m;
}

CycleKind classify_cycle(const std::vector<DyadicInterval>& points, const ParamFacts& facts, const Precision& p) {
    DyadicInterval mult = cycle_multiplier(points, p);
    int n = static_cast<int>(points.size());
    bool has_zero_point = std::any_of(points.begin(), points.end(), [](const DyadicInterval& x) {
        return x.lo().is_zero() && x.hi().is_zero();
    });
    if (has_zero_point) return CycleKind::superattracting;
    if (facts.superstable_period && *facts.superstable_period == n &&
        std::any_of(points.begin(), points.end(), [](const DyadicInterval& x) { return x.contains_zero(); })) {
        return CycleKind::superattracting;
    }
    if (mult.mag() < Dyadic(1)) return CycleKind::attracting;
    if (Dyadic(1) < mult.mig()) return CycleKind::repelling;
    if (facts.parabolic_period && *facts.parabolic_period == n) return CycleKind::parabolic;
    return CycleKind::undecided;
}

CycleKind classify_cycle(const std::vector<DyadicInterval>& points, const ParamOracle& o) {
    Precision p(128);
    for (const auto& x : points) {
        p.bits = std::max<int>(p.bits, static_cast<int>(std::max(x.lo().denominator_bits(), x.hi().denominator_bits())) + 32);
    }
    return classify_cycle(points, o.facts(), p);
}

namespace {

bool pairwise_disjoint(const std::vector<DyadicInterval>& pts) {
    std::vector<DyadicInterval> s = pts;
    std::sort(s.begin(), s.end(), [](const DyadicInterval& a, const DyadicInterval& b) { return a.lo() < b.lo(); });
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i - 1].hi() < s[i].lo())) return false;
    }
    return true;
}

Dyadic max_width(const std::vector<DyadicInterval>& pts) {
    Dyadic w;
    for (const auto& x : pts) w = dy_max(w, x.width());
    return w;
}

// Pⁿ(J) inside the interior of J and the derivative product along the tube below one.
bool trap_certifies(const DyadicInterval& J, const DyadicInterval& C, int n, const Precision& p, DyadicInterval* image) {
    DyadicInterval K = J;
    Dyadic prod(1);
    for (int i = 0; i < n; ++i) {
        prod = dy_round(prod * iv_deriv_enclosure(K, p).mag(), p.bits, Rounding::up);
        K = iv_quad_step(K, C, p);
    }
    if (image) *image = K;
    return prod < Dyadic(1) && J.interior_contains(K);
}

std::vector<DyadicInterval> cycle_from(const DyadicInterval& K, const DyadicInterval& C, int n, const Precision& p) {
    std::vector<DyadicInterval> pts{K};
    for (int i = 1; i < n; ++i) pts.push_back(iv_quad_step(pts.back(), C, p));
    return pts;
}

}  // namespace

bool verify_cycle_certificate(const CertifiedCycle& cyc, const Precision& p) {
    int n = cyc.period;
    if (n < 1 || static_cast<int>(cyc.points.size()) != n) return false;
    if (!pairwise_disjoint(cyc.points)) return false;
    for (int i = 0; i < n; ++i) {
        DyadicInterval img = iv_quad_step(cyc.points[static_cast<std::size_t>(i)], cyc.param, p);
        if (!cyc.points[static_cast<std::size_t>((i + 1) % n)].contains(img)) return false;
    }
    if (cyc.trap.is_point()) return cyc.points.front() == cyc.trap;  // exact cycle
    DyadicInterval img;
    return trap_certifies(cyc.trap, cyc.param, n, p, &img);
}

std::optional<CertifiedCycle> certify_attracting_cycle(ParamOracle& o, int max_period, long budget) {
    CycleSearchOptions opts;
    opts.max_period = max_period;
    opts.step_budget = budget;
    return certify_attracting_cycle(o, opts);
}

std::optional<CertifiedCycle> certify_attracting_cycle(ParamOracle& o, const CycleSearchOptions& opts) {
    int cap = opts.max_precision > 0 ? opts.max_precision : max_precision_cap();
    long steps = 0;
    int m = std::min(opts.start_bits, cap);
    ParamFacts facts = o.facts();
    while (steps < opts.step_budget) {
        DyadicInterval C = o.enclose(m);
        Precision p(working_precision(m));
        bool point_param = C.is_point();
        std::vector<DyadicInterval> orb{DyadicInterval(Dyadic())};
        bool escalate = false;
        int deficit_bits = 0;

        for (long T = 16; steps < opts.step_budget; T *= 4) {
            long need = T + opts.max_period;
            while (static_cast<long>(orb.size()) <= need && steps < opts.step_budget) {
                orb.push_back(iv_quad_step(orb.back(), C, p));
                ++steps;
            }
            if (static_cast<long>(orb.size()) <= need) break;

            // exactly periodic orbits (exact parameters only)
            if (point_param) {
                for (int n = 1; n <= opts.max_period; ++n) {
                    const auto& a = orb[static_cast<std::size_t>(T)];
                    const auto& b = orb[static_cast<std::size_t>(T + n)];
                    if (!a.is_point() || a != b) continue;
                    CertifiedCycle cyc;
                    cyc.period = n;
                    cyc.param = C;
                    cyc.precision = p;
                    cyc.trap = a;
                    cyc.points = cycle_from(a, C, n, p);
                    if (!pairwise_disjoint(cyc.points)) continue;
                    // rotate so that the point nearest the critical point comes first
                    auto it = std::min_element(cyc.points.begin(), cyc.points.end(),
                                               [](const DyadicInterval& x, const DyadicInterval& y) {
                                                   return x.mig() < y.mig();
                                               });
                    std::rotate(cyc.points.begin(), it, cyc.points.end());
                    cyc.trap = cyc.points.front();
                    cyc.multiplier = cycle_multiplier(cyc.points, p);
                    cyc.kind = classify_cycle(cyc.points, facts, p);
                    if (cyc.kind == CycleKind::attracting || cyc.kind == CycleKind::superattracting) return cyc;
                    break;
                }
            }

            const DyadicInterval& X = orb[static_cast<std::size_t>(T)];
            Dyadic floor_r = dy_pow2(-(p.bits - 16));
            for (int n = 1; n <= opts.max_period; ++n) {
                const DyadicInterval& Y = orb[static_cast<std::size_t>(T + n)];
                DyadicInterval base = hull(X, Y);
                Dyadic spread = dy_max(X.width(), Y.width());
                if (Dyadic::ratio(1, 2) < base.width()) continue;
                for (int r_mult : {1, 4, 16, 64}) {
                    Dyadic r = (base.width() + spread) * Dyadic(r_mult) + floor_r;
                    DyadicInterval J = inflate(base, r);
                    DyadicInterval K;
                    steps += n;
                    if (!trap_certifies(J, C, n, p, &K)) continue;
                    // shrink toward the cycle
                    Dyadic target = opts.target_bits > 0 ? dy_pow2(-(opts.target_bits)) : Dyadic();
                    for (int it = 0; it < 4096 && steps < opts.step_budget; ++it) {
                        if (opts.target_bits > 0 && K.width() <= target) break;
                        DyadicInterval K2 = K;
                        for (int i = 0; i < n; ++i) K2 = iv_quad_step(K2, C, p);
                        steps += n;
                        auto kk = intersect(K2, K);
                        if (!kk) break;
                        bool progress = kk->width() * Dyadic(64) < K.width() * Dyadic(63);
                        K = *kk;
                        if (!progress) break;
                    }
                    std::vector<DyadicInterval> pts = cycle_from(K, C, n, p);
                    if (!pairwise_disjoint(pts)) break;  // not the minimal period
                    if (opts.target_bits > 0 && target < max_width(pts)) {
                        // deficit-driven: ask the oracle for as many more bits as are missing
                        Dyadic w = max_width(pts);
                        deficit_bits = static_cast<int>(dy_ceil_log2(w) + opts.target_bits) + 4;
                        escalate = true;
                        break;
                    }
                    CertifiedCycle cyc;
                    cyc.period = n;
                    cyc.param = C;
                    cyc.precision = p;
                    cyc.trap = J;
                    auto it0 = std::min_element(pts.begin(), pts.end(), [](const DyadicInterval& a, const DyadicInterval& b) {
                        return a.mig() < b.mig();
                    });
                    std::rotate(pts.begin(), it0, pts.end());
                    cyc.points = std::move(pts);
                    cyc.multiplier = cycle_multiplier(cyc.points, p);
                    cyc.kind = classify_cycle(cyc.points, facts, p);
                    if (cyc.kind != CycleKind::attracting && cyc.kind != CycleKind::superattracting) break;
                    return cyc;
                }
                if (escalate) break;
            }
            if (escalate) break;
            // an orbit tube wider than the search radius only narrows with more oracle bits
            if (!point_param && Dyadic::ratio(1, 4) < X.width()) {
                escalate = true;
                deficit_bits = 8;
                break;
            }
        }
        if (!escalate || m >= cap) break;
        m = std::min(cap, m + std::max(8, deficit_bits));
    }
    return std::nullopt;
}

std::vector<DyadicInterval> PeriodicPoints::enclosures() const {
    std::vector<DyadicInterval> out;
    for (const auto& pp : points) out.push_back(pp.enclosure);
    return out;
}

IntervalFunction periodic_equation(const DyadicInterval& C, int n) {
    return [C, n](const DyadicInterval& X, const Precision& p) {
        DyadicInterval x = X;
        DyadicInterval d(Dyadic(1));
        for (int i = 0; i < n; ++i) {
            d = iv_mul(iv_deriv_enclosure(x, p), d, p);
            x = iv_quad_step(x, C, p);
        }
        return FunctionEnclosure{iv_sub(x, X, p), iv_sub(d, DyadicInterval(Dyadic(1)), p)};
    };
}

PeriodicPoints isolate_periodic_points(const DyadicInterval& C, int n, const Precision& p, const DyadicInterval& domain,
                                       const RootOptions& ro) {
    if (n < 1) throw std::invalid_argument("period must be positive");
    IntervalFunction F = periodic_equation(C, n);
    RootSearch rs = isolate_roots(F, domain, p, ro);
    PeriodicPoints out;
    out.complete = rs.complete;
    for (const auto& r : rs.roots) {
        PeriodicPoint pp;
        pp.enclosure = r.enclosure;
        pp.unique = r.unique;
        pp.multiplier = iv_add(F(r.enclosure, p).deriv, DyadicInterval(Dyadic(1)), p);
        if (!r.unique) out.needs_precision = true;
        out.points.push_back(pp);
    }
    return out;
}

PeriodicPoints isolate_periodic_points(ParamOracle& o, int n, const Precision& p) {
    DyadicInterval C = o.enclose(std::max(16, p.bits - 32));
    return isolate_periodic_points(C, n, p, DyadicInterval(Dyadic(-2), Dyadic(2)));
}

EscapeResult escape_time_detail(const Dyadic& eps, const DyadicInterval& gate, long max_steps) {
    if (eps.sign() <= 0) throw std::invalid_argument("escape_time needs eps > 0");
    const Dyadic& a = gate.hi();
    if (a.sign() <= 0 || gate.lo() != -a) throw std::invalid_argument("gate must be [-a, a] with a > 0");
    if (Dyadic::ratio(1, 1) < a) throw std::invalid_argument("gate half-width must be at most 1/2");
    auto run = [&](Rounding dir, int bits) {
        Dyadic w = -a;
        long n = 0;
        while (w <= a) {
            w = dy_round(w + w * w + eps, bits, dir);
            if (++n > max_steps) throw std::runtime_error("escape_time step cap exceeded");
        }
        return n;
    };
    int cap = max_precision_cap();
    for (int bits = 128; bits <= cap; bits *= 2) {
        long lo = run(Rounding::up, bits);
        long hi = run(Rounding::down, bits);
        if (lo == hi) return {lo, bits};
    }
    throw std::runtime_error("escape_time: directed-rounding counts disagree at precision cap");
}

long escape_time(const Dyadic& eps, const DyadicInterval& gate) { return escape_time_detail(eps, gate).steps; }

}  // namespace qal
