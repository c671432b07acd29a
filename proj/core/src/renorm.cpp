#include "qal/renorm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qal {

namespace {

enum class Verdict { yes, no, unknown };

int next_bits(int m) { return m + std::max(8, m / 2); }

int cap_of(const RenormOptions& opts) { return opts.max_precision > 0 ? opts.max_precision : max_precision_cap(); }

std::optional<int> certain(const DyadicInterval& x) { return x.certain_sign(); }

// f^r(x) - shift and its derivative.
IntervalFunction iterate_minus(const DyadicInterval& C, int r, const DyadicInterval& shift) {
    return [C, r, shift](const DyadicInterval& X, const Precision& p) {
        DyadicInterval x = X;
        DyadicInterval d(Dyadic(1));
        for (int i = 0; i < r; ++i) {
            d = iv_mul(iv_deriv_enclosure(x, p), d, p);
            x = iv_quad_step(x, C, p);
        }
        return FunctionEnclosure{iv_sub(x, shift, p), d};
    };
}

DyadicInterval iterate(DyadicInterval x, const DyadicInterval& C, int k, const Precision& p) {
    for (int i = 0; i < k; ++i) x = iv_quad_step(x, C, p);
    return x;
}

// Endpoint of a cycle interval. Endpoints with equal non-negative labels are the same point of the
// boundary orbit; label -1 marks points with no identity known.
struct Endpoint {
    DyadicInterval e;
    int label = -1;
};

struct CycleInterval {
    Endpoint lo, hi;
    bool ordered = false;
};

Verdict less_eq(const Endpoint& a, const Endpoint& b) {
    if (a.label >= 0 && a.label == b.label) return Verdict::yes;
    if (a.e.hi() < b.e.lo()) return Verdict::yes;
    if (b.e.hi() < a.e.lo()) return Verdict::no;
    return Verdict::unknown;
}

CycleInterval make_interval(const Endpoint& a, const Endpoint& b) {
    Verdict v = less_eq(a, b);
    if (v == Verdict::yes) return {a, b, true};
    if (v == Verdict::no) return {b, a, true};
    return {a, b, false};
}

// Interiors of two ordered cycle intervals are disjoint / certainly overlap.
Verdict interiors_disjoint(const CycleInterval& a, const CycleInterval& b) {
    if (!a.ordered || !b.ordered) return Verdict::unknown;
    if (less_eq(a.hi, b.lo) == Verdict::yes || less_eq(b.hi, a.lo) == Verdict::yes) return Verdict::yes;
    // inner hulls
    const Dyadic& alo = a.lo.e.hi();
    const Dyadic& ahi = a.hi.e.lo();
    const Dyadic& blo = b.lo.e.hi();
    const Dyadic& bhi = b.hi.e.lo();
    if (alo < ahi && blo < bhi && dy_max(alo, blo) < dy_min(ahi, bhi)) return Verdict::no;
    return Verdict::unknown;
}

// Smallest d dividing N with f^d(p) = p, given P as a unique-root enclosure of P^N(w) = w.
std::optional<int> minimal_period(const DyadicInterval& P, const DyadicInterval& C, int N, const Precision& p) {
    for (int d = 1; d < N; ++d) {
        if (N % d) continue;
        DyadicInterval img = iterate(P, C, d, p);
        if (!img.overlaps(P)) continue;
        RootSearch rs = isolate_roots(periodic_equation(C, d), P, p);
        if (!rs.complete) return std::nullopt;
        if (rs.roots.empty()) continue;
        if (rs.roots.size() == 1 && rs.roots[0].unique) return d;
        return std::nullopt;
    }
    return N;
}

CombinatorialType type_from_order(const std::vector<DyadicInterval>& intervals) {
    int n = static_cast<int>(intervals.size());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return intervals[static_cast<std::size_t>(b)].mid() < intervals[static_cast<std::size_t>(a)].mid(); });
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] = r + 1;
    CombinatorialType t;
    t.period = n;
    t.perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t.perm[static_cast<std::size_t>(rank[static_cast<std::size_t>(i)] - 1)] = rank[static_cast<std::size_t>((i + 1) % n)];
    }
    return t;
}

// Cycle conditions for J = [-|p|, |p|] with P enclosing the boundary point p of period dividing N.
Verdict check_cycle(const DyadicInterval& C, const DyadicInterval& P, int N, const Precision& p,
                    const std::vector<DyadicInterval>& v, Renormalization* out) {
    if (P.contains_zero()) return Verdict::unknown;
    auto d = minimal_period(P, C, N, p);
    if (!d) return Verdict::unknown;

    DyadicInterval absP = P.abs();
    // v_N in J
    if (absP.hi() < v[static_cast<std::size_t>(N)].mig()) return Verdict::no;
    Verdict result = v[static_cast<std::size_t>(N)].mag() <= absP.lo() ? Verdict::yes : Verdict::unknown;

    std::vector<CycleInterval> K;
    K.reserve(static_cast<std::size_t>(N));
    Endpoint pe{P, 0};
    Endpoint ne{iv_neg(P), -1};
    K.push_back(make_interval(pe, ne));
    DyadicInterval q = P;
    for (int i = 1; i < N; ++i) {
        q = iv_quad_step(q, C, p);
        const DyadicInterval& vi = v[static_cast<std::size_t>(i)];
        auto sv = certain(vi);
        auto sq = certain(q);
        if (sv && sq && *sv != 0 && *sq != 0 && *sv != *sq) return Verdict::no;
        if (!(sv && sq && *sv == *sq && *sv != 0)) result = Verdict::unknown;
        K.push_back(make_interval(Endpoint{vi, -1}, Endpoint{q, i % *d}));
    }
    for (std::size_t a = 0; a < K.size(); ++a) {
        for (std::size_t b = a + 1; b < K.size(); ++b) {
            Verdict dv = interiors_disjoint(K[a], K[b]);
            if (dv == Verdict::no) return Verdict::no;
            if (dv == Verdict::unknown) result = Verdict::unknown;
        }
    }
    if (result != Verdict::yes) return result;
    if (out) {
        out->period = N;
        out->boundary = P;
        out->J = DyadicInterval(-absP.hi(), absP.hi());
        out->cycle.clear();
        for (const auto& k : K) out->cycle.emplace_back(dy_min(k.lo.e.lo(), k.hi.e.lo()), dy_max(k.lo.e.hi(), k.hi.e.hi()));
        out->tau = type_from_order(out->cycle);
        out->param = C;
        out->precision = p;
    }
    return Verdict::yes;
}

// All candidate boundary points for period N, tested in turn.
Verdict check_period(const DyadicInterval& C, int N, const Precision& p, const std::vector<DyadicInterval>& v,
                     const std::optional<DyadicInterval>& within, Renormalization* out) {
    Dyadic R = v[1].mag();
    for (int i = 2; i < N; ++i) R = dy_min(R, v[static_cast<std::size_t>(i)].mag());
    Dyadic L = v[static_cast<std::size_t>(N)].mig();
    if (within) R = dy_min(R, within->mag());
    if (R <= L) return Verdict::no;

    RootOptions ro;
    ro.max_boxes = 200'000;
    IntervalFunction F = periodic_equation(C, N);
    Verdict result = Verdict::no;
    for (int side : {1, -1}) {
        DyadicInterval dom = side > 0 ? DyadicInterval(L, R) : DyadicInterval(-R, -L);
        RootSearch rs = isolate_roots(F, dom, p, ro);
        if (!rs.complete) result = Verdict::unknown;
        for (const auto& r : rs.roots) {
            if (!r.unique) {
                result = Verdict::unknown;
                continue;
            }
            DyadicInterval mult = iv_add(F(r.enclosure, p).deriv, DyadicInterval(Dyadic(1)), p);
            if (mult.mag() <= Dyadic(1)) continue;  // not repelling
            if (!(Dyadic(1) < mult.mig())) {
                result = Verdict::unknown;
                continue;
            }
            Verdict cv = check_cycle(C, r.enclosure, N, p, v, out);
            if (cv == Verdict::yes) return Verdict::yes;
            if (cv == Verdict::unknown) result = Verdict::unknown;
        }
    }
    return result;
}

RenormSearch search(ParamOracle& o, const std::vector<int>& periods, const std::optional<DyadicInterval>& within,
                    const RenormOptions& opts) {
    RenormSearch out;
    if (periods.empty()) return out;
    int cap = cap_of(opts);
    int maxN = *std::max_element(periods.begin(), periods.end());
    for (int m = std::min(opts.start_bits, cap);; m = std::min(cap, next_bits(m))) {
        DyadicInterval C = o.enclose(m);
        Precision p(working_precision(m));
        std::vector<DyadicInterval> v = critical_orbit(C, maxN, p).steps;
        bool unknown = false;
        for (int N : periods) {
            Renormalization r;
            Verdict vd = check_period(C, N, p, v, within, &r);
            if (vd == Verdict::yes) {
                if (!unknown) {
                    out.found = std::move(r);
                    return out;
                }
                break;
            }
            if (vd == Verdict::unknown) unknown = true;
        }
        if (!unknown) return out;
        if (m >= cap) {
            out.undecided = true;
            out.note = "renormalization undecided at precision cap";
            return out;
        }
    }
}

}  // namespace

bool CombinatorialType::is_cycle() const {
    if (period < 1 || static_cast<int>(perm.size()) != period) return false;
    std::vector<bool> seen(perm.size(), false);
    int i = 1;
    for (int k = 0; k < period; ++k) {
        if (i < 1 || i > period || seen[static_cast<std::size_t>(i - 1)]) return false;
        seen[static_cast<std::size_t>(i - 1)] = true;
        i = perm[static_cast<std::size_t>(i - 1)];
    }
    return i == 1;
}

std::string CombinatorialType::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(perm[i]);
    }
    return s + ")";
}

KneadingSequence kneading(ParamOracle& o, int length) {
    if (length < 1) throw std::invalid_argument("kneading length must be positive");
    ParamFacts facts = o.facts();
    int cap = max_precision_cap();
    KneadingSequence out;
    for (int m = 32;;) {
        DyadicInterval C = o.enclose(m);
        Precision p(working_precision(m));
        OrbitEnclosure orb = critical_orbit(C, std::max(1, length - 1), p);
        out.symbols.assign(static_cast<std::size_t>(length), '?');
        int first_unknown = -1;
        for (int k = 0; k < length; ++k) {
            const DyadicInterval& x = orb.steps[static_cast<std::size_t>(k)];
            char s = '?';
            if (x.is_point() && x.lo().is_zero()) {
                s = 'C';
            } else if (facts.superstable_period && k % *facts.superstable_period == 0) {
                s = 'C';
            } else if (auto sg = x.certain_sign()) {
                s = *sg < 0 ? 'L' : 'R';
            }
            out.symbols[static_cast<std::size_t>(k)] = s;
            if (s == '?' && first_unknown < 0) first_unknown = k;
        }
        out.certified_length = first_unknown < 0 ? length : first_unknown;
        if (first_unknown < 0 || m >= cap) return out;
        const DyadicInterval& x = orb.steps[static_cast<std::size_t>(first_unknown)];
        int deficit = 8;
        if (!x.mid().is_zero() && !x.width().is_zero()) {
            deficit = static_cast<int>(dy_ceil_log2(x.width()) - dy_floor_log2(x.mid())) + 4;
        }
        m = std::min(cap, m + std::max(8, deficit));
    }
}

RenormSearch detect_renormalization(ParamOracle& o, int max_period, const RenormOptions& opts) {
    if (max_period < 2) throw std::invalid_argument("max_period must be at least 2");
    std::vector<int> periods;
    for (int n = 2; n <= max_period; ++n) periods.push_back(n);
    return search(o, periods, std::nullopt, opts);
}

RenormSearch detect_renormalization_of_period(ParamOracle& o, int n, const RenormOptions& opts) {
    if (n < 2) throw std::invalid_argument("renormalization period must be at least 2");
    return search(o, {n}, std::nullopt, opts);
}

RenormSearch detect_renormalization_within(ParamOracle& o, const Renormalization& outer, int max_factor,
                                           const RenormOptions& opts) {
    std::vector<int> periods;
    for (int k = 2; k <= max_factor; ++k) periods.push_back(k * outer.period);
    return search(o, periods, outer.J, opts);
}

bool verify_renormalization(const Renormalization& r, const Precision& p) {
    std::vector<DyadicInterval> v = critical_orbit(r.param, r.period, p).steps;
    return check_cycle(r.param, r.boundary, r.period, p, v, nullptr) == Verdict::yes;
}

CombinatorialType relative_type(const Renormalization& inner, const Renormalization& outer) {
    if (outer.period < 1 || inner.period % outer.period) throw std::invalid_argument("periods are not nested");
    std::vector<DyadicInterval> sub;
    for (int i = 0; i < inner.period; i += outer.period) sub.push_back(inner.cycle[static_cast<std::size_t>(i)]);
    return type_from_order(sub);
}

DyadicInterval NestRecord::level(int m) const {
    const DyadicInterval& t = radius.at(static_cast<std::size_t>(m));
    return {-t.hi(), t.hi()};
}

std::optional<int> NestRecord::level_of(const DyadicInterval& x) const {
    int lv = -1;
    for (std::size_t m = 0; m < radius.size(); ++m) {
        if (x.mag() < radius[m].lo()) {
            lv = static_cast<int>(m);
        } else if (radius[m].hi() < x.mig()) {
            return lv;
        } else {
            return std::nullopt;
        }
    }
    return lv;
}

namespace {

enum class NestStatus { done, unknown };

NestStatus build_nest(const DyadicInterval& C, const Precision& p, int max_depth, const NestOptions& opts,
                      NestRecord& rec) {
    rec = NestRecord{};
    rec.param = C;
    rec.precision = p;
    rec.renorm_period = opts.renorm_period;

    RootSearch fixed = isolate_roots(periodic_equation(C, 1), DyadicInterval(Dyadic(-2), Dyadic::ratio(1, 1)), p);
    if (!fixed.complete || fixed.roots.empty() || !fixed.roots.front().unique) return NestStatus::unknown;
    DyadicInterval alpha = fixed.roots.front().enclosure;
    rec.radius.push_back(alpha.abs());
    rec.return_times.push_back(0);
    rec.endpoint_sign.push_back(0);
    rec.central.push_back(false);
    rec.noncentral_levels.push_back(0);

    const Dyadic minus_three_quarters = -Dyadic::ratio(3, 2);
    if (minus_three_quarters <= C.lo()) return NestStatus::done;  // alpha is not repelling: nothing below I^0
    if (!(C.hi() < minus_three_quarters)) return NestStatus::unknown;

    std::vector<DyadicInterval> orbit = critical_orbit(C, 1, p).steps;
    auto v = [&](int j) -> const DyadicInterval& {
        while (static_cast<int>(orbit.size()) <= j) orbit.push_back(iv_quad_step(orbit.back(), C, p));
        return orbit[static_cast<std::size_t>(j)];
    };

    for (int m = 1; m <= max_depth; ++m) {
        const DyadicInterval T = rec.radius.back();
        int r = -1;
        for (int j = 1; j <= opts.max_return; ++j) {
            const DyadicInterval& x = v(j);
            if (x.mag() < T.lo()) {
                r = j;
                break;
            }
            if (!(T.hi() < x.mig())) return NestStatus::unknown;
        }
        if (r < 0) return NestStatus::done;  // no return within the bound

        std::optional<DyadicInterval> best;
        int best_sign = 0;
        for (int s : {1, -1}) {
            DyadicInterval shift = s > 0 ? T : iv_neg(T);
            // the domain reaches an eighth past t_{m-1}
            Dyadic reach = T.hi() + T.hi().scaled(-3);
            RootSearch rs = isolate_roots(iterate_minus(C, r, shift), DyadicInterval(Dyadic(), reach), p);
            if (!rs.complete) return NestStatus::unknown;
            if (rs.roots.empty()) continue;
            const RootEnclosure& first = rs.roots.front();
            if (!best || first.enclosure.lo() < best->lo()) {
                if (!first.unique) return NestStatus::unknown;
                best = first.enclosure;
                best_sign = s;
            }
        }
        if (!best || best->contains_zero()) return NestStatus::unknown;

        const DyadicInterval& vr = v(r);
        bool central;
        if (vr.mag() < best->lo()) {
            central = true;
        } else if (best->hi() < vr.mig()) {
            central = false;
        } else {
            return NestStatus::unknown;
        }
        if (!(best->hi() < T.lo())) rec.strict = false;
        rec.radius.push_back(*best);
        rec.return_times.push_back(r);
        rec.endpoint_sign.push_back(best_sign);
        rec.central.push_back(central);
        if (!central) rec.noncentral_levels.push_back(m);
        if (opts.renorm_period > 0 && r == opts.renorm_period) {
            rec.closure_level = m;
            return NestStatus::done;
        }
    }
    return NestStatus::done;
}

}  // namespace

NestRecord principal_nest(ParamOracle& o, int max_depth, const NestOptions& opts) {
    int cap = cap_of(opts.precision);
    NestRecord rec;
    for (int m = std::min(opts.precision.start_bits, cap);; m = std::min(cap, next_bits(m))) {
        DyadicInterval C = o.enclose(m);
        Precision p(working_precision(m));
        NestStatus st = build_nest(C, p, max_depth, opts, rec);
        if (st == NestStatus::done) return rec;
        if (m >= cap) {
            rec.truncated = true;
            return rec;
        }
    }
}

std::vector<CascadeInfo> cascades(const NestRecord& nest, const std::vector<DyadicInterval>& postcritical) {
    std::vector<CascadeInfo> out;
    const auto& nc = nest.noncentral_levels;
    for (std::size_t k = 0; k + 1 < nc.size(); ++k) {
        CascadeInfo ci;
        ci.start_level = nc[k];
        ci.end_level = nc[k + 1];
        std::size_t first = static_cast<std::size_t>(ci.start_level + 1);
        int r = nest.return_times[first];
        DyadicInterval vr = critical_orbit(nest.param, r, nest.precision).steps.back();
        if (auto s = vr.certain_sign()) ci.saddle_node = *s != 0 && *s == nest.endpoint_sign[first];

        int dk = 0;
        bool unknown = false;
        for (std::size_t j = 0; j < postcritical.size(); ++j) {
            auto lv = nest.level_of(postcritical[j]);
            if (!lv) {
                unknown = true;
                continue;
            }
            if (*lv != ci.start_level) continue;
            // first return of this postcritical point to I^{m(k)}
            std::optional<int> back;
            for (std::size_t s = j + 1; s < postcritical.size(); ++s) {
                auto ls = nest.level_of(postcritical[s]);
                if (!ls) {
                    unknown = true;
                    break;
                }
                if (*ls >= ci.start_level) {
                    back = *ls;
                    break;
                }
            }
            if (!back) continue;
            int jp = std::clamp(*back, ci.start_level, ci.end_level);
            dk = std::max(dk, std::min(jp - ci.start_level, ci.end_level - jp));
        }
        if (unknown) ci.saddle_node.reset();
        ci.depth_bound = dk;
        if (ci.saddle_node.value_or(false)) {
            ci.neglect_lo = ci.start_level + dk + 1;
            ci.neglect_hi = ci.end_level - dk - 1;
        }
        out.push_back(ci);
    }
    return out;
}

EssentialPeriod essential_period(ParamOracle& o, int max_period) {
    EssentialPeriod out;
    RenormSearch rs = detect_renormalization(o, max_period);
    if (!rs.found) {
        out.note = rs.undecided ? "renormalization undecided" : "not renormalizable up to the period bound";
        return out;
    }
    const Renormalization& R = *rs.found;
    int n1 = R.period;
    out.tau = R.tau;

    NestOptions no;
    no.renorm_period = n1;
    out.nest = principal_nest(o, 4 * n1 + 8, no);
    if (out.nest.truncated) {
        out.note = "principal nest undecided at precision cap";
        return out;
    }
    if (out.nest.closure_level < 0) {
        out.note = "no nest level returns with the renormalization period";
        return out;
    }
    std::vector<DyadicInterval> post = critical_orbit(out.nest.param, n1 - 1, out.nest.precision).steps;
    out.cascade_list = cascades(out.nest, post);
    for (const auto& c : out.cascade_list) {
        if (!c.saddle_node) {
            out.note = "saddle-node flag undecided";
            return out;
        }
    }

    EssentialType& et = out.type;
    et.period = n1;
    et.levels.assign(static_cast<std::size_t>(n1), 0);
    et.kept.assign(static_cast<std::size_t>(n1), true);
    int last_inside = out.nest.closure_level;
    et.levels[0] = last_inside;
    for (int i = 1; i < n1; ++i) {
        auto lv = out.nest.level_of(post[static_cast<std::size_t>(i)]);
        if (!lv) {
            out.note = "orbit level undecided";
            return out;
        }
        if (*lv >= 0) last_inside = std::min(*lv, out.nest.closure_level);
        et.levels[static_cast<std::size_t>(i)] = last_inside;
    }
    std::vector<DyadicInterval> kept_intervals;
    for (int i = 0; i < n1; ++i) {
        for (const auto& c : out.cascade_list) {
            if (c.neglectable(et.levels[static_cast<std::size_t>(i)])) et.kept[static_cast<std::size_t>(i)] = false;
        }
        if (et.kept[static_cast<std::size_t>(i)]) kept_intervals.push_back(R.cycle[static_cast<std::size_t>(i)]);
    }
    et.reduced = type_from_order(kept_intervals).perm;
    et.complete = true;
    out.value = static_cast<int>(kept_intervals.size());
    return out;
}

std::optional<bool> essentially_equivalent(const EssentialType& a, const EssentialType& b) {
    if (!a.complete || !b.complete) return std::nullopt;
    return a.reduced == b.reduced;
}

}  // namespace qal
