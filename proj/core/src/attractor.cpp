#include "qal/attractor.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <sstream>

namespace qal {

namespace {

int cap_of(const Budget& b) { return b.max_precision > 0 ? b.max_precision : max_precision_cap(); }

int next_bits(int m) { return m + std::max(8, m / 2); }

// Next oracle precision when enclosures of width w are needed at width t.
int deficit_bits(int m, const Dyadic& w, const std::optional<Dyadic>& t) {
    if (!t || w.is_zero()) return next_bits(m);
    auto d = dy_ceil_log2(w) - dy_floor_log2(*t);
    return m + static_cast<int>(std::clamp<std::int64_t>(d, 1, 4096));
}

Dyadic max_width(const std::vector<DyadicInterval>& xs) {
    Dyadic w;
    for (const auto& x : xs) w = dy_max(w, x.width());
    return w;
}

// Smallest k <= max_period with P^k(0) = 0, by exact arithmetic.
std::optional<int> exact_critical_period(const Dyadic& c, int max_period) {
    Dyadic x;
    for (int k = 1; k <= max_period; ++k) {
        x = x * x + c;
        if (x.is_zero()) return k;
        if (mpz_sizeinbase(x.mantissa().get_mpz_t(), 2) > 1u << 16) return std::nullopt;
    }
    return std::nullopt;
}

AttractorCertificate limit_cycle(CaseTag tag, CycleKind kind, std::vector<DyadicInterval> pieces) {
    AttractorCertificate cert;
    cert.case_tag = tag;
    cert.cls.kind = AttractorClass::Kind::limit_cycle;
    cert.cls.cycle_kind = kind;
    cert.cls.period = static_cast<int>(pieces.size());
    cert.delta = max_width(pieces);
    cert.pieces = std::move(pieces);
    return cert;
}

struct Builder {
    ParamOracle& o;
    const Hints& hints;
    const Budget& budget;
    std::optional<Dyadic> target;  // nullopt: classification only
    std::string note;

    bool fine(const Dyadic& w) const { return !target || w <= *target; }

    std::optional<AttractorCertificate> case_1b(int k) {
        ParamFacts f = o.facts();
        if (f.exact) {
            std::optional<int> per = exact_critical_period(*f.exact, std::max(k, 1));
            if (per != k) {
                note = "1b: critical point is not periodic with period " + std::to_string(k);
                return std::nullopt;
            }
            std::vector<DyadicInterval> pts;
            Dyadic x;
            for (int i = 0; i < k; ++i) {
                pts.emplace_back(x);
                x = x * x + *f.exact;
            }
            return limit_cycle(CaseTag::c1b, CycleKind::superattracting, std::move(pts));
        }
        if (f.superstable_period != k) {
            note = "1b: no exact periodicity of the critical point available";
            return std::nullopt;
        }
        int cap = cap_of(budget);
        for (int m = std::min(16, cap);;) {
            OrbitEnclosure orb = critical_orbit(o.enclose(m), k, Precision(working_precision(m)));
            int next = next_bits(m);
            if (!orb.blown_up) {
                std::vector<DyadicInterval> pts(orb.steps.begin(), orb.steps.begin() + k);
                Dyadic w = max_width(pts);
                if (fine(w)) return limit_cycle(CaseTag::c1b, CycleKind::superattracting, std::move(pts));
                next = deficit_bits(m, w, target);
            }
            if (m >= cap) break;
            m = std::min(next, cap);
        }
        note = "1b: precision cap reached";
        return std::nullopt;
    }

    std::optional<AttractorCertificate> case_1a() {
        CycleSearchOptions opts;
        opts.max_period = budget.max_period;
        opts.step_budget = budget.step_budget;
        opts.target_bits = target ? static_cast<int>(-dy_floor_log2(*target)) : 0;
        opts.max_precision = cap_of(budget);
        opts.start_bits = std::min(budget.start_bits, opts.max_precision);
        std::optional<CertifiedCycle> cyc = certify_attracting_cycle(o, opts);
        if (!cyc) {
            note = "1a: no attracting cycle certified within budget";
            return std::nullopt;
        }
        if (!fine(max_width(cyc->points))) {
            note = "1a: cycle enclosures too wide at the precision cap";
            return std::nullopt;
        }
        return limit_cycle(CaseTag::c1a, cyc->kind, cyc->points);
    }

    // Non-repelling period-k points, as enclosures permuted cyclically by the map.
    std::optional<AttractorCertificate> case_1c(int k) {
        int cap = cap_of(budget);
        const DyadicInterval domain(Dyadic(-2), Dyadic(2));
        for (int m = 32;; m = std::min(next_bits(m), cap)) {
            DyadicInterval C = o.enclose(m);
            Precision p(working_precision(m));
            RootOptions ro;
            if (target) ro.min_width_bits = static_cast<int>(-dy_floor_log2(*target)) + 4;
            PeriodicPoints pp = isolate_periodic_points(C, k, p, domain, ro);
            std::vector<DyadicInterval> kept;
            if (pp.complete) {
                for (const auto& pt : pp.points) {
                    if (Dyadic(1) < pt.multiplier.mig()) continue;
                    if (!kept.empty() && kept.back().overlaps(pt.enclosure))
                        kept.back() = hull(kept.back(), pt.enclosure);
                    else
                        kept.push_back(pt.enclosure);
                }
            }
            if (!kept.empty() && fine(max_width(kept))) {
                if (auto cert = cyclic_pieces(kept, C, p)) return cert;
            }
            if (m >= cap) break;
        }
        note = "1c: non-repelling period-" + std::to_string(k) + " points not separated at the precision cap";
        return std::nullopt;
    }

    std::optional<AttractorCertificate> cyclic_pieces(const std::vector<DyadicInterval>& kept,
                                                      const DyadicInterval& C, const Precision& p) {
        std::size_t q = kept.size();
        std::vector<std::size_t> next(q);
        for (std::size_t i = 0; i < q; ++i) {
            DyadicInterval img = iv_quad_step(kept[i], C, p);
            int hits = 0;
            for (std::size_t j = 0; j < q; ++j) {
                if (img.overlaps(kept[j])) {
                    next[i] = j;
                    ++hits;
                }
            }
            if (hits != 1) return std::nullopt;
        }
        std::vector<DyadicInterval> orbit;
        std::size_t i = 0;
        do {
            orbit.push_back(kept[i]);
            i = next[i];
        } while (i != 0 && orbit.size() <= q);
        if (orbit.size() != q || i != 0) return std::nullopt;
        CycleKind kind = classify_cycle(orbit, o.facts(), p);
        if (kind == CycleKind::undecided && hints.case_tag == CaseTag::c1c) kind = CycleKind::parabolic;
        return limit_cycle(CaseTag::c1c, kind, std::move(orbit));
    }

    // Orbit of J_0 = [P^k(0), P^{2k}(0)] tracked through enclosures of its endpoints.
    std::optional<AttractorCertificate> case_2(int k) {
        int cap = cap_of(budget);
        for (int m = std::min(16, cap);;) {
            DyadicInterval C = o.enclose(m);
            Precision p(working_precision(m));
            OrbitEnclosure orb = critical_orbit(C, 2 * k, p);
            Dyadic w;
            if (auto cert = interval_cycle(orb, C, k, p, &w)) return cert;
            if (m >= cap) break;
            m = std::min(w.is_zero() ? next_bits(m) : deficit_bits(m, w, target), cap);
        }
        return std::nullopt;
    }

    std::optional<AttractorCertificate> interval_cycle(const OrbitEnclosure& orb, const DyadicInterval& C, int k,
                                                       const Precision& p, Dyadic* width) {
        if (orb.blown_up) return std::nullopt;
        DyadicInterval a = orb.steps[static_cast<std::size_t>(k)];
        DyadicInterval b = orb.steps[static_cast<std::size_t>(2 * k)];
        if (b.hi() < a.lo()) std::swap(a, b);
        if (!(a.hi() < b.lo())) {
            note = "2: endpoints of J_0 not separated";
            return std::nullopt;
        }
        DyadicInterval J0(a.lo(), b.hi());
        std::vector<DyadicInterval> pieces;
        Dyadic delta;
        DyadicInterval lo = a, hi = b;
        for (int i = 0; i <= k; ++i) {
            if (i == k) {
                // f^k(J_0) must land back on J_0
                if (J0.hi() < lo.lo() || hi.hi() < J0.lo() || hi.hi() < lo.lo()) {
                    note = "2: hinted period does not close up";
                    return std::nullopt;
                }
                break;
            }
            pieces.emplace_back(lo.lo(), dy_max(lo.hi(), hi.hi()));
            delta = dy_max(delta, dy_max(lo.width(), hi.width()));
            DyadicInterval flo = iv_quad_step(lo, C, p), fhi = iv_quad_step(hi, C, p);
            DyadicInterval nlo, nhi = hull(flo, fhi);
            if (lo.hi().sign() <= 0 && hi.lo().sign() >= 0) {
                nlo = C;
            } else if (lo.lo().sign() > 0) {
                nlo = flo;
                nhi = fhi;
            } else if (hi.hi().sign() < 0) {
                nlo = fhi;
                nhi = flo;
            } else {
                nlo = hull(C, hull(flo, fhi));
            }
            if (lo.hi().sign() < 0 && hi.lo().sign() > 0) {
                if (lo.mag() < hi.mig()) nhi = fhi;
                else if (hi.mag() < lo.mig()) nhi = flo;
            }
            lo = nlo;
            hi = nhi;
        }
        *width = delta;
        if (!fine(delta)) return std::nullopt;
        AttractorCertificate cert;
        cert.case_tag = CaseTag::c2;
        cert.cls.kind = AttractorClass::Kind::interval_cycle;
        cert.cls.period = k;
        cert.pieces = std::move(pieces);
        cert.delta = delta;
        return cert;
    }

    std::optional<AttractorCertificate> case_3() {
        if (budget.max_period < 2) {
            note = "3: period budget below 2";
            return std::nullopt;
        }
        RenormOptions ro;
        ro.max_precision = cap_of(budget);
        ro.start_bits = std::min(budget.start_bits, ro.max_precision);
        RenormSearch first = detect_renormalization(o, budget.max_period, ro);
        if (!first.found) {
            note = "3: no renormalization found" + (first.note.empty() ? "" : ": " + first.note);
            return std::nullopt;
        }
        AttractorCertificate cert;
        cert.case_tag = CaseTag::c3;
        cert.cls.kind = AttractorClass::Kind::feigenbaum_like;
        Renormalization cur = *first.found;
        cert.cls.prefix.push_back(cur.tau);
        int max_levels = target ? budget.max_levels : budget.max_depth;
        int factor = std::clamp(budget.max_period / 2, 2, 4);
        for (int level = 1;; ++level) {
            cert.pieces = cur.cycle;
            cert.delta = max_width(cur.cycle);
            cert.levels = level;
            cert.cls.period = cur.period;
            if (target ? fine(cert.delta) : level >= max_levels) return cert;
            if (level >= max_levels) break;
            RenormSearch deeper = detect_renormalization_within(o, cur, factor, ro);
            if (!deeper.found) {
                note = "3: tower stops at level " + std::to_string(level) +
                       (deeper.note.empty() ? "" : ": " + deeper.note);
                return std::nullopt;
            }
            cert.cls.prefix.push_back(relative_type(*deeper.found, cur));
            cur = *deeper.found;
        }
        note = "3: tower level budget exhausted before the components shrank";
        return std::nullopt;
    }

    std::optional<AttractorCertificate> run() {
        ParamFacts f = o.facts();
        std::optional<int> k = hints.period;
        if (hints.case_tag) {
            switch (*hints.case_tag) {
            case CaseTag::c1a: return case_1a();
            case CaseTag::c1b:
                if (!k) k = f.superstable_period;
                if (!k && f.exact) k = exact_critical_period(*f.exact, budget.max_period);
                if (!k) break;
                return case_1b(*k);
            case CaseTag::c1c:
                if (!k) k = f.parabolic_period;
                if (!k) break;
                return case_1c(*k);
            case CaseTag::c2:
                if (!k) break;
                return case_2(*k);
            case CaseTag::c3: return case_3();
            }
            note = to_string(*hints.case_tag) + ": needs a period hint";
            return std::nullopt;
        }
        std::optional<int> sp = f.superstable_period;
        if (!sp && f.exact) sp = exact_critical_period(*f.exact, budget.max_period);
        if (sp)
            if (auto c = case_1b(*sp)) return c;
        if (f.parabolic_period)
            if (auto c = case_1c(*f.parabolic_period)) return c;
        if (auto c = case_1a()) return c;
        if (k) {
            if (auto c = case_1c(*k)) return c;
            if (auto c = case_2(*k)) return c;
        }
        return case_3();
    }
};

Classification build(ParamOracle& o, std::optional<int> n, const Hints& hints, const Budget& budget) {
    if (hints.period && *hints.period < 1) throw std::invalid_argument("hinted period must be at least 1");
    require_in_range(o);
    std::optional<Dyadic> target;
    if (n) target = dy_pow2(-(*n + 2));
    Builder b{o, hints, budget, target, {}};
    Classification out;
    try {
        out.certificate = b.run();
    } catch (const OracleFault& e) {
        b.note = std::string("oracle: ") + e.what();
    }
    if (!out.certificate) out.note = b.note.empty() ? "undecided within budget" : b.note;
    return out;
}

Dyadic distance(const Dyadic& x, const DyadicInterval& K) {
    if (x < K.lo()) return K.lo() - x;
    if (K.hi() < x) return x - K.hi();
    return Dyadic();
}

Dyadic floor_to(const Dyadic& x, int bits) { return dy_round(x, bits, Rounding::down); }

}  // namespace

std::string to_string(CaseTag t) {
    switch (t) {
    case CaseTag::c1a: return "1a";
    case CaseTag::c1b: return "1b";
    case CaseTag::c1c: return "1c";
    case CaseTag::c2: return "2";
    case CaseTag::c3: return "3";
    }
    return "?";
}

std::optional<CaseTag> parse_case_tag(std::string_view s) {
    for (CaseTag t : {CaseTag::c1a, CaseTag::c1b, CaseTag::c1c, CaseTag::c2, CaseTag::c3})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::string AttractorClass::str() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::limit_cycle: os << "LimitCycle " << to_string(cycle_kind) << " period=" << period; break;
    case Kind::interval_cycle: os << "IntervalCycle period=" << period; break;
    case Kind::feigenbaum_like:
        os << "FeigenbaumLike depth=" << prefix.size() << " types=";
        for (std::size_t i = 0; i < prefix.size(); ++i) os << (i ? "," : "") << prefix[i].str();
        os << " complete=" << (complete ? "true" : "false");
        break;
    }
    return os.str();
}

Classification classify(ParamOracle& o, const Hints& hints, const Budget& budget) {
    return build(o, std::nullopt, hints, budget);
}

Classification certify_attractor(ParamOracle& o, int n, const Hints& hints, const Budget& budget) {
    if (n < 0) throw std::invalid_argument("resolution must be non-negative");
    return build(o, n, hints, budget);
}

ApproxSet approximate_from(const AttractorCertificate& cert, int n) {
    if (dy_pow2(-(n + 2)) < cert.delta) throw std::invalid_argument("certificate too coarse for this resolution");
    ApproxSet out;
    out.resolution = n;
    out.certificate = cert;
    Dyadic step = dy_pow2(-(n + 1));
    for (const auto& K : cert.pieces) {
        if (K.width() <= dy_pow2(-(n + 2))) {
            out.points.push_back(dy_round(K.mid(), n + 2, Rounding::nearest));
            continue;
        }
        for (Dyadic x = floor_to(K.lo(), n + 1); x < K.hi() + step; x += step) out.points.push_back(x);
    }
    std::sort(out.points.begin(), out.points.end());
    out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
    return out;
}

ApproxSet approximate(ParamOracle& o, int n, const Hints& hints, const Budget& budget) {
    Classification c = certify_attractor(o, n, hints, budget);
    if (!c.certificate) throw AttractorUndecided(c.note);
    return approximate_from(*c.certificate, n);
}

int pixel_query(const AttractorCertificate& cert, int n, const Dyadic& x) {
    if (cert.pieces.empty()) throw std::invalid_argument("empty certificate");
    Dyadic lower = distance(x, cert.pieces.front());
    for (const auto& K : cert.pieces) lower = dy_min(lower, distance(x, K));
    Dyadic band = dy_pow2(-n);
    if (lower + cert.delta < band.scaled(1)) return 1;
    if (band < lower) return 0;
    throw std::invalid_argument("certificate too coarse for this resolution");
}

int pixel_query(ParamOracle& o, int n, const Dyadic& x, const Hints& hints, const Budget& budget) {
    if (!x.in_D(n)) throw std::invalid_argument("pixel centre must lie in D_n");
    if (x < Dyadic(-2) || Dyadic(2) < x) throw std::invalid_argument("pixel centre outside [-2, 2]");
    Classification c = certify_attractor(o, n, hints, budget);
    if (!c.certificate) throw AttractorUndecided(c.note);
    return pixel_query(*c.certificate, n, x);
}

std::vector<int> render_row(const AttractorCertificate& cert, int n, const DyadicInterval& viewport) {
    std::vector<int> row;
    Dyadic step = dy_pow2(-n);
    Dyadic x = dy_round(viewport.lo(), n, Rounding::up);
    for (; x <= viewport.hi(); x += step) row.push_back(pixel_query(cert, n, x));
    return row;
}

std::vector<int> render(ParamOracle& o, int n, const DyadicInterval& viewport, const Hints& hints,
                        const Budget& budget) {
    if (viewport.lo() < Dyadic(-2) || Dyadic(2) < viewport.hi()) throw std::invalid_argument("viewport outside [-2, 2]");
    Classification c = certify_attractor(o, n, hints, budget);
    if (!c.certificate) throw AttractorUndecided(c.note);
    return render_row(*c.certificate, n, viewport);
}

std::string to_pgm(const std::vector<int>& row) {
    std::string out = "P5\n# 0 (black) marks pixels within 2^-n of the attractor\n";
    out += std::to_string(row.size()) + " 1\n255\n";
    for (int b : row) out.push_back(static_cast<char>(b ? 0 : 255));
    return out;
}

std::string format_points(const ApproxSet& s) {
    std::string out;
    for (const auto& x : s.points) out += x.str() + "\n";
    return out;
}

}  // namespace qal
