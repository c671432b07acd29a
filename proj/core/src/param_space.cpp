#include "qal/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace qal {

namespace {

int rank_of(char s) { return s == 'L' ? 0 : s == 'C' ? 1 : 2; }

char symbol_of(const DyadicInterval& x) {
    if (x.is_point() && x.lo().is_zero()) return 'C';
    auto s = x.certain_sign();
    if (!s) return '?';
    return *s < 0 ? 'L' : 'R';
}

Sign sign_at_cap(const std::function<Sign(const Precision&)>& f, int start, int cap) {
    for (int p = start;; p = std::min(cap, 2 * p)) {
        Sign s = f(Precision(p));
        if (s != Sign::undecided || p >= cap) return s;
    }
}

// x = P^k_c(w) with the partial derivatives needed by the parabolic and flip systems.
template <class T>
struct Jet {
    T x, d, s, e, t;  // x, dx/dw, dx/dc, d^2x/dw^2, d^2x/dcdw
};

struct LdSystem {
    long double f[2];
    long double j[2][2];  // columns: c, w
};

LdSystem eval_ld(long double c, long double w, int k, long double lambda) {
    long double x = w, d = 1, s = 0, e = 0, t = 0;
    for (int i = 0; i < k; ++i) {
        long double ne = 2 * (d * d + x * e);
        long double nt = 2 * (s * d + x * t);
        d = 2 * x * d;
        s = 2 * x * s + 1;
        x = x * x + c;
        e = ne;
        t = nt;
    }
    return {{x - w, d - lambda}, {{s, d - 1}, {t, e}}};
}

bool newton_ld(long double& c, long double& w, int k, long double lambda, int steps = 80) {
    for (int i = 0; i < steps; ++i) {
        LdSystem s = eval_ld(c, w, k, lambda);
        long double det = s.j[0][0] * s.j[1][1] - s.j[0][1] * s.j[1][0];
        if (det == 0 || !std::isfinite(det)) return false;
        long double dc = (s.f[0] * s.j[1][1] - s.f[1] * s.j[0][1]) / det;
        long double dw = (s.j[0][0] * s.f[1] - s.j[1][0] * s.f[0]) / det;
        c -= dc;
        w -= dw;
        if (!std::isfinite(c) || !std::isfinite(w)) return false;
        if (std::fabs(dc) + std::fabs(dw) < 1e-18L * (1 + std::fabs(c) + std::fabs(w))) return true;
    }
    return true;
}

// Follows the cycle through 0 at the centre while its multiplier moves from 0 to lambda_end.
bool continue_multiplier(long double& c, long double& w, int n, long double lambda_end) {
    const long double steps[] = {0.05L, 0.1L, 0.2L, 0.3L, 0.4L, 0.5L, 0.6L, 0.7L, 0.8L,
                                 0.85L, 0.9L, 0.93L, 0.96L, 0.98L, 0.99L, 0.995L, 1.0L};
    for (long double lam : steps) {
        if (lam > lambda_end) lam = lambda_end;
        if (!newton_ld(c, w, n, lam)) return false;
        if (lam >= lambda_end) break;
    }
    return true;
}

struct Box2 {
    DyadicInterval c, w;
};

struct IvSystem {
    DyadicInterval f[2];
    DyadicInterval j[2][2];
};

IvSystem eval_iv(const DyadicInterval& C, const DyadicInterval& W, int k, int lambda, const Precision& p) {
    DyadicInterval x = W, d(Dyadic(1)), s(Dyadic(0)), e(Dyadic(0)), t(Dyadic(0));
    for (int i = 0; i < k; ++i) {
        DyadicInterval ne = iv_scale2(iv_add(iv_sqr(d, p), iv_mul(x, e, p), p), 1);
        DyadicInterval nt = iv_scale2(iv_add(iv_mul(s, d, p), iv_mul(x, t, p), p), 1);
        DyadicInterval x2 = iv_scale2(x, 1);
        d = iv_mul(x2, d, p);
        s = iv_add(iv_mul(x2, s, p), DyadicInterval(Dyadic(1)), p);
        x = iv_quad_step(x, C, p);
        e = ne;
        t = nt;
    }
    IvSystem out;
    out.f[0] = iv_sub(x, W, p);
    out.f[1] = iv_sub(d, DyadicInterval(Dyadic(lambda)), p);
    out.j[0][0] = s;
    out.j[0][1] = iv_sub(d, DyadicInterval(Dyadic(1)), p);
    out.j[1][0] = t;
    out.j[1][1] = e;
    return out;
}

// Krawczyk operator K(X) = m - Y F(m) + (I - Y F'(X)) (X - m).
std::optional<Box2> krawczyk(const Box2& X, int k, int lambda, const Precision& p) {
    Dyadic mc = X.c.mid(), mw = X.w.mid();
    IvSystem fm = eval_iv(DyadicInterval(mc), DyadicInterval(mw), k, lambda, p);
    IvSystem fx = eval_iv(X.c, X.w, k, lambda, p);
    double a = fm.j[0][0].mid().to_double(), b = fm.j[0][1].mid().to_double();
    double c = fm.j[1][0].mid().to_double(), d = fm.j[1][1].mid().to_double();
    double det = a * d - b * c;
    if (det == 0 || !std::isfinite(det)) return std::nullopt;
    double yd[2][2] = {{d / det, -b / det}, {-c / det, a / det}};
    DyadicInterval Y[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!std::isfinite(yd[i][j])) return std::nullopt;
            Y[i][j] = DyadicInterval(Dyadic::from_double(yd[i][j]));
        }
    }
    DyadicInterval dx[2] = {iv_sub(X.c, DyadicInterval(mc), p), iv_sub(X.w, DyadicInterval(mw), p)};
    DyadicInterval mid[2] = {DyadicInterval(mc), DyadicInterval(mw)};
    DyadicInterval K[2];
    for (int i = 0; i < 2; ++i) {
        DyadicInterval yf = iv_add(iv_mul(Y[i][0], fm.f[0], p), iv_mul(Y[i][1], fm.f[1], p), p);
        DyadicInterval acc = iv_sub(mid[i], yf, p);
        for (int j = 0; j < 2; ++j) {
            DyadicInterval yj = iv_add(iv_mul(Y[i][0], fx.j[0][j], p), iv_mul(Y[i][1], fx.j[1][j], p), p);
            DyadicInterval mij = iv_sub(DyadicInterval(Dyadic(i == j ? 1 : 0)), yj, p);
            acc = iv_add(acc, iv_mul(mij, dx[j], p), p);
        }
        K[i] = acc;
    }
    return Box2{K[0], K[1]};
}

// Unique zero of the system near the guess, shrunk until the c-width is at most 2^-target_bits.
struct SystemRoot {
    int k = 0;
    int lambda = 1;
    Box2 box;
};

std::optional<SystemRoot> certify_system(long double gc, long double gw, int k, int lambda, int target_bits) {
    int bits = target_bits + 64 + 4 * k;
    Dyadic c0 = Dyadic::from_double(static_cast<double>(gc));
    Dyadic w0 = Dyadic::from_double(static_cast<double>(gw));
    for (int e : {44, 36, 28, 20, 14}) {
        Dyadic r = dy_pow2(-e);
        Box2 X{DyadicInterval(c0 - r, c0 + r), DyadicInterval(w0 - r, w0 + r)};
        auto K = krawczyk(X, k, lambda, Precision(bits));
        if (!K || !X.c.interior_contains(K->c) || !X.w.interior_contains(K->w)) continue;
        return SystemRoot{k, lambda, Box2{*intersect(K->c, X.c), *intersect(K->w, X.w)}};
    }
    return std::nullopt;
}

// Shrinks a certified box; a root stays inside K(X) n X for any X that holds it.
void shrink(SystemRoot& r, int target_bits) {
    Dyadic target = dy_pow2(-target_bits);
    int bits = target_bits + 64 + 4 * r.k;
    int cap = std::max(max_precision_cap(), bits);
    while (target < r.box.c.width()) {
        auto K = krawczyk(r.box, r.k, r.lambda, Precision(bits));
        std::optional<DyadicInterval> nc, nw;
        if (K) {
            nc = intersect(K->c, r.box.c);
            nw = intersect(K->w, r.box.w);
        }
        if (!nc || !nw) throw SolverError("Krawczyk iteration lost its root");
        bool progress = nc->width() * Dyadic(2) <= r.box.c.width();
        r.box = Box2{*nc, *nw};
        if (!progress) {
            if (bits >= cap) throw SolverError("Krawczyk iteration stalled at the precision cap");
            bits = std::min(cap, bits + 64);
        }
    }
}

DyadicInterval center_enclosure(ParamOracle& center, int bits) { return center.enclose(bits); }

bool is_doubled(const std::string& k) {
    std::size_t n = k.size();
    if (n < 2 || n % 2 != 0) return false;
    std::string half = k.substr(n / 2);
    if (half.back() != 'C') return false;
    return doubled_itinerary(half) == k;
}

SystemRoot solve_right(ParamOracle& center, int n, bool satellite, int target_bits) {
    long double c = std::stold(center_enclosure(center, 64).mid().decimal(24));
    long double w = 0;
    if (!satellite) {
        if (!continue_multiplier(c, w, n, 1.0L)) throw SolverError("multiplier continuation failed");
        auto r = certify_system(c, w, n, 1, target_bits);
        if (!r) throw SolverError("parabolic system not certified for period " + std::to_string(n));
        shrink(*r, target_bits);
        return *r;
    }
    int k = n / 2;
    if (!continue_multiplier(c, w, n, 0.99L)) throw SolverError("multiplier continuation failed");
    if (!newton_ld(c, w, k, -1.0L)) throw SolverError("flip system diverged");
    auto r = certify_system(c, w, k, -1, target_bits);
    if (!r) throw SolverError("flip system not certified for period " + std::to_string(k));
    shrink(*r, target_bits);
    return *r;
}

// G(c) = P^{2n}_c(0) - P^{3n}_c(0) and dG/dc.
IntervalFunction left_equation(int n) {
    return [n](const DyadicInterval& C, const Precision& p) {
        DyadicInterval x(Dyadic(0)), s(Dyadic(0)), x2n, s2n;
        for (int i = 0; i < 3 * n; ++i) {
            if (i == 2 * n) {
                x2n = x;
                s2n = s;
            }
            s = iv_add(iv_mul(iv_scale2(x, 1), s, p), DyadicInterval(Dyadic(1)), p);
            x = iv_quad_step(x, C, p);
        }
        return FunctionEnclosure{iv_sub(x2n, x, p), iv_sub(s2n, s, p)};
    };
}

Sign left_sign(int n, const DyadicInterval& C, const Precision& p) {
    OrbitEnclosure o = critical_orbit(C, 3 * n, p);
    if (o.blown_up) return Sign::undecided;
    return sign_of(iv_sub(o.steps[static_cast<std::size_t>(2 * n)], o.steps[static_cast<std::size_t>(3 * n)], p));
}

DyadicInterval solve_left(int n, const DyadicInterval& cen, const DyadicInterval& right, const WindowOptions& opts) {
    Dyadic h = dy_round((right.mid() - cen.mid()).scaled(-3), 48, Rounding::down);
    if (h.sign() <= 0) throw SolverError("right endpoint is not to the right of the centre");
    int cap = max_precision_cap();
    auto sign_at = [&](const Dyadic& x) {
        return sign_at_cap([&](const Precision& p) { return left_sign(n, DyadicInterval(x), p); }, 64, cap);
    };
    Dyadic prev = cen.lo();
    Sign s0 = sign_at(cen.mid() - h);
    if (s0 == Sign::undecided || s0 == Sign::zero) throw SolverError("left-endpoint scan could not start");
    std::optional<Dyadic> stop;
    for (int j = 1; j <= opts.max_scan_steps; ++j) {
        Dyadic x = cen.mid() - h * Dyadic(j);
        if (x < Dyadic(-2)) break;
        Sign s = sign_at(x);
        if (s == Sign::undecided) throw SolverError("left-endpoint scan undecided at the precision cap");
        if (s != s0) {
            stop = x;
            break;
        }
        prev = x;
    }
    if (!stop) throw SolverError("no sign change left of the centre");
    int bits = std::max(96 + 6 * n, opts.target_bits + 32);
    RootOptions ro;
    ro.max_boxes = 400'000;
    RootSearch rs = isolate_roots(left_equation(n), DyadicInterval(*stop, prev), Precision(bits), ro);
    if (!rs.complete) throw SolverError("left-endpoint isolation ran out of boxes");
    DyadicInterval keep_out = inflate(cen, cen.width() + dy_pow2(-(bits / 2)));
    for (auto it = rs.roots.rbegin(); it != rs.roots.rend(); ++it) {
        if (it->enclosure.overlaps(keep_out)) continue;
        if (!it->unique) throw SolverError("left endpoint not separated from a nearby root");
        return it->enclosure;
    }
    throw SolverError("left endpoint not found");
}

class FeigenbaumState {
public:
    explicit FeigenbaumState(int cap) : cap_(cap) {
        centers_.push_back(DyadicInterval(Dyadic(0)));
        centers_.push_back(DyadicInterval(Dyadic(-1)));
    }

    DyadicInterval refine(int bits) {
        std::lock_guard<std::mutex> lock(mu_);
        Dyadic target = dy_pow2(-bits);
        for (std::size_t k = 1;; ++k) {
            ensure(k + 1, bits + 8);
            const DyadicInterval& a = centers_[k];
            const DyadicInterval& b = centers_[k + 1];
            DyadicInterval e(b.lo() - (a.hi() - b.lo()), b.hi());
            if (e.width() <= target) return e;
        }
    }

private:
    void ensure(std::size_t k, int bits) {
        if (static_cast<int>(k) > cap_) throw OracleFault("feigenbaum: depth cap reached");
        Dyadic want = dy_pow2(-bits);
        while (oracles_.size() + 2 <= k) oracles_.emplace_back();
        for (std::size_t j = 2; j <= k; ++j) {
            if (j < centers_.size() && centers_[j].width() <= want) continue;
            auto& slot = oracles_[j - 2];
            if (!slot) slot = std::make_unique<ParamOracle>(make_center(j));
            DyadicInterval e = slot->enclose(bits + 2);
            if (j < centers_.size()) {
                centers_[j] = e;
            } else {
                centers_.push_back(e);
            }
            check_ratio(j);
        }
    }

    ParamOracle make_center(std::size_t j) {
        const DyadicInterval& u = centers_[j - 1];
        Dyadic gap = centers_[j - 2].hi() - u.lo();
        Dyadic top = u.lo();
        std::string target = doubling_itinerary(static_cast<int>(j));
        std::string spec = "doubling-center:" + std::to_string(j);
        try {
            return kneading_center(target, DyadicInterval(top - gap.scaled(-1), top), spec);
        } catch (const OracleFault&) {
            return kneading_center(target, DyadicInterval(top - gap, top), spec);
        }
    }

    // The tail bound needs d_{j-1} >= 2 d_j.
    void check_ratio(std::size_t j) {
        if (j < 2) return;
        Dyadic prev = centers_[j - 2].lo() - centers_[j - 1].hi();
        Dyadic cur = centers_[j - 1].hi() - centers_[j].lo();
        if (prev < cur * Dyadic(2)) throw OracleFault("feigenbaum: doubling ratio below 2");
    }

    int cap_;
    std::vector<DyadicInterval> centers_;
    std::vector<std::unique_ptr<ParamOracle>> oracles_;
    std::mutex mu_;
};

}  // namespace

int itinerary_compare(std::string_view a, std::string_view b) {
    bool flip = false;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
            int r = rank_of(a[i]) < rank_of(b[i]) ? -1 : 1;
            return flip ? -r : r;
        }
        if (a[i] == 'L') flip = !flip;
    }
    return 0;
}

std::string doubled_itinerary(std::string_view k) {
    if (k.empty() || k.back() != 'C') throw std::invalid_argument("itinerary must end in C");
    std::string head(k.substr(0, k.size() - 1));
    long ls = std::count(head.begin(), head.end(), 'L');
    return head + (ls % 2 == 1 ? 'R' : 'L') + std::string(k);
}

std::string doubling_itinerary(int level) {
    if (level < 0) throw std::invalid_argument("negative doubling level");
    std::string k = "C";
    for (int i = 0; i < level; ++i) k = doubled_itinerary(k);
    return k;
}

std::string eps_itinerary(int n) {
    if (n < 1) throw std::invalid_argument("eps family index must be positive");
    std::string s = "LR";
    for (int i = 1; i < n; ++i) s += "LLR";
    return s + "LLC";
}

ParamOracle kneading_center(const std::string& target, const DyadicInterval& bracket, std::string spec) {
    if (target.empty() || target.back() != 'C') throw std::invalid_argument("target itinerary must end in C");
    int N = static_cast<int>(target.size());
    auto pred = [target, N](const DyadicInterval& C, const Precision& p) {
        OrbitEnclosure o = critical_orbit(C, N, p);
        if (o.blown_up) return Sign::undecided;
        bool flip = false;
        for (int j = 1; j <= N; ++j) {
            char s = symbol_of(o.steps[static_cast<std::size_t>(j)]);
            char t = target[static_cast<std::size_t>(j - 1)];
            if (s == '?') return Sign::undecided;
            if (s != t) {
                bool less = rank_of(s) < rank_of(t);
                if (flip) less = !less;
                return less ? Sign::neg : Sign::pos;
            }
            if (s == 'C') return Sign::zero;
            if (s == 'L') flip = !flip;
        }
        return Sign::zero;
    };
    ParamFacts f;
    f.superstable_period = N;
    return oracle_bisect(pred, bracket, f, std::move(spec));
}

std::vector<DyadicInterval> superstable_centers(int n, int count) {
    if (n < 1) throw std::invalid_argument("period must be positive");
    Precision p(64 + 4 * n);
    IntervalFunction g = [n](const DyadicInterval& C, const Precision& q) {
        DyadicInterval x(Dyadic(0)), s(Dyadic(0));
        for (int i = 0; i < n; ++i) {
            s = iv_add(iv_mul(iv_scale2(x, 1), s, q), DyadicInterval(Dyadic(1)), q);
            x = iv_quad_step(x, C, q);
        }
        return FunctionEnclosure{x, s};
    };
    std::vector<DyadicInterval> out;
    Dyadic step = Dyadic::ratio(1, 3);
    // chunk boundaries avoid the dyadic centres 0 and -1
    for (Dyadic hi = Dyadic::ratio(1, 2) + Dyadic::ratio(5, 25); Dyadic(-2) < hi && static_cast<int>(out.size()) < count; hi -= step) {
        DyadicInterval chunk(dy_max(Dyadic(-2), hi - step), hi);
        RootSearch rs = isolate_roots(g, chunk, p);
        if (!rs.complete) throw SolverError("centre isolation ran out of boxes for period " + std::to_string(n));
        for (auto it = rs.roots.rbegin(); it != rs.roots.rend() && static_cast<int>(out.size()) < count; ++it) {
            if (!it->unique) throw SolverError("centres of period " + std::to_string(n) + " not separated");
            if (!out.empty() && out.back().overlaps(it->enclosure)) continue;
            OrbitEnclosure o = critical_orbit(it->enclosure, n, p);
            bool minimal = true;
            for (int d = 1; d < n && minimal; ++d) {
                if (n % d == 0 && o.steps[static_cast<std::size_t>(d)].contains_zero()) minimal = false;
            }
            if (minimal) out.push_back(it->enclosure);
        }
    }
    return out;
}

ParamOracle superstable_center(int n, int index) {
    if (index < 0) throw std::invalid_argument("negative centre index");
    std::vector<DyadicInterval> cs = superstable_centers(n, index + 1);
    if (static_cast<int>(cs.size()) <= index) {
        throw SolverError("period " + std::to_string(n) + " has no centre with index " + std::to_string(index));
    }
    auto pred = [n](const DyadicInterval& C, const Precision& p) {
        OrbitEnclosure o = critical_orbit(C, n, p);
        return o.blown_up ? Sign::undecided : sign_of(o.steps.back());
    };
    ParamFacts f;
    f.superstable_period = n;
    std::string spec = "superstable:" + std::to_string(n) + ":" + std::to_string(index);
    return oracle_bisect(pred, cs[static_cast<std::size_t>(index)], f, spec);
}

RenormWindow window_of_center(ParamOracle& center, int n, const WindowOptions& opts) {
    if (n < 2) throw std::invalid_argument("window period must be at least 2");
    KneadingSequence ks = kneading(center, n + 1);
    if (ks.certified_length < n + 1) throw SolverError("centre itinerary not certified");
    std::string itin = ks.symbols.substr(1);
    if (itin.back() != 'C' || itin.find('C') != itin.size() - 1) throw SolverError("not a centre of period n");

    RenormWindow w;
    w.period = n;
    w.satellite = is_doubled(itin);
    w.center = center.enclose(opts.target_bits + 24);
    SystemRoot r = solve_right(center, n, w.satellite, opts.target_bits);
    w.right = r.box.c;
    if (!(w.center.hi() < w.right.lo())) throw SolverError("right endpoint not right of the centre");
    w.left = solve_left(n, w.center, w.right, opts);
    RenormSearch rs = detect_renormalization_of_period(center, n);
    if (rs.found) w.tau = rs.found->tau;
    return w;
}

RenormWindow window_endpoints(int n, int index, const WindowOptions& opts) {
    ParamOracle c = superstable_center(n, index);
    return window_of_center(c, n, opts);
}

ParamOracle window_left(int n, int index) {
    RenormWindow w = window_endpoints(n, index);
    auto pred = [n](const DyadicInterval& C, const Precision& p) { return left_sign(n, C, p); };
    return oracle_bisect(pred, w.left, {}, "window-left:" + std::to_string(n));
}

ParamOracle window_right(int n, int index) {
    ParamOracle c = superstable_center(n, index);
    KneadingSequence ks = kneading(c, n + 1);
    bool satellite = is_doubled(ks.symbols.substr(1));
    auto root = std::make_shared<SystemRoot>(solve_right(c, n, satellite, 40));
    auto mu = std::make_shared<std::mutex>();
    auto refine = [root, mu](int bits) {
        std::lock_guard<std::mutex> lock(*mu);
        shrink(*root, bits);
        return root->box.c;
    };
    ParamFacts f;
    f.parabolic_period = n;
    return oracle_refiner(refine, f, "window-right:" + std::to_string(n));
}

ParamOracle epsilon_family(int n) {
    return kneading_center(eps_itinerary(n), DyadicInterval(Dyadic::ratio(-7, 2), Dyadic::ratio(-3, 1)),
                           "eps-family:" + std::to_string(n));
}

std::optional<bool> eps_constraints_hold(ParamOracle& o, int n) {
    NestRecord nest = principal_nest(o, 1);
    if (nest.depth() < 1) return std::nullopt;
    std::vector<DyadicInterval> v = critical_orbit(nest.param, 3 * n, nest.precision).steps;
    for (int i = 1; i <= n; ++i) {
        auto lvl = nest.level_of(v[static_cast<std::size_t>(3 * i)]);
        if (!lvl) return std::nullopt;
        if (i < n ? *lvl < 1 : *lvl != 0) return false;
    }
    // the non-central return domain adjacent to alpha lies on the negative side
    return v[static_cast<std::size_t>(3 * n)].hi().sign() < 0;
}

ParamOracle feigenbaum_limit(int depth_cap) {
    if (depth_cap < 2) throw std::invalid_argument("feigenbaum depth cap must be at least 2");
    auto state = std::make_shared<FeigenbaumState>(depth_cap);
    return oracle_refiner([state](int bits) { return state->refine(bits); }, {}, "feigenbaum");
}

WindowLocation window_locate(ParamOracle& o, int max_period, const WindowOptions& opts) {
    WindowLocation out;
    if (Dyadic::ratio(-3, 2) < o.enclose(16).lo()) {
        out.note = "c > -3/4";
        return out;
    }
    RenormSearch rs = detect_renormalization(o, max_period);
    if (rs.undecided) {
        out.undecided = true;
        out.note = rs.note;
        return out;
    }
    if (!rs.found) {
        out.note = "not renormalizable with period <= " + std::to_string(max_period);
        return out;
    }
    const Renormalization& r = *rs.found;
    std::string target;
    for (int i = 1; i < r.period; ++i) target += r.cycle[static_cast<std::size_t>(i)].hi().sign() < 0 ? 'L' : 'R';
    target += 'C';
    ParamOracle center = kneading_center(target, DyadicInterval(Dyadic(-2), Dyadic::ratio(1, 2)),
                                         "center:" + std::to_string(r.period));
    RenormWindow w = window_of_center(center, r.period, opts);
    int cap = max_precision_cap();
    for (int m = 16;; m = std::min(cap, 2 * m)) {
        DyadicInterval e = o.enclose(m);
        if (w.left.hi() < e.lo() && e.hi() < w.right.lo()) {
            out.window = std::move(w);
            return out;
        }
        if (m >= cap) break;
    }
    out.undecided = true;
    out.note = "parameter not separated from the window boundary";
    return out;
}

}  // namespace qal
