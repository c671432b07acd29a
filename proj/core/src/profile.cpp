#include "qal/profile.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

namespace qal {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(std::string_view s, std::string_view what) {
    if (s.empty()) throw SpecError("missing " + std::string(what));
    int v = 0;
    std::size_t i = 0;
    bool neg = s[0] == '-';
    if (neg) ++i;
    if (i == s.size()) throw SpecError("bad " + std::string(what) + ": " + std::string(s));
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw SpecError("bad " + std::string(what) + ": " + std::string(s));
        v = v * 10 + (s[i] - '0');
        if (v > 1'000'000) throw SpecError(std::string(what) + " too large: " + std::string(s));
    }
    return neg ? -v : v;
}

int positive(std::string_view s, std::string_view what) {
    int v = parse_int(s, what);
    if (v < 1) throw SpecError(std::string(what) + " must be positive");
    return v;
}

ParamOracle named(ParamOracle o, std::string spec) { return ParamOracle(o.source(), std::move(spec)); }

std::string fmt_double(double v, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

ParamOracle parse_oracle(std::string_view spec, bool* rounded) {
    if (rounded) *rounded = false;
    std::vector<std::string_view> f = split(spec, ':');
    std::string_view kind = f[0];
    std::string s(spec);
    auto want = [&](std::size_t lo, std::size_t hi) {
        if (f.size() < lo || f.size() > hi) throw SpecError("malformed oracle spec: " + s);
    };
    try {
        if (kind == "exact") {
            want(2, 2);
            bool exact = true;
            Dyadic d = Dyadic::parse_rounded(f[1], 64, &exact);
            if (rounded) *rounded = !exact;
            return named(oracle_exact(d), "exact:" + d.str());
        }
        if (kind == "superstable" || kind == "window-left" || kind == "window-right") {
            want(2, 3);
            int n = positive(f[1], "period");
            int i = f.size() == 3 ? parse_int(f[2], "index") : 0;
            if (i < 0) throw SpecError("index must be non-negative");
            if (kind == "superstable") return named(superstable_center(n, i), s);
            if (n < 2) throw SpecError("windows need period at least 2");
            return named(kind == "window-left" ? window_left(n, i) : window_right(n, i), s);
        }
        if (kind == "eps-family") {
            want(2, 2);
            return named(epsilon_family(positive(f[1], "family index")), s);
        }
        if (kind == "feigenbaum") {
            want(1, 1);
            return feigenbaum_limit();
        }
        if (kind == "cusp") {
            want(2, 2);
            int k = positive(f[1], "cusp offset exponent");
            return named(oracle_exact(Dyadic::ratio(-7, 2) + dy_pow2(-k)), s);
        }
    } catch (const SolverError& e) {
        throw SpecError(std::string("cannot build oracle ") + s + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        if (dynamic_cast<const SpecError*>(&e)) throw;
        throw SpecError(std::string("malformed oracle spec ") + s + ": " + e.what());
    }
    throw SpecError("unknown oracle kind: " + std::string(kind));
}

IntRange parse_range(std::string_view text) {
    std::size_t pos = text.find("..");
    IntRange r;
    if (pos == std::string_view::npos) {
        r.lo = r.hi = parse_int(text, "range");
    } else {
        r.lo = parse_int(text.substr(0, pos), "range start");
        r.hi = parse_int(text.substr(pos + 2), "range end");
    }
    if (r.hi < r.lo) throw SpecError("empty range: " + std::string(text));
    return r;
}

std::vector<std::string> expand_family(std::string_view family) {
    std::vector<std::string> out;
    for (std::string_view item : split(family, ',')) {
        if (item.empty()) throw SpecError("empty family member");
        std::size_t pos = item.find("..");
        if (pos == std::string_view::npos) {
            out.emplace_back(item);
            continue;
        }
        std::size_t colon = item.rfind(':', pos);
        if (colon == std::string_view::npos) throw SpecError("range without a field: " + std::string(item));
        std::string prefix(item.substr(0, colon + 1));
        IntRange r = parse_range(item.substr(colon + 1));
        for (int k = r.lo; k <= r.hi; ++k) out.push_back(prefix + std::to_string(k));
    }
    return out;
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::undecided: return "undecided";
    case Outcome::failed: return "failed";
    }
    return "failed";
}

ProfileRow profile_run(const std::string& spec, int n, const ProfileOptions& opts) {
    ProfileRow row;
    row.spec = spec;
    row.n = n;
    std::vector<std::int64_t> walls;
    try {
        for (int rep = 0; rep < std::max(1, opts.repeats); ++rep) {
            ParamOracle o = parse_oracle(spec);
            auto t0 = std::chrono::steady_clock::now();
            Outcome out = Outcome::ok;
            std::string note;
            try {
                approximate(o, n, opts.hints, opts.budget);
            } catch (const AttractorUndecided& e) {
                out = Outcome::undecided;
                note = e.what();
            }
            auto t1 = std::chrono::steady_clock::now();
            walls.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
            if (rep == 0) {
                row.oracle_units = o.ledger().total_units();
                row.max_precision = o.ledger().max_precision();
                row.outcome = out;
                row.note = note;
            }
        }
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<long> pick(-(2L << std::min(n, 20)), 2L << std::min(n, 20));
        for (int i = 0; i < opts.pixel_sample; ++i) {
            Dyadic x = Dyadic::ratio(pick(rng), std::min(n, 20));
            ParamOracle o = parse_oracle(spec);
            try {
                pixel_query(o, n, x, opts.hints, opts.budget);
            } catch (const AttractorUndecided&) {
            }
            row.pixel_units_max = std::max(row.pixel_units_max, o.ledger().total_units());
        }
    } catch (const std::exception& e) {
        row.outcome = Outcome::failed;
        row.note = e.what();
    }
    if (!walls.empty()) {
        std::sort(walls.begin(), walls.end());
        row.wall_nanos = walls[walls.size() / 2];
    }
    return row;
}

std::vector<ProfileRow> profile_sweep(const std::vector<std::string>& specs, IntRange n, const ProfileOptions& opts) {
    std::vector<std::pair<std::string, int>> jobs;
    for (const auto& s : specs)
        for (int k = n.lo; k <= n.hi; ++k) jobs.emplace_back(s, k);
    std::vector<ProfileRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) rows[i] = profile_run(jobs[i].first, jobs[i].second, opts);
    };
    int threads = std::clamp(opts.jobs, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string profile_csv_header() {
    return "spec,n,wall_nanos,oracle_units,max_precision,pixel_units_max,outcome,note";
}

std::string to_csv(const ProfileRow& r) {
    std::ostringstream os;
    os << csv_field(r.spec) << ',' << r.n << ',' << r.wall_nanos << ',' << r.oracle_units << ',' << r.max_precision
       << ',' << r.pixel_units_max << ',' << to_string(r.outcome) << ',' << csv_field(r.note);
    return os.str();
}

EscapeRow escape_row(std::string_view eps_text) {
    EscapeRow r;
    r.label = std::string(eps_text);
    bool exact = true;
    r.eps = Dyadic::parse_rounded(eps_text, 96, &exact);
    if (r.eps.sign() <= 0) throw SpecError("epsilon must be positive: " + r.label);
    r.steps = escape_time(r.eps, DyadicInterval(Dyadic::ratio(-1, 1), Dyadic::ratio(1, 1)));
    r.scaled = static_cast<double>(r.steps) * std::sqrt(r.eps.to_double());
    return r;
}

std::string escape_csv_header() { return "eps,N,N_sqrt_eps"; }

std::string to_csv(const EscapeRow& r) {
    return csv_field(r.label) + "," + std::to_string(r.steps) + "," + fmt_double(r.scaled, 6);
}

std::string windows_csv_header() { return "period,l_lo,l_hi,r_lo,r_hi,tau"; }

std::string to_csv(const RenormWindow& w) {
    auto num = [](const Dyadic& d) { return d.decimal(-1); };
    return std::to_string(w.period) + "," + num(w.left.lo()) + "," + num(w.left.hi()) + "," + num(w.right.lo()) + "," +
           num(w.right.hi()) + "," + csv_field(w.tau.str());
}

}  // namespace qal
