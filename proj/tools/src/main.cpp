#include <qal/profile.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUndecided = 2;

struct Args {
    std::string c;
    std::optional<int> n;
    std::string n_range;
    std::optional<int> hint_period;
    std::string hint_case;
    std::optional<int> max_period;
    std::optional<int> max_precision;
    std::optional<int> max_depth;
    std::string out;
    std::uint64_t seed = 1;
    std::string viewport = "-2,2";
    int period = 0;
    int index = 0;
    int repeats = 3;
    int pixel_sample = 64;
    int jobs = 1;
    std::vector<std::string> eps;
};

qal::Hints hints_of(const Args& a) {
    qal::Hints h;
    if (a.hint_period) {
        if (*a.hint_period < 1) throw qal::SpecError("--hint-period must be at least 1");
        h.period = a.hint_period;
    }
    if (!a.hint_case.empty()) {
        h.case_tag = qal::parse_case_tag(a.hint_case);
        if (!h.case_tag) throw qal::SpecError("unknown case tag: " + a.hint_case);
    }
    return h;
}

qal::Budget budget_of(const Args& a) {
    qal::Budget b;
    if (a.max_period) {
        if (*a.max_period < 1) throw qal::SpecError("--max-period must be positive");
        b.max_period = *a.max_period;
    }
    if (a.max_precision) {
        if (*a.max_precision < 8) throw qal::SpecError("--max-precision must be at least 8");
        b.max_precision = *a.max_precision;
    }
    if (a.max_depth) {
        if (*a.max_depth < 1) throw qal::SpecError("--max-depth must be positive");
        b.max_depth = *a.max_depth;
    }
    return b;
}

qal::ParamOracle oracle_of(const Args& a) {
    if (a.c.empty()) throw qal::SpecError("--c is required");
    bool rounded = false;
    qal::ParamOracle o = qal::parse_oracle(a.c, &rounded);
    if (rounded) std::cerr << "note: " << a.c << " is not dyadic; using " << o.spec() << "\n";
    return o;
}

int resolution(const Args& a) {
    if (!a.n) throw qal::SpecError("--n is required");
    if (*a.n < 1) throw qal::SpecError("--n must be at least 1");
    return *a.n;
}

void emit(const Args& a, const std::string& text) {
    if (a.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << text;
}

int cmd_classify(const Args& a) {
    qal::ParamOracle o = oracle_of(a);
    qal::Classification c = qal::classify(o, hints_of(a), budget_of(a));
    if (!c.certificate) {
        emit(a, "undecided: " + c.note + "\n");
        return kUndecided;
    }
    emit(a, c.certificate->cls.str() + "\n");
    return kOk;
}

int cmd_approx(const Args& a) {
    qal::ParamOracle o = oracle_of(a);
    qal::ApproxSet s = qal::approximate(o, resolution(a), hints_of(a), budget_of(a));
    emit(a, qal::format_points(s));
    return kOk;
}

int cmd_render(const Args& a) {
    qal::ParamOracle o = oracle_of(a);
    auto comma = a.viewport.find(',');
    if (comma == std::string::npos) throw qal::SpecError("--viewport expects LO,HI");
    qal::Dyadic lo = qal::Dyadic::parse(a.viewport.substr(0, comma));
    qal::Dyadic hi = qal::Dyadic::parse(a.viewport.substr(comma + 1));
    if (hi < lo) throw qal::SpecError("empty viewport");
    std::vector<int> row = qal::render(o, resolution(a), qal::DyadicInterval(lo, hi), hints_of(a), budget_of(a));
    emit(a, qal::to_pgm(row));
    return kOk;
}

int cmd_windows(const Args& a) {
    if (a.period < 2) throw qal::SpecError("--period must be at least 2");
    qal::RenormWindow w = qal::window_endpoints(a.period, a.index);
    emit(a, qal::windows_csv_header() + "\n" + qal::to_csv(w) + "\n");
    return kOk;
}

int cmd_essperiod(const Args& a) {
    qal::ParamOracle o = oracle_of(a);
    qal::EssentialPeriod e = qal::essential_period(o, a.max_period.value_or(32));
    if (!e.value) {
        emit(a, "p_e=undecided" + (e.note.empty() ? "" : " (" + e.note + ")") + "\n");
        return kUndecided;
    }
    emit(a, "p_e=" + std::to_string(*e.value) + "\n");
    return kOk;
}

int cmd_profile(const Args& a) {
    if (a.c.empty()) throw qal::SpecError("--c is required");
    std::vector<std::string> specs = qal::expand_family(a.c);
    qal::IntRange n;
    if (!a.n_range.empty()) {
        n = qal::parse_range(a.n_range);
    } else {
        n.lo = n.hi = resolution(a);
    }
    if (n.lo < 1) throw qal::SpecError("resolutions must be at least 1");
    qal::ProfileOptions opts;
    opts.hints = hints_of(a);
    opts.budget = budget_of(a);
    opts.repeats = a.repeats;
    opts.pixel_sample = a.pixel_sample;
    opts.seed = a.seed;
    opts.jobs = a.jobs;
    std::ostringstream os;
    os << qal::profile_csv_header() << "\n";
    for (const auto& r : qal::profile_sweep(specs, n, opts)) os << qal::to_csv(r) << "\n";
    emit(a, os.str());
    return kOk;
}

int cmd_escape(const Args& a) {
    if (a.eps.empty()) throw qal::SpecError("--eps is required");
    std::ostringstream os;
    os << qal::escape_csv_header() << "\n";
    for (const auto& e : a.eps) os << qal::to_csv(qal::escape_row(e)) << "\n";
    emit(a, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified attractors of real quadratic maps"};
    app.require_subcommand(1);
    Args a;

    auto common = [&a](CLI::App* s) {
        s->add_option("--c", a.c, "parameter oracle spec");
        s->add_option("--out", a.out, "output file (default stdout)");
        s->add_option("--max-precision", a.max_precision, "oracle precision budget in bits");
        s->add_option("--max-period", a.max_period, "largest period searched");
        s->add_option("--seed", a.seed, "seed for sampled pixels");
    };
    auto attractor_opts = [&a](CLI::App* s) {
        s->add_option("--n", a.n, "resolution");
        s->add_option("--hint-period", a.hint_period, "period hint for cases 1b, 1c, 2");
        s->add_option("--hint-case", a.hint_case, "case hint: 1a|1b|1c|2|3")->check(CLI::IsMember({"1a", "1b", "1c", "2", "3"}));
        s->add_option("--max-depth", a.max_depth, "tower levels reported by classify");
    };

    std::map<std::string, std::function<int(const Args&)>> handlers{
        {"classify", cmd_classify}, {"approx", cmd_approx},   {"render", cmd_render}, {"windows", cmd_windows},
        {"essperiod", cmd_essperiod}, {"profile", cmd_profile}, {"escape", cmd_escape}};

    CLI::App* classify = app.add_subcommand("classify", "classify the attractor");
    common(classify);
    attractor_opts(classify);
    CLI::App* approx = app.add_subcommand("approx", "certified 2^-n approximation, one dyadic per line");
    common(approx);
    attractor_opts(approx);
    CLI::App* render = app.add_subcommand("render", "one-row PGM of the pixels near the attractor");
    common(render);
    attractor_opts(render);
    render->add_option("--viewport", a.viewport, "LO,HI within [-2,2]");
    CLI::App* windows = app.add_subcommand("windows", "renormalization window endpoints as CSV");
    common(windows);
    windows->add_option("--period", a.period, "window period")->required();
    windows->add_option("--index", a.index, "centre index in decreasing c");
    CLI::App* essperiod = app.add_subcommand("essperiod", "essential period");
    common(essperiod);
    CLI::App* profile = app.add_subcommand("profile", "cost sweep as CSV");
    common(profile);
    attractor_opts(profile);
    profile->add_option("--n-range", a.n_range, "resolutions A..B");
    profile->add_option("--repeats", a.repeats, "timed repeats per row")->check(CLI::PositiveNumber);
    profile->add_option("--pixel-sample", a.pixel_sample, "pixels sampled for the single-pixel cost")
        ->check(CLI::NonNegativeNumber);
    profile->add_option("--jobs", a.jobs, "rows computed in parallel")->check(CLI::PositiveNumber);
    CLI::App* escape = app.add_subcommand("escape", "parabolic escape times as CSV");
    common(escape);
    escape->add_option("--eps", a.eps, "epsilon values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }

    try {
        return handlers.at(app.get_subcommands().front()->get_name())(a);
    } catch (const qal::AttractorUndecided& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kUndecided;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}
