#include "doctest.h"
#include "reference.hpp"

#include <qal/profile.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace qal;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run qal_cli(const std::string& args) {
    std::string cmd = std::string(QAL_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("oracle grammar") {
    CHECK(parse_oracle("exact:-7/4").query(8) == Dyadic::ratio(-7, 2));
    CHECK(parse_oracle("exact:-1.75").is_exact());
    bool rounded = false;
    ParamOracle third = parse_oracle("exact:-0.1", &rounded);
    CHECK(rounded);
    CHECK(third.facts().exact->in_D(64));
    CHECK(parse_oracle("superstable:3").facts().superstable_period == 3);
    CHECK(parse_oracle("superstable:4:1").spec() == "superstable:4:1");
    CHECK(parse_oracle("eps-family:2").facts().superstable_period == 8);
    CHECK(parse_oracle("window-right:3").enclose(30).contains(Dyadic::ratio(-7, 2)));
    CHECK(parse_oracle("cusp:10").query(20) == Dyadic::ratio(-7, 2) + dy_pow2(-10));
    CHECK(parse_oracle("feigenbaum").spec() == "feigenbaum");
    for (const char* bad : {"", "exact", "exact:1/3:2", "superstable:0", "superstable:x", "window-left:1", "nope:3",
                            "eps-family:", "feigenbaum:2", "superstable:3:5"})
        CHECK_THROWS_AS(parse_oracle(bad), SpecError);
}

TEST_CASE("families and ranges") {
    CHECK(expand_family("eps-family:1..3") ==
          std::vector<std::string>{"eps-family:1", "eps-family:2", "eps-family:3"});
    CHECK(expand_family("superstable:3") == std::vector<std::string>{"superstable:3"});
    CHECK(expand_family("cusp:6..7,exact:-1") == std::vector<std::string>{"cusp:6", "cusp:7", "exact:-1"});
    CHECK(expand_family("superstable:4:0..1") == std::vector<std::string>{"superstable:4:0", "superstable:4:1"});
    CHECK(parse_range("4..16").hi == 16);
    CHECK(parse_range("7").lo == 7);
    CHECK_THROWS_AS(parse_range("5..4"), SpecError);
    CHECK_THROWS_AS(expand_family("1..3"), SpecError);
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    ProfileRow r;
    r.spec = "exact:-1";
    r.n = 3;
    r.note = "x, y";
    std::vector<std::string> f = fields(to_csv(r));
    CHECK(f.size() == fields(profile_csv_header()).size());
    CHECK(f.back() == "x, y");
}

TEST_CASE("profile rows") {
    ProfileOptions opts;
    opts.pixel_sample = 4;
    ProfileRow a = profile_run("superstable:3", 8, opts);
    ProfileRow b = profile_run("superstable:3", 8, opts);
    CHECK(a.outcome == Outcome::ok);
    CHECK(a.oracle_units > 0);
    CHECK(a.oracle_units == b.oracle_units);
    CHECK(a.max_precision == b.max_precision);
    CHECK(a.pixel_units_max == b.pixel_units_max);
    CHECK(profile_run("nope:1", 4, opts).outcome == Outcome::failed);
    CHECK(profile_run("exact:1", 4, opts).outcome == Outcome::failed);

    opts.pixel_sample = 0;
    opts.repeats = 1;
    std::vector<ProfileRow> rows = profile_sweep({"superstable:3"}, {4, 16}, opts);
    REQUIRE(rows.size() == 13);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].n == rows[i - 1].n + 1);
        CHECK(rows[i].oracle_units >= rows[i - 1].oracle_units);
    }

    opts.jobs = 3;
    std::vector<ProfileRow> par = profile_sweep({"exact:-1", "superstable:3", "exact:-1/2"}, {4, 5}, opts);
    REQUIRE(par.size() == 6);
    CHECK(par[0].spec == "exact:-1");
    CHECK(par[3].spec == "superstable:3");
    CHECK(par[3].oracle_units == profile_run("superstable:3", 5, opts).oracle_units);
    CHECK(par[5].n == 5);
}

TEST_CASE("escape rows") {
    CHECK(escape_row("1").steps == 1);
    EscapeRow e4 = escape_row("1e-4");
    CHECK(e4.scaled >= 2.8);
    CHECK(e4.scaled <= 3.3);
    EscapeRow e4q = escape_row("2.5e-5");
    double ratio = static_cast<double>(e4q.steps) / static_cast<double>(e4.steps);
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
    CHECK_THROWS(escape_row("0"));
    CHECK_THROWS(escape_row("-1"));
}

TEST_CASE("cli examples") {
    Run c = qal_cli("classify --c exact:-1");
    CHECK(c.code == 0);
    CHECK(c.out == "LimitCycle superattracting period=2\n");

    Run w = qal_cli("windows --period 3");
    CHECK(w.code == 0);
    std::vector<std::string> wl = lines(w.out);
    REQUIRE(wl.size() == 2);
    CHECK(wl[0] == "period,l_lo,l_hi,r_lo,r_hi,tau");
    std::vector<std::string> row = fields(wl[1]);
    REQUIRE(row.size() == 6);
    CHECK(row[0] == "3");
    CHECK(Dyadic::parse(row[3]) <= Dyadic::ratio(-7, 2));
    CHECK(Dyadic::ratio(-7, 2) <= Dyadic::parse(row[4]));
    CHECK(row[5] == "(2,3,1)");

    Run a = qal_cli("approx --c exact:-1 --n 10");
    CHECK(a.code == 0);
    CHECK(a.out == "-1\n0\n");

    Run e = qal_cli("escape --eps 1,1e-4");
    CHECK(e.code == 0);
    std::vector<std::string> el = lines(e.out);
    REQUIRE(el.size() == 3);
    CHECK(el[1] == "1,1,1");
}

TEST_CASE("essential period from the cli") {
    Run r = qal_cli("essperiod --c exact:-1");
    CHECK(r.code == 0);
    CHECK(r.out == "p_e=2\n");
}

TEST_CASE("exit codes") {
    // valid and certified
    CHECK(qal_cli("classify --c exact:-1/2").code == 0);
    CHECK(qal_cli("classify --c exact:-1/3").code == 0);
    CHECK(qal_cli("approx --c exact:-2 --n 3 --hint-period 1 --hint-case 2").code == 0);
    // undecided within budget
    CHECK(qal_cli("classify --c exact:-7/4 --max-period 2").code == 2);
    CHECK(qal_cli("approx --c exact:-2 --n 3 --hint-case 2").code == 2);
    CHECK(qal_cli("classify --c feigenbaum --max-depth 2 --max-period 1").code == 2);
    // invalid
    CHECK(qal_cli("classify --c exact:1").code == 1);
    CHECK(qal_cli("classify --c nope:1").code == 1);
    CHECK(qal_cli("classify").code == 1);
    CHECK(qal_cli("approx --c exact:-1").code == 1);
    CHECK(qal_cli("approx --c exact:-1 --n 0").code == 1);
    CHECK(qal_cli("classify --c exact:-1 --hint-case 4").code == 1);
    CHECK(qal_cli("windows --period 1").code == 1);
    CHECK(qal_cli("frobnicate").code == 1);
    CHECK(qal_cli("--help").code == 0);
}

TEST_CASE("render output is a deterministic graymap") {
    std::string path = "qal_cli_render_test.pgm";
    Run r1 = qal_cli("render --c exact:-1 --n 2 --viewport -2,0 --out " + path);
    CHECK(r1.code == 0);
    std::ifstream f(path, std::ios::binary);
    std::string first((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    Run r2 = qal_cli("render --c exact:-1 --n 2 --viewport -2,0");
    CHECK(r2.out == first);
    CHECK(first.rfind("P5\n", 0) == 0);
    CHECK(first.substr(first.size() - 9) == std::string("\xff\xff\xff\0\0\0\xff\0\0", 9));
    std::remove(path.c_str());
}

TEST_CASE("profile from the cli") {
    Run r = qal_cli("profile --c superstable:3 --n-range 4..6 --repeats 1 --pixel-sample 2");
    CHECK(r.code == 0);
    std::vector<std::string> l = lines(r.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == profile_csv_header());
    CHECK(fields(l[1])[0] == "superstable:3");
    CHECK(fields(l[3])[1] == "6");
    CHECK(fields(l[2])[6] == "ok");
}
