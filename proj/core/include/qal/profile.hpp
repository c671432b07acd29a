#pragma once

#include "qal/attractor.hpp"
#include "qal/param_space.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qal {

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// exact:<dyadic or decimal>, superstable:<n>[:<i>], window-left:<n>[:<i>], window-right:<n>[:<i>],
// eps-family:<n>, feigenbaum, cusp:<k> (exact -7/4 + 2^-k).
// Decimals that are not dyadic are rounded to 64 fractional bits; `rounded` is then set.
ParamOracle parse_oracle(std::string_view spec, bool* rounded = nullptr);

// A family is a spec whose last integer field may be a range a..b, or a comma-separated list of those.
std::vector<std::string> expand_family(std::string_view family);

struct IntRange {
    int lo = 0;
    int hi = 0;
};
IntRange parse_range(std::string_view text);  // "a..b" or "a"

enum class Outcome { ok, undecided, failed };
std::string to_string(Outcome o);

struct ProfileRow {
    std::string spec;
    int n = 0;
    std::int64_t wall_nanos = 0;       // median of the repeats
    std::uint64_t oracle_units = 0;
    int max_precision = 0;
    std::uint64_t pixel_units_max = 0;  // largest single-pixel cost in the sample
    Outcome outcome = Outcome::failed;
    std::string note;
};

struct ProfileOptions {
    Hints hints;
    Budget budget;
    int repeats = 3;
    int pixel_sample = 64;
    std::uint64_t seed = 1;
    int jobs = 1;
};

ProfileRow profile_run(const std::string& spec, int n, const ProfileOptions& opts = {});
// Rows in (spec, n) order whatever the completion order.
std::vector<ProfileRow> profile_sweep(const std::vector<std::string>& specs, IntRange n, const ProfileOptions& opts = {});

std::string csv_field(std::string_view s);
std::string profile_csv_header();
std::string to_csv(const ProfileRow& r);

struct EscapeRow {
    Dyadic eps;
    std::string label;
    long steps = 0;
    double scaled = 0;  // steps * sqrt(eps)
};

// Gate [-1/2, 1/2].
EscapeRow escape_row(std::string_view eps_text);
std::string escape_csv_header();
std::string to_csv(const EscapeRow& r);

std::string windows_csv_header();
std::string to_csv(const RenormWindow& w);

}  // namespace qal
