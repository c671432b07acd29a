#pragma once

#include "qal/renorm.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qal {

enum class CaseTag { c1a, c1b, c1c, c2, c3 };

std::string to_string(CaseTag t);                        // "1a", ...
std::optional<CaseTag> parse_case_tag(std::string_view s);

struct Hints {
    std::optional<int> period;
    std::optional<CaseTag> case_tag;
};

struct Budget {
    int max_period = 16;
    long step_budget = 2'000'000;
    int max_depth = 5;      // tower levels reported by classify
    int max_levels = 14;    // tower levels approximate may descend
    int max_precision = 0;  // oracle bits, 0: environment cap
    int start_bits = 8;     // first oracle precision of the cycle and tower searches
};

struct AttractorClass {
    enum class Kind { limit_cycle, interval_cycle, feigenbaum_like };
    Kind kind = Kind::limit_cycle;
    CycleKind cycle_kind = CycleKind::undecided;
    int period = 0;
    std::vector<CombinatorialType> prefix;  // feigenbaum_like: first type absolute, the rest relative
    bool complete = false;                  // feigenbaum_like: infinite renormalizability proved

    std::string str() const;
};

// The attractor lies in the union of the pieces, and every point of a piece is within delta of it.
struct AttractorCertificate {
    CaseTag case_tag = CaseTag::c1a;
    AttractorClass cls;
    std::vector<DyadicInterval> pieces;
    Dyadic delta;
    int levels = 0;  // tower levels used
};

struct Classification {
    std::optional<AttractorCertificate> certificate;  // nullopt: undecided within budget
    std::string note;
};

class AttractorUndecided : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Classification classify(ParamOracle& o, const Hints& hints = {}, const Budget& budget = {});

// Certificate with delta <= 2^-(n+2).
Classification certify_attractor(ParamOracle& o, int n, const Hints& hints = {}, const Budget& budget = {});

struct ApproxSet {
    int resolution = 0;
    std::vector<Dyadic> points;  // sorted, distinct, in D_{n+2}
    AttractorCertificate certificate;
};

ApproxSet approximate_from(const AttractorCertificate& cert, int n);
// Throws AttractorUndecided when no certificate is found within the budget.
ApproxSet approximate(ParamOracle& o, int n, const Hints& hints = {}, const Budget& budget = {});

// 1 when dist(x, A) <= 2^-n, 0 when dist(x, A) >= 2 * 2^-n, 1 in between.
int pixel_query(const AttractorCertificate& cert, int n, const Dyadic& x);
int pixel_query(ParamOracle& o, int n, const Dyadic& x, const Hints& hints = {}, const Budget& budget = {});

// One bit per element of D_n in the viewport, left to right.
std::vector<int> render_row(const AttractorCertificate& cert, int n, const DyadicInterval& viewport);
std::vector<int> render(ParamOracle& o, int n, const DyadicInterval& viewport, const Hints& hints = {},
                        const Budget& budget = {});

// Binary graymap, one row; pixels with bit 1 are black (0).
std::string to_pgm(const std::vector<int>& row);
std::string format_points(const ApproxSet& s);

}  // namespace qal
