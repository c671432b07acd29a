#pragma once

#include "qal/oracle.hpp"
#include "qal/roots.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qal {

// Working precision used alongside an oracle read at m bits.
int working_precision(int m);

struct OrbitEnclosure {
    std::vector<DyadicInterval> steps;  // steps[0] = [0,0]
    Precision precision_used{64};
    bool blown_up = false;
    DyadicInterval param;
};

OrbitEnclosure critical_orbit(const DyadicInterval& C, int N, const Precision& p);
OrbitEnclosure critical_orbit(ParamOracle& o, int N, const Precision& p);

// Enclosures of x^2 + c iterated from an arbitrary interval.
std::vector<DyadicInterval> forward_orbit(const DyadicInterval& x0, const DyadicInterval& C, int N, const Precision& p);

struct DynamicalInterval {
    DyadicInterval left;   // encloses c
    DyadicInterval right;  // encloses c^2 + c
    DyadicInterval hull() const { return qal::hull(left, right); }
};

DynamicalInterval dynamical_interval(const DyadicInterval& C, const Precision& p);

enum class CycleKind { attracting, superattracting, parabolic, repelling, undecided };
std::string to_string(CycleKind k);

struct CertifiedCycle {
    int period = 0;
    std::vector<DyadicInterval> points;  // points[i+1] contains P(points[i])
    DyadicInterval multiplier;
    CycleKind kind = CycleKind::undecided;
    DyadicInterval trap;  // J with P^n(J) inside J
    DyadicInterval param;
    Precision precision{64};
};

struct CycleSearchOptions {
    int max_period = 16;
    long step_budget = 200'000;
    // Stop shrinking cycle enclosures once every width is at most 2^-target_bits (0: as far as it goes).
    int target_bits = 0;
    int start_bits = 24;
    int max_precision = 0;  // 0: environment cap
};

std::optional<CertifiedCycle> certify_attracting_cycle(ParamOracle& o, int max_period, long budget);
std::optional<CertifiedCycle> certify_attracting_cycle(ParamOracle& o, const CycleSearchOptions& opts);

// Exact check: does the orbit map into the next enclosure cyclically, with disjoint enclosures,
// Pⁿ(trap) inside the interior of trap and a contracting derivative product.
bool verify_cycle_certificate(const CertifiedCycle& cyc, const Precision& p);

DyadicInterval cycle_multiplier(const std::vector<DyadicInterval>& points, const Precision& p);
CycleKind classify_cycle(const std::vector<DyadicInterval>& points, const ParamOracle& o);
CycleKind classify_cycle(const std::vector<DyadicInterval>& points, const ParamFacts& facts, const Precision& p);

struct PeriodicPoint {
    DyadicInterval enclosure;
    bool unique = false;
    DyadicInterval multiplier;  // encloses (Pⁿ)'(w) over the enclosure
};

struct PeriodicPoints {
    std::vector<PeriodicPoint> points;
    bool complete = true;       // every root of Pⁿ(w) = w in the domain is inside some enclosure
    bool needs_precision = false;  // some enclosure is a cluster
    std::vector<DyadicInterval> enclosures() const;
};

// F(w) = P^n_C(w) - w and its w-derivative.
IntervalFunction periodic_equation(const DyadicInterval& C, int n);

PeriodicPoints isolate_periodic_points(const DyadicInterval& C, int n, const Precision& p,
                                       const DyadicInterval& domain, const RootOptions& ro = {});
PeriodicPoints isolate_periodic_points(ParamOracle& o, int n, const Precision& p);

// f_eps(w) = w + w^2 + eps iterated from -a until it passes +a.
struct EscapeResult {
    long steps = 0;
    int precision = 0;
};
EscapeResult escape_time_detail(const Dyadic& eps, const DyadicInterval& gate, long max_steps = 100'000'000);
long escape_time(const Dyadic& eps, const DyadicInterval& gate);

}  // namespace qal
