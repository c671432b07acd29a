#pragma once

#include "qal/dynamics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qal {

// Itinerary of the critical orbit: L (< 0), R (> 0), C (= 0), ? (undecided).
struct KneadingSequence {
    std::string symbols;
    int certified_length = 0;
};

KneadingSequence kneading(ParamOracle& o, int length);

// perm[i-1] = tau(i); intervals are labelled in decreasing real order (rightmost is 1)
// and interval i maps into interval tau(i).
struct CombinatorialType {
    int period = 0;
    std::vector<int> perm;

    bool is_cycle() const;
    std::string str() const;  // "(2,3,1)"
    friend bool operator==(const CombinatorialType&, const CombinatorialType&) = default;
};

struct Renormalization {
    int period = 0;
    DyadicInterval boundary;           // periodic point p with J = [-|p|, |p|]
    DyadicInterval J;                  // outer enclosure of J
    std::vector<DyadicInterval> cycle; // outer enclosures of f^i(J), i < period
    CombinatorialType tau;
    DyadicInterval param;
    Precision precision{64};
};

struct RenormSearch {
    std::optional<Renormalization> found;
    bool undecided = false;  // some smaller period could not be excluded at the precision cap
    std::string note;
};

struct RenormOptions {
    int start_bits = 32;
    int max_precision = 0;  // 0: environment cap
};

RenormSearch detect_renormalization(ParamOracle& o, int max_period, const RenormOptions& opts = {});

// Only period n is tested.
RenormSearch detect_renormalization_of_period(ParamOracle& o, int n, const RenormOptions& opts = {});

// Renormalization of f^q on an already certified period-q cycle: periods k*q with 2 <= k <= max_factor,
// with J inside outer.J.
RenormSearch detect_renormalization_within(ParamOracle& o, const Renormalization& outer, int max_factor,
                                           const RenormOptions& opts = {});

// Re-checks the cycle conditions from the stored boundary and parameter at precision p.
bool verify_renormalization(const Renormalization& r, const Precision& p);

// How f^{outer.period} permutes the inner cycle's intervals that lie in outer.J.
CombinatorialType relative_type(const Renormalization& inner, const Renormalization& outer);

struct NestRecord {
    std::vector<DyadicInterval> radius;  // t_m with I^m = [-t_m, t_m]
    std::vector<int> return_times;       // r_m for level m >= 1, 0 at index 0
    std::vector<int> endpoint_sign;      // sign of f^{r_m}(t_m) (+1 / -1), 0 at index 0
    std::vector<bool> central;           // level m >= 1: f^{r_m}(0) in I^m
    std::vector<int> noncentral_levels;  // m(0) = 0 < m(1) < ...
    int closure_level = -1;              // first level with r_m equal to renorm_period
    int renorm_period = 0;
    bool strict = true;      // I^{m+1} strictly inside I^m for every recorded level
    bool truncated = false;  // stopped on an undecided test
    DyadicInterval param;
    Precision precision{64};

    int depth() const { return static_cast<int>(radius.size()) - 1; }
    DyadicInterval level(int m) const;
    // Deepest recorded level containing x, -1 when x is outside I^0, nullopt when undecided.
    std::optional<int> level_of(const DyadicInterval& x) const;
};

struct NestOptions {
    int renorm_period = 0;  // 0: no closure test, stop at max_depth
    int max_return = 4096;
    RenormOptions precision;
};

NestRecord principal_nest(ParamOracle& o, int max_depth, const NestOptions& opts = {});

struct CascadeInfo {
    int start_level = 0;  // m(k)
    int end_level = 0;    // m(k+1)
    std::optional<bool> saddle_node;
    int depth_bound = 0;  // d_k
    int neglect_lo = 0;   // neglectable levels l with neglect_lo <= l <= neglect_hi
    int neglect_hi = -1;

    int length() const { return end_level - start_level; }
    bool neglectable(int l) const { return saddle_node.value_or(false) && neglect_lo <= l && l <= neglect_hi; }
};

// Postcritical points are the critical orbit enclosures v_0, ..., v_{N-1}.
std::vector<CascadeInfo> cascades(const NestRecord& nest, const std::vector<DyadicInterval>& postcritical);

struct EssentialType {
    int period = 0;
    std::vector<int> levels;   // level assigned to J_i
    std::vector<bool> kept;    // J_i is not neglectable
    std::vector<int> reduced;  // permutation induced on the kept intervals, same labelling as tau
    bool complete = false;
};

struct EssentialPeriod {
    std::optional<int> value;
    CombinatorialType tau;
    EssentialType type;
    NestRecord nest;
    std::vector<CascadeInfo> cascade_list;
    std::string note;
};

EssentialPeriod essential_period(ParamOracle& o, int max_period = 32);

// nullopt when either side is incomplete.
std::optional<bool> essentially_equivalent(const EssentialType& a, const EssentialType& b);

}  // namespace qal
