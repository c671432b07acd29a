#pragma once

#include "qal/renorm.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qal {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Symbols of x_1, x_2, ... (L, C, R). Returns -1, 0, +1; sequences equal on their common length compare as 0.
// The order is that of the points themselves, so kneading sequences increase with c.
int itinerary_compare(std::string_view a, std::string_view b);

// Itinerary x_1..x_{2n} of the period-doubled centre, from the itinerary x_1..x_n of a centre.
std::string doubled_itinerary(std::string_view k);
std::string doubling_itinerary(int level);  // period 2^level
std::string eps_itinerary(int n);           // LR (LLR)^(n-1) LLC

// Superstable parameter whose critical itinerary x_1..x_N is target (ending in C), found by bisection
// in the kneading order inside bracket.
ParamOracle kneading_center(const std::string& target, const DyadicInterval& bracket, std::string spec);

// The first `count` roots of P^n_c(0) in [-2, 1/4] with minimal period n, in decreasing order of c.
std::vector<DyadicInterval> superstable_centers(int n, int count);
ParamOracle superstable_center(int n, int index = 0);

struct RenormWindow {
    int period = 0;
    DyadicInterval left;    // P^{2n}_l(0) = P^{3n}_l(0)
    DyadicInterval right;   // P^n_r has a fixed point of multiplier 1
    DyadicInterval center;
    CombinatorialType tau;
    bool satellite = false;  // born from a period-n/2 flip
};

struct WindowOptions {
    int target_bits = 40;
    int max_scan_steps = 4096;
};

// Window of period n around a superstable parameter of period n.
RenormWindow window_of_center(ParamOracle& center, int n, const WindowOptions& opts = {});
RenormWindow window_endpoints(int n, int index = 0, const WindowOptions& opts = {});
ParamOracle window_left(int n, int index = 0);
ParamOracle window_right(int n, int index = 0);

ParamOracle epsilon_family(int n);
// P^{3i}(0) in I^1 for i < n, and P^{3n}(0) in the non-central part of I^0 next to alpha.
// Checked on the principal nest of the map itself.
std::optional<bool> eps_constraints_hold(ParamOracle& o, int n);

// Limit of the period-doubling centres. Enclosure [c_{k+1} - d_k, c_{k+1}] with d_k = c_k - c_{k+1}.
ParamOracle feigenbaum_limit(int depth_cap = 22);

struct WindowLocation {
    std::optional<RenormWindow> window;
    bool undecided = false;
    std::string note;
};

WindowLocation window_locate(ParamOracle& o, int max_period, const WindowOptions& opts = {});

}  // namespace qal
