#pragma once

#include "qal/interval.hpp"

#include <functional>
#include <vector>

namespace qal {

struct FunctionEnclosure {
    DyadicInterval value;
    DyadicInterval deriv;
};

// Interval extension of a C^1 function and its derivative.
using IntervalFunction = std::function<FunctionEnclosure(const DyadicInterval& x, const Precision& p)>;

struct RootEnclosure {
    DyadicInterval enclosure;
    // true: exactly one root inside. false: a cluster that may hold several roots (or none).
    bool unique = false;
};

struct RootSearch {
    std::vector<RootEnclosure> roots;  // sorted, pairwise disjoint
    // false when the box budget ran out; the listed enclosures may then miss roots.
    bool complete = true;
    bool all_unique() const;
};

struct RootOptions {
    int min_width_bits = 0;   // 0: derived from the working precision
    long max_boxes = 2'000'000;
    int newton_steps = 60;
};

// Every root of f in domain lies in one of the returned enclosures (when complete).
RootSearch isolate_roots(const IntervalFunction& f, const DyadicInterval& domain, const Precision& p,
                         const RootOptions& opts = {});

// One interval Newton step N(X) = m - f(m)/f'(X), intersected with X; nullopt when empty.
std::optional<DyadicInterval> newton_step(const IntervalFunction& f, const DyadicInterval& x, const Precision& p);

}  // namespace qal
