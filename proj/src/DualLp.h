#pragma once

#include <vector>

#include "Types.h"

namespace cherry {

// Per-round dual increment problem over the live trees, index-compressed.
// Feasible region: 0 <= delta_i <= a[i], delta_i + delta_j <= cap for every
// b entry, delta_i - delta_j <= cap for every c entry. Objective: maximize
// the sum of deltas. All caps are nonnegative.
struct DeltaProblem {
    struct PairCap {
        int32_t i = 0;
        int32_t j = 0;
        Weight cap = 0;
    };
    int32_t k = 0;
    std::vector<Weight> a;  // kInfWeight marks an uncapped tree
    std::vector<PairCap> b;
    std::vector<PairCap> c;
};

struct DeltaResult {
    // false: some delta can grow without limit, i.e. the dual is unbounded
    bool bounded = true;
    std::vector<Weight> delta;
    // twice the optimum of the fractional relaxation; flow solver only
    Weight fractional_total_x2 = 0;
};

// Merges trees joined by a zero-cap c entry into components (they must move
// together), then raises each component greedily in discovery order. Within-
// component b caps are halved; their evenness is an invariant of the
// quadrupled weight domain and is asserted.
DeltaResult SolveDeltasComponents(const DeltaProblem &p);

// Substitutes delta_i = (x_i_plus - x_i_minus) / 2, which turns every cap
// into a difference constraint on the x variables, and solves the resulting
// dual min-cost flow by successive shortest paths. The optimum is
// half-integral; each delta is rounded down, which keeps the caps satisfied.
DeltaResult SolveDeltasFlow(const DeltaProblem &p);

bool DeltasFeasible(const DeltaProblem &p, const std::vector<Weight> &delta);

}  // namespace cherry
