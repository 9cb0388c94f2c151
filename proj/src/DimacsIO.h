#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "Instance.h"
#include "Types.h"

namespace cherry {

// Instance format:
//   c <comment>
//   p edge <n> <m>
//   e <u> <v> <w>        (1-based endpoints, integer weight)
// Self-loops are rejected; parallel edges are kept.
Instance ReadDimacs(std::istream &in);
Instance ReadDimacsFile(const std::string &path);
void WriteDimacs(const Instance &inst, std::ostream &out);
void WriteDimacsFile(const Instance &inst, const std::string &path);

// Solution format:
//   s <total_weight>   |   s INFEASIBLE
//   m <u> <v>                    per matched edge, 1-based
//   scale <k>                    dual value domain, k in {1, 4}, optional
//   y <v> <val>                  node dual, optional
//   Y <k> <v1> ... <vk> <val>    blossom dual over an odd node set, optional
struct SolutionFile {
    bool infeasible = false;
    Weight total_weight = 0;
    std::vector<std::pair<int32_t, int32_t>> matching;  // 0-based
    int32_t dual_scale = 1;
    bool has_duals = false;
    std::vector<Weight> node_duals;                     // size n when has_duals
    struct BlossomDual {
        std::vector<int32_t> members;  // 0-based
        Weight value = 0;
    };
    std::vector<BlossomDual> blossom_duals;
};

SolutionFile ReadSolution(std::istream &in, int32_t n);
SolutionFile ReadSolutionFile(const std::string &path, int32_t n);
void WriteSolution(const SolutionFile &sol, std::ostream &out);
void WriteSolutionFile(const SolutionFile &sol, const std::string &path);

}  // namespace cherry
