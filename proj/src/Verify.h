#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "DimacsIO.h"
#include "Instance.h"
#include "Types.h"

namespace cherry {

struct OracleResult {
    Weight weight = 0;
    std::vector<std::pair<int32_t, int32_t>> matching;  // 0-based pairs
};

// exhaustive minimum-weight perfect matching: recursion matching the
// lowest-id unmatched node to each neighbor, memoized on the uncovered-set
// bitmask; intended for n <= 20
std::optional<OracleResult> OracleMwpm(const Instance &inst);

// exhaustive maximum-cardinality matching on the given edge set, n <= 20
int32_t MaxMatchingOracle(int32_t n, const std::vector<std::pair<int32_t, int32_t>> &edges);

struct CertificateReport {
    bool ok = true;
    bool checked_duals = false;
    std::vector<std::string> violations;

    void Fail(const std::string &msg) {
        ok = false;
        violations.push_back(msg);
    }
};

// Checks a solution file against an instance. Matching validity and total
// weight are always checked. When dual lines are present, verifies in the
// declared scale domain:
//   (a) the matching is perfect,
//   (b) every edge slack is nonnegative,
//   (c) matched edges have zero slack,
//   (d) every blossom set with positive dual has exactly one matched
//       boundary edge,
//   (e) primal weight equals the dual objective exactly,
// plus certificate well-formedness (odd sets of size >= 3, laminar family,
// nonnegative blossom duals).
CertificateReport CheckCertificate(const Instance &inst, const SolutionFile &sol);

}  // namespace cherry
