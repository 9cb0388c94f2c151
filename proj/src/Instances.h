#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "Instance.h"

namespace cherry {

enum class Family {
    kRandomDense,
    kRandomSparse,
    kDelaunayBw,
    kDelaunaySw,
    kGeometricBw,
    kGeometricSw,
    kMaxcutBw,
    kMaxcutSw,
    kPointsFile,
};

// canonical hyphenated names, e.g. "random-sparse", "delaunay-bw"
std::string_view FamilyName(Family f);
std::optional<Family> ParseFamily(std::string_view name);

struct GenSpec {
    Family family = Family::kRandomSparse;
    int32_t n = 0;  // requested node count, even; the maxcut gadget rounds
                    // to the nearest legal size 6s - 12
    uint64_t seed = 0;
};

// Identical (family, n, seed) always produces the identical instance; all
// randomness comes from the splitmix stream of the seed. Throws InputError
// for invalid sizes. The points-file family is not generated here; it is
// built from a file of coordinates instead.
Instance Generate(const GenSpec &spec);

// Union of a random perfect matching and uniform random extra edges until
// the average degree target is met; weights uniform in [lo, hi].
Instance GenRandom(int32_t n, double avg_degree, Weight lo, Weight hi, uint64_t seed);

// Whitespace-separated x y pairs; an odd trailing point is dropped. Edge
// weights are rounded distances between the original coordinates; the
// triangulation itself runs on seed-perturbed lattice copies.
Instance PointsFileInstance(const std::string &path, uint64_t seed);

}  // namespace cherry
