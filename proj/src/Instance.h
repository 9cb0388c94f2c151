#pragma once

#include <cstdint>
#include <vector>

#include "Types.h"

namespace cherry {

struct InstanceEdge {
    int32_t u = 0;  // 0-based
    int32_t v = 0;
    Weight w = 0;
};

// parsed problem in the original weight domain; endpoints 0-based
struct Instance {
    int32_t n = 0;
    std::vector<InstanceEdge> edges;
};

}  // namespace cherry
