#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cherry {

using Weight = int64_t;

inline constexpr Weight kInfWeight = std::numeric_limits<Weight>::max() / 4;
inline constexpr Weight kMaxInputWeight = Weight(1) << 40;
inline constexpr int32_t kNullIndex = -1;

// strong index wrappers; truthiness means "points at something"
struct NodeId {
    int32_t v = kNullIndex;
    NodeId() = default;
    explicit NodeId(int32_t i) : v(i) {}
    explicit operator bool() const { return v != kNullIndex; }
    bool operator==(const NodeId &o) const { return v == o.v; }
    bool operator!=(const NodeId &o) const { return v != o.v; }
};

struct EdgeId {
    int32_t v = kNullIndex;
    EdgeId() = default;
    explicit EdgeId(int32_t i) : v(i) {}
    explicit operator bool() const { return v != kNullIndex; }
    bool operator==(const EdgeId &o) const { return v == o.v; }
    bool operator!=(const EdgeId &o) const { return v != o.v; }
};

struct TreeId {
    int32_t v = kNullIndex;
    TreeId() = default;
    explicit TreeId(int32_t i) : v(i) {}
    explicit operator bool() const { return v != kNullIndex; }
    bool operator==(const TreeId &o) const { return v == o.v; }
    bool operator!=(const TreeId &o) const { return v != o.v; }
};

struct HeapId {
    int32_t v = kNullIndex;
    HeapId() = default;
    explicit HeapId(int32_t i) : v(i) {}
    explicit operator bool() const { return v != kNullIndex; }
    bool operator==(const HeapId &o) const { return v == o.v; }
    bool operator!=(const HeapId &o) const { return v != o.v; }
};

enum class Label : uint8_t {
    kFree = 0,
    kPlus = 1,
    kMinus = 2,
    kPlusMinus = 3,
};

inline bool IsPlusish(Label l) { return l == Label::kPlus || l == Label::kPlusMinus; }

// malformed input (parse errors, out-of-range endpoints, oversized weights)
class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string &what) : std::runtime_error(what) {}
};

// internal invariant violation; any throw of this is a bug
class SolverError : public std::logic_error {
  public:
    explicit SolverError(const std::string &what) : std::logic_error(what) {}
};

class TimeoutError : public std::runtime_error {
  public:
    explicit TimeoutError(const std::string &what) : std::runtime_error(what) {}
};

inline void Require(bool cond, const char *what) {
    if (!cond) {
        throw SolverError(what);
    }
}

}  // namespace cherry
