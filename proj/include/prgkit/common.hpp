#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prgkit {

// Error raised for bad arguments (wrong seed length, index out of range, ...).
class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// Error raised when an exact computation would exceed an enumeration cap.
// The message names the cap so callers know which knob to turn (or that
// they should switch to the Monte-Carlo path).
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw argument_error(what);
}

// Smallest p with 2^p >= x (x >= 1).
inline int ceil_log2(std::uint64_t x) {
    int p = 0;
    while ((std::uint64_t{1} << p) < x) ++p;
    return p;
}

inline bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline std::uint64_t next_pow2(std::uint64_t x) {
    return std::uint64_t{1} << ceil_log2(x ? x : 1);
}

// Default enumeration caps, overridable per call site.
inline constexpr int kDefaultInputCap = 24;  // max n for 2^n input enumeration
inline constexpr int kDefaultSeedCap = 24;   // max seed bits for 2^r seed enumeration

inline constexpr int kSchemaVersion = 1;

}  // namespace prgkit
