#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mc {

// Default ceiling on |G|^r for any operation that enumerates tuples.
inline constexpr double kDefaultEnumCap = 1e9;

// Tolerance budget used throughout: inequality suites assert within
// kIneqTol, cross-route oracle comparisons within kOracleTol.
inline constexpr double kIneqTol = 1e-9;
inline constexpr double kOracleTol = 1e-8;

// Thrown when an enumeration would exceed the configured cap.  The CLI
// maps this to its own exit code.
struct EnumCapExceeded : std::runtime_error {
    explicit EnumCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when no counterexample construction applies to a system.
struct NoConstruction : std::runtime_error {
    explicit NoConstruction(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mc
