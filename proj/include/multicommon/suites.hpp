#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multicommon/bounds.hpp"
#include "multicommon/common.hpp"

namespace mc::suites {

// Aggregated outcome of one verification sweep.  Individual rows are only
// retained for violations (for replay) and for per-grid-point sweeps small
// enough to print; bulk grids keep counts and the worst ratio.
struct Verdict {
    std::string suite;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::size_t excluded = 0; // hypothesis-excluded probes, informational
    double worst_ratio = 0;   // max LHS/RHS across included checks
    Inequality worst;
    std::vector<Inequality> violation_rows; // capped
    std::vector<std::string> notes;

    void record(const std::string& name, double lhs, double rhs, double tol = kIneqTol);
    void merge(const Verdict& other);
};

// Per-prime row of the directional sweep.
struct DirectionalRow {
    std::int64_t p = 0;
    double t = 0;
    double bound = 0;       // -2/199^2
    double case6_bound = 0; // 1/(60p) - 1/120, primes above 199
    bool ok = true;
};
struct DirectionalSweep {
    Verdict verdict;
    std::vector<DirectionalRow> rows;
};

// t_4AP(f_p) <= -2/199^2 for primes in [lo, hi]; for p > 199 additionally
// the sharper t < 1/(60p) - 1/120.
DirectionalSweep directional_sweep(std::int64_t lo, std::int64_t hi);

// Quadratic-phase bound |E omega^(a x.x + b0 1.x + c)| <= |G|^(-1/2) over the
// full (a, b0, c) grid, and the mixed-phase bound
// E_y |E_x omega^(a x.x + d y.x + b0 1.x + c)| <= 1/|G| + |G|^(-1/2) over the
// full (a, b0, c, d) grid, for each (p, n).  Hypothesis-excluded coefficient
// tuples are reported, not counted as violations.
Verdict gauss_suite(const std::vector<std::int64_t>& primes, const std::vector<std::size_t>& dims);

// AP/quadratic-phase correlation bounds; wraps check_phase_bounds over a
// (p, C) grid, skipping pairs with 4C^4 >= p as hypothesis-excluded.
Verdict phase_vanish_suite(const std::vector<std::int64_t>& primes,
                           const std::vector<std::int64_t>& cs, std::size_t trials,
                           std::uint64_t seed, unsigned threads);

// Muting subconfiguration bounds over a (p, beta, n) grid.
Verdict muting_bounds_suite(const std::vector<std::int64_t>& primes,
                            const std::vector<double>& betas,
                            const std::vector<std::size_t>& dims);

// Cube-missing-vertex commonness: exhaustive 2-colorings for |G| <= 8 plus
// random [0,1] tables per group; every report inequality must hold.
Verdict cube_suite(const std::vector<std::vector<std::int64_t>>& groups, std::size_t trials,
                   std::uint64_t seed);

// AP splitting properties on random instances: union equality, disjointness,
// piece count <= 3C, shared difference < C.
Verdict splitting_suite(std::size_t trials, std::uint64_t seed);

// Reparametrization properties on random systems: pivots become coordinates,
// instance sets match by enumeration, coefficients carry C2 witnesses.
Verdict reparam_suite(std::size_t trials, std::uint64_t seed);

// C-fraction census |{x : x is a C-fraction mod p}| <= 4C^2 for p <= pmax.
Verdict census_suite(std::int64_t pmax, std::int64_t cmax);

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

} // namespace mc::suites
