#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multicommon/forms.hpp"
#include "multicommon/group.hpp"
#include "multicommon/multiplicity.hpp"

namespace mc {

// Parameters of a directional table f = a*1_{[0..M] mod p} - b*1_{A mod p},
// A an integer AP inside [0, M] with common difference at most 5.
struct DirectionalSpec {
    std::int64_t p = 5;
    std::int64_t M = 4;
    double a = 1.0;
    double b = 2.0;
    APDescriptor A; // integer AP
};

struct Directional {
    DensityTable table; // on Z_p, range [-1, 1]
    DirectionalSpec spec;
};

// The per-prime directional construction; p >= 5 prime.  Parameter cases:
// p = 5, 7, 11, 13; 17 <= p <= 199; and p > 199 (M = (p-1)/2, A = multiples
// of 5).  No prime equals 200, so routing p > 199 to the last case is exact.
Directional directional_function(std::int64_t p);

// The four muting atoms (+1, beta), (-1, beta), (+3, 1), (-3, 1) with the
// per-coordinate phase lambda*(t^2 + q t); q = 1 in vector mode and
// floor(sqrt(p)) in cyclic mode.
std::vector<PhaseAtom> muting_atoms(Mode mode, std::int64_t p, double beta);

// Convenience builder: directional_function + muting_atoms wired into a
// recipe; validates the range invariant.
CounterexampleRecipe make_recipe(Mode mode, std::int64_t p, std::size_t n, double alpha,
                                 double beta);

// Materializes f = 1/2 + alpha f1 f2 on the recipe's target group as a dense
// table with range [0,1].
DensityTable assemble(const CounterexampleRecipe& recipe, double cap = kDefaultEnumCap);

// The proportional-pair constructions: when some form is the negation of
// another, f1(x) = -2 sin(2 pi (1.x)/p) (alpha <= 1/4); otherwise the
// four-term cosine construction with the detected ratio c (alpha <= 1/8).
DensityTable proportional_counterexample(const FormSystem& system, double alpha,
                                         double cap = kDefaultEnumCap);

struct TuneRow {
    std::int64_t p = 0;
    std::size_t n = 0;
    double alpha = 0, beta = 0, value = 0, threshold = 0, margin = 0;
};

struct TuneGrid {
    std::vector<double> betas = {0.5, 0.25, 0.125, 0.0625,
                                 0.03125, 0.015625, 0.0078125, 0.00390625}; // 2^-1 .. 2^-8
    std::vector<double> alpha_fractions = {0.0, 0.125, 0.25, 0.5, 1.0};     // of the range cap
    std::vector<std::size_t> n_candidates = {10, 20, 30, 40, 60, 80, 100};  // muting dims
    std::size_t subset_cap = static_cast<std::size_t>(-1);                  // default: exact
    double enum_cap = kDefaultEnumCap;
};

struct TuneResult {
    enum class Route { muting, proportional } route = Route::muting;
    std::int64_t p = 0;
    std::size_t n = 0;
    double alpha = 0, beta = 0;
    double value = 0, threshold = 0, margin = 0;
    double truncation_bound = 0;
    std::vector<TuneRow> rows;
    std::optional<CounterexampleRecipe> recipe; // muting route only
    bool found() const { return margin > 0; }
};

// Grid search for the best (alpha, beta, n) of a muting construction on the
// system induced by `matrix`; falls back to the proportional construction
// when the system has no 4-AP, and throws NoConstruction when neither
// applies.  margin = 2^{1-d} - value; margin > 0 certifies uncommonness at
// the reported (p, n).
TuneResult tune_parameters(const std::vector<std::vector<std::int64_t>>& matrix, Mode mode,
                           std::int64_t p, const TuneGrid& grid = {});

struct RoundingResult {
    std::vector<std::uint64_t> set; // A as element indices
    double pair_before = 0;         // t(f) + t(1-f)
    double pair_after = 0;          // t(A) + t(A^C)
    double slack = 0;               // C(d,2) / |G|
    bool certificate_ok = false;    // pair_after <= pair_before + slack
    std::size_t steps = 0;
    std::vector<double> psi_trace;  // objective after each descent step
    bool psi_monotone = true;
    bool psi_consistent = true;     // incremental trace matches a direct recount
};

// Rounds a [0,1]-valued f to a genuine 2-coloring by endpoint descent on the
// injective-instance objective; forms must be pairwise distinct mod p.
RoundingResult round_to_set(const DensityTable& f, const FormSystem& system,
                            double cap = kDefaultEnumCap);

} // namespace mc
