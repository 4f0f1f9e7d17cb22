#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multicommon/forms.hpp"
#include "multicommon/group.hpp"
#include "multicommon/multiplicity.hpp"

namespace mc {

// One checked inequality with both sides kept for the report.
struct Inequality {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    bool ok = false;
    double tol = 0; // additive slack used for the ok verdict
};

// ---- quadratic-phase / AP correlation bounds ----
//
// For random admissible instances (per-y APs with C-fraction differences
// coprime to p, plus coefficients drawn in one of three regimes), each left
// side is computed exactly by direct summation and compared against:
//   regime 1 (d coprime to p):            8 C^2 (log p + 1) / p
//   regime 2 (d = 0, a coprime to p):     2 (log p + 1) / sqrt(p)
//   regime 3 (a = d = 0, b = b'q, b' a C-fraction): 2 (C^2 + 1) / sqrt(p)
// Requires the hypothesis 4 C^4 < p.
struct PhaseRegimeReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double max_ratio = 0; // max LHS/RHS observed
    double rhs = 0;
    Inequality worst;
};
struct PhaseBoundsReport {
    std::int64_t p = 0;
    std::int64_t C = 0;
    std::uint64_t seed = 0;
    PhaseRegimeReport regime[3];
    std::size_t total_violations() const {
        return regime[0].violations + regime[1].violations + regime[2].violations;
    }
};
PhaseBoundsReport check_phase_bounds(std::int64_t p, std::int64_t C, std::size_t trials,
                                     std::uint64_t seed, unsigned threads = 1);

// ---- muting-part subconfiguration bounds (vector mode) ----
//
// Evaluates E prod f2 o phi_i via the n-independent atom expansion for a
// catalog of systems and checks, with beta from the atoms:
//   (i)  independent pairs:        |value| <= 16 / sqrt(p^n)
//   (ii) non-AP quadruples:        |value| <= 244 / sqrt(p^n) + 12 beta^3
//   (iii) the 4-AP:                 value  >= 2 beta^2 - 254 / sqrt(p^n)
// For (iii) the 2 beta^2 main term is isolated from the two tuples
// +-(1,-3,3,-1), whose phase vanishes identically.
struct MutingBoundRow {
    std::string name;
    std::size_t k = 0;
    double value = 0;
    double bound = 0;
    bool lower_bound = false; // (iii) is a lower bound, others are upper
    bool ok = false;
    double main_term = 0;       // (iii): mass of the tuples +-(1,-3,3,-1), 2 beta^2
    double extra_vanishing = 0; // further mod-p vanishing mass beyond the canonical pair
    bool beta3_attained = false; // (ii) value exceeds the bound without 12 beta^3
};
struct MutingBoundsReport {
    std::int64_t p = 0;
    std::size_t n = 0;
    double beta = 0;
    std::vector<MutingBoundRow> rows;
    std::size_t violations = 0;
};
MutingBoundsReport check_muting_subconfig_bounds(std::int64_t p, std::size_t n, double beta,
                                                 double cap = kDefaultEnumCap);

// ---- nonnegative configurations ----

// t_AQ(f) for (x, x+h1, x+h2, x+h1+h2), via E_h (E_x f(x)f(x+h))^2; cost |G|^2.
double additive_quadruple_value(const DensityTable& f, double cap = kDefaultEnumCap);

// Fourier route for the same quantity: sum_gamma |fhat(gamma)|^4.
double additive_quadruple_fourier(const DensityTable& f);

// t_AH(f) for the 6-point pattern, via E_{h2,h3} (E_x f(x)f(x+h2)f(x+h3))^2;
// cost |G|^3.
double additive_hextuple_value(const DensityTable& f, double cap = kDefaultEnumCap);

// ---- the 3-cube with one missing vertex ----
//
// Full contribution decomposition of t(g) + t(1-g) for the 7-form system on
// G^4, with every inequality of the commonness chain checked and both sides
// reported.  alpha = max(Eg, 1-Eg); f = g - alpha after the swap.
struct ClassValue {
    std::string name; // e.g. "k4.A2"
    std::size_t k = 0;
    double sum = 0;          // total over the class members
    std::size_t members = 0; // member count
};
struct ContributionReport {
    double alpha = 0;
    bool swapped = false;
    double total_direct = 0;    // t(g) + t(1-g), direct product enumeration
    double total_expansion = 0; // main term + sum_k P_k sum_I S_I
    double main_term = 0;       // alpha^7 + (1-alpha)^7
    double t_aq = 0;
    double t_ah = 0;
    double e_f2 = 0;                   // E(f^2)
    double small_subset_max_abs = 0;   // max |S_I| over k <= 3
    std::size_t k4_independent = 0;    // detected k=4 fiber-constant subsets
    std::size_t k5_independent = 0;    // detected k=5 fiber-constant subsets
    bool partition_consistent = false; // detection complements the fixed lists
    std::vector<ClassValue> classes;
    std::vector<Inequality> checks;
    std::size_t violations = 0;
};
ContributionReport cube_report(const GroupSpec& group, const DensityTable& g,
                               double cap = kDefaultEnumCap);

// Amortized form of cube_report: the instance table and the structural
// fiber-constancy detection depend only on the group, so sweeps over many
// colorings of one group construct this once.
class CubeLab {
public:
    explicit CubeLab(GroupSpec group, double cap = kDefaultEnumCap);
    ContributionReport report(const DensityTable& g) const;
    const GroupSpec& group() const { return group_; }

private:
    GroupSpec group_;
    double cap_;
    std::vector<std::uint32_t> instances_; // |G|^4 x 7 form values
    std::vector<std::uint8_t> independent_; // per 7-bit mask: has a fiber-constant form
    std::size_t k4_independent_ = 0;
    std::size_t k5_independent_ = 0;
    bool partition_consistent_ = false;
};

// The 7 x 4 matrix of the cube-missing-vertex system.
std::vector<std::vector<std::int64_t>> cube_missing_vertex_matrix();

} // namespace mc
