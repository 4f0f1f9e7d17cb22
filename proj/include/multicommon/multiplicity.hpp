#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multicommon/forms.hpp"
#include "multicommon/group.hpp"

namespace mc {

// Enumerates all parameter tuples w in G^r, invoking fn once per tuple with
// the d form values as element indices.  Throws when |G|^r exceeds cap.
template <class LeafFn>
void for_each_instance(const FormSystem& sys, double cap, LeafFn&& fn) {
    const GroupSpec& g = sys.group();
    const std::size_t r = sys.var_count();
    const std::size_t d = sys.form_count();
    if (!g.enumerable(r, cap)) throw EnumCapExceeded("|G|^r exceeds the enumeration cap");
    const std::uint64_t n = g.order();

    // scaled[k][i*n + e] = index of M[i][k] * element(e)
    std::vector<std::vector<std::uint64_t>> scaled(r);
    for (std::size_t k = 0; k < r; ++k) {
        scaled[k].resize(d * n);
        for (std::size_t i = 0; i < d; ++i)
            for (std::uint64_t e = 0; e < n; ++e)
                scaled[k][i * n + e] = g.scale(sys.matrix()[i][k], e);
    }

    std::vector<std::vector<std::uint64_t>> level(r + 1, std::vector<std::uint64_t>(d, 0));
    auto rec = [&](auto&& self, std::size_t k) -> void {
        const auto& cur = level[k];
        auto& next = level[k + 1];
        if (k + 1 == r) {
            for (std::uint64_t e = 0; e < n; ++e) {
                for (std::size_t i = 0; i < d; ++i) next[i] = g.add(cur[i], scaled[k][i * n + e]);
                fn(std::span<const std::uint64_t>(next.data(), d));
            }
            return;
        }
        for (std::uint64_t e = 0; e < n; ++e) {
            for (std::size_t i = 0; i < d; ++i) next[i] = g.add(cur[i], scaled[k][i * n + e]);
            self(self, k + 1);
        }
    };
    if (r == 0) {
        fn(std::span<const std::uint64_t>(level[0].data(), d));
        return;
    }
    rec(rec, 0);
}

// t(f) = E_{w in G^r} prod_i f(phi_i(w)) — the parameter-space multiplicity.
double multiplicity_direct(const FormSystem& sys, const DensityTable& f,
                           double cap = kDefaultEnumCap);

// t(f) + t(1-f); requires f to take values in [0,1].  The commonness
// threshold for comparison is 2^{1-d}.
double monochromatic_pair(const FormSystem& sys, const DensityTable& f,
                          double cap = kDefaultEnumCap);

double commonness_threshold(std::size_t d);

// One summand of the muting part: weight * omega^(lambda (t^2 + q t)) applied
// per scalar coordinate.  q is 1 in vector mode and floor(sqrt(p)) in Z_p.
struct PhaseAtom {
    double weight = 1.0;
    std::int64_t lambda = 1;
    std::int64_t q = 1;
};

enum class Mode { vector_space, cyclic };

// Full description of a muting construction f = 1/2 + alpha * f1 * f2:
// a directional table f1 on Z_p and muting atoms f2, applied either on
// F_p^{n+1} (f1 through the first coordinate, f2 through the rest) or
// pointwise on Z_p.
struct CounterexampleRecipe {
    Mode mode = Mode::vector_space;
    std::int64_t p = 5;
    std::size_t n = 1; // muting dimensions; ignored in cyclic mode
    DensityTable directional;
    std::vector<PhaseAtom> atoms;
    double alpha = 0.0;
    double beta = 1.0;

    double max_abs_directional() const;
    double atom_weight_sum() const; // max |f2|, attained at 0
    double alpha_cap() const;       // 1 / (2 max|f1| max|f2|)
    GroupSpec target_group() const;
    void validate() const;
};

// Muting factor of a form subset in vector mode,
//   M = sum_lambda (prod_i weight(lambda_i)) * z_lambda^n,
//   z_lambda = E_{u in F_p^s} omega^(sum_i lambda_i (psi_i(u)^2 + q psi_i(u))),
// computed on the subset's own basis (s = span dimension), so the cost does
// not depend on n.  Tuples whose phase vanishes identically contribute their
// weight exactly; their total is reported separately.
struct MutingFactor {
    double value = 0.0;
    double zero_phase_mass = 0.0;
    std::size_t zero_phase_count = 0;
};
MutingFactor muting_factor(const std::vector<std::vector<std::int64_t>>& rows, std::int64_t p,
                           std::span<const PhaseAtom> atoms, std::size_t n,
                           double cap = kDefaultEnumCap);

// E_{u in F_p^s} prod_i f1(psi_i(u)) for a subset of forms, again on its own
// basis; f1 lives on Z_p.
double directional_factor(const std::vector<std::vector<std::int64_t>>& rows, std::int64_t p,
                          const DensityTable& f1, double cap = kDefaultEnumCap);

struct StructuredValue {
    double value = 0.0;
    double truncation_bound = 0.0; // 0 when subset_cap >= d (value exact)
};

// t(f) + t(1-f) for the assembled recipe, via the even-subset expansion
//   2^{1-d} + sum_{k even} 2^{k+1-d} alpha^k sum_{|I|=k} T_I.
// Vector mode: T_I = (directional factor) * (muting factor), exact at any n.
// Cyclic mode: T_I is an O(p^s) sum of the pointwise product (f1 f2) о psi.
// Subsets larger than subset_cap are dropped and covered by the returned
// rigorous truncation bound sum_{k>cap} 2^{k+1-d} C(d,k) (alpha max|f1 f2|)^k.
StructuredValue multiplicity_structured(const FormSystem& sys, const CounterexampleRecipe& recipe,
                                        std::size_t subset_cap, double cap = kDefaultEnumCap);

// Exhaustive scan of all 2-colorings of G (as subsets A), |G| <= 25.
struct ColoringSearch {
    std::uint32_t best_mask = 0;
    std::vector<std::uint64_t> best_set;
    double value = 0.0;
    double threshold = 0.0;
    bool common_at_this_size = false;
};
ColoringSearch min_coloring(const FormSystem& sys, double cap = kDefaultEnumCap);

} // namespace mc
