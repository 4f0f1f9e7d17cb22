#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "multicommon/group.hpp"

namespace mc {

// Witness that x is a C-fraction mod p: x*z = y (mod p) with |y|, z < C.
// bound is the minimal such C for the stored witness, max(|y|, z) + 1.
struct FractionWitness {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t z = 1;
    std::int64_t p = 0;
    std::int64_t bound = 0;

    bool valid() const;
};

// Minimal witness for x mod p, scanning z = 1..cap-1 and taking the least
// absolute residue of x*z; ties broken by smallest z.  Empty when no witness
// with bound <= cap exists.
std::optional<FractionWitness> c_fraction_bound(std::int64_t x, std::int64_t p, std::int64_t cap);

// Arithmetic progression {start + j*diff : 0 <= j < length}.  With a modulus
// it lives in Z_p (members are residues); without one it is an integer AP.
struct APDescriptor {
    std::int64_t start = 0;
    std::int64_t diff = 0;
    std::int64_t length = 0;
    std::optional<std::int64_t> modulus;

    std::vector<std::int64_t> members() const;
};

// Splits a modular AP whose difference is a C-fraction (witnessed) into
// m <= 3C disjoint integer APs inside [0, p-1], all sharing one common
// difference 0 < s' < C, whose union projects onto the same residue set.
std::vector<APDescriptor> split_ap(const APDescriptor& ap, const FractionWitness& witness);

// A d x r integer matrix inducing d linear forms phi_i(w) = sum_k M[i][k] w_k
// on G^r.  Structural predicates (distinctness, injectivity, AP detection)
// are mod-p properties and require vector mode.
class FormSystem {
public:
    FormSystem(std::vector<std::vector<std::int64_t>> matrix, GroupSpec group);

    const GroupSpec& group() const { return group_; }
    const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }
    std::size_t form_count() const { return matrix_.size(); }
    std::size_t var_count() const { return matrix_[0].size(); }

    // rows reduced mod p (vector mode only)
    const std::vector<std::vector<std::int64_t>>& rows_mod_p() const;

    bool pairwise_distinct() const; // mod p
    bool injective() const;         // rank == r mod p
    std::size_t rank_mod_p() const;
    std::int64_t coeff_bound() const { return coeff_bound_; } // C1 = max |M_ij|, at least 1

    // phi_i at a tuple of element indices (general groups)
    std::uint64_t eval_index(std::size_t i, std::span<const std::uint64_t> w) const;

    // phi_i of a scalar tuple mod p (vector mode slice)
    std::int64_t eval_scalar(std::size_t i, std::span<const std::int64_t> w) const;

private:
    std::vector<std::vector<std::int64_t>> matrix_;
    GroupSpec group_;
    std::vector<std::vector<std::int64_t>> rows_mod_p_;
    std::int64_t coeff_bound_ = 1;
    bool vector_flags_valid_ = false;
    bool pairwise_distinct_ = false;
    std::size_t rank_mod_p_ = 0;
};

// First 4-subset (lexicographic) whose rows form an AP identically mod p,
// together with the witnessing order (canonical up to reversal).  Indices
// are 0-based positions into the form list.
struct FourAP {
    std::array<std::size_t, 4> order;
};
std::optional<FourAP> detect_four_ap(const FormSystem& system);

// First pair (i < j) with phi_j = c * phi_i mod p for c outside {0, 1};
// negation_pair_exists is set when some pair anywhere has c = -1.
struct ProportionalPair {
    std::size_t i = 0;
    std::size_t j = 0;
    std::int64_t c = 0;
    bool negation_pair_exists = false;
};
std::optional<ProportionalPair> detect_proportional_pair(const FormSystem& system);

// Result of re-expressing a system so the pivot forms become coordinates:
// phi'_{pivot[j]}(v) = v_j, same instance set.  Coefficients of the new
// matrix are kept as bounded integer representatives; each is a C2-fraction
// for C2 = r*C1*(C1*sqrt(r))^r, with a verified witness per entry.
struct Reparametrization {
    FormSystem system;
    double fraction_bound_c2 = 0;
    std::vector<std::vector<FractionWitness>> witnesses; // per matrix entry
};
Reparametrization reparametrize(const FormSystem& system, std::span<const std::size_t> pivots);

// ---- modular linear algebra helpers (used across modules) ----
std::int64_t mod_norm(std::int64_t v, std::int64_t m);           // into [0, m)
std::int64_t mod_inverse(std::int64_t a, std::int64_t p);        // p prime, a != 0 mod p
std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p);

// Rewrites the subset rows on a basis of themselves: returns a |subset| x s
// matrix C with s = rank, such that row_i = sum_j C[i][j] * basis_j mod p and
// the basis rows are independent rows of the subset.  As w ranges over G^r
// the basis values range uniformly over G^s, so subset averages reduce to
// F_p^s sums.  Entries are normalized into [0, p).
struct SubsetBasis {
    std::size_t span_dim = 0;
    std::vector<std::vector<std::int64_t>> coeffs;
};
SubsetBasis subset_on_own_basis(const std::vector<std::vector<std::int64_t>>& rows,
                                std::int64_t p);

} // namespace mc
