#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "multicommon/common.hpp"

namespace mc {

// A finite abelian group presented as a product of cyclic factors
// Z_{m_1} x ... x Z_{m_k}, every m_j >= 2.  "Vector mode" means all moduli
// equal one prime p, i.e. the group is F_p^n; that is where the linear
// algebra of form systems lives.
//
// Elements are residue vectors; they also carry a mixed-radix linear index
// (first coordinate fastest).  Index arithmetic is only available when the
// order fits in 64 bits; huge groups (e.g. F_5^41) remain constructible and
// are handled symbolically by the structured evaluators.
class GroupSpec {
public:
    explicit GroupSpec(std::vector<std::int64_t> moduli);

    const std::vector<std::int64_t>& moduli() const { return moduli_; }
    std::size_t rank() const { return moduli_.size(); }

    bool order_fits() const { return order_fits_; }
    std::uint64_t order() const; // throws if !order_fits()
    double order_approx() const { return order_approx_; }

    bool vector_mode() const { return vector_mode_; }
    std::int64_t prime() const; // vector mode only
    std::size_t dimension() const; // vector mode only: n in F_p^n

    // lcm of the moduli; saturates (and flags) on 64-bit overflow
    std::int64_t exponent() const;
    bool exponent_fits() const { return exponent_fits_; }

    // true when |G|^r stays within cap
    bool enumerable(std::size_t r, double cap = kDefaultEnumCap) const;

    // ---- element/index arithmetic (order must fit) ----
    std::vector<std::int64_t> coords_of(std::uint64_t index) const;
    std::uint64_t index_of(std::span<const std::int64_t> coords) const;

    // hot path of every enumeration loop; division-free for cyclic groups
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (moduli_.size() == 1) {
            const auto m = static_cast<std::uint64_t>(moduli_[0]);
            const std::uint64_t s = a + b;
            return s >= m ? s - m : s;
        }
        return add_slow(a, b);
    }
    std::uint64_t neg(std::uint64_t a) const {
        if (moduli_.size() == 1)
            return a == 0 ? 0 : static_cast<std::uint64_t>(moduli_[0]) - a;
        return neg_slow(a);
    }
    std::uint64_t scale(std::int64_t c, std::uint64_t a) const;

    bool operator==(const GroupSpec& other) const { return moduli_ == other.moduli_; }
    bool operator!=(const GroupSpec& other) const { return !(*this == other); }

private:
    std::uint64_t add_slow(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t neg_slow(std::uint64_t a) const;

    std::vector<std::int64_t> moduli_;
    bool order_fits_ = false;
    std::uint64_t order_ = 0;
    double order_approx_ = 0.0;
    bool vector_mode_ = false;
    std::int64_t exponent_ = 0;
    bool exponent_fits_ = false;
};

// Residue-vector element.  coords[j] is normalized into [0, m_j).
struct GroupElement {
    std::vector<std::int64_t> coords;
};

GroupElement element_from_coords(const GroupSpec& g, std::vector<std::int64_t> coords);
GroupElement element_at(const GroupSpec& g, std::uint64_t index);

// A real-valued function on G stored densely by element index, together
// with its declared range [lo, hi]; construction checks every value.
class DensityTable {
public:
    DensityTable(GroupSpec group, std::vector<double> values, double lo, double hi);

    static DensityTable constant(const GroupSpec& g, double v);

    const GroupSpec& group() const { return group_; }
    const std::vector<double>& values() const { return values_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double operator[](std::uint64_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    double mean() const;

private:
    GroupSpec group_;
    std::vector<double> values_;
    double lo_, hi_;
};

// gamma_freq(point) = prod_j exp(2*pi*i * freq_j * point_j / m_j).
// freq |-> gamma_freq runs over the full dual group exactly once.
std::complex<double> character_value(const GroupSpec& g, const GroupElement& freq,
                                     const GroupElement& point);
std::complex<double> character_value(const GroupSpec& g, std::uint64_t freq_index,
                                     std::uint64_t point_index);

// fhat(gamma) = E_x gamma(x) f(x); result indexed by the frequency element.
// Direct O(|G|^2); group sizes here are desk scale.
std::vector<std::complex<double>> fourier_transform(const DensityTable& f);

// E_{x in F_p^n} omega^(a x.x + b0*1.x + c), evaluated coordinatewise as
// (E_t omega^(a t^2 + b0 t))^n * omega^c, so the cost is independent of n.
std::complex<double> phase_average(const GroupSpec& g, std::int64_t a, std::int64_t b0,
                                   std::int64_t c);

// Brute-force oracle for the above; refuses beyond n = 3.
std::complex<double> phase_average_direct(const GroupSpec& g, std::int64_t a,
                                          std::int64_t b0, std::int64_t c);

// E_y |E_x omega^(a x.x + d y.x + b0*1.x + c)| by direct double enumeration.
double mixed_phase_average(const GroupSpec& g, std::int64_t a, std::int64_t d,
                           std::int64_t b0, std::int64_t c,
                           double cap = kDefaultEnumCap);

} // namespace mc
