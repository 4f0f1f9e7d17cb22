#include "multicommon/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "multicommon/kahan.hpp"

namespace mc {

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t mod_reduce(std::int64_t v, std::int64_t m) {
    v %= m;
    return v < 0 ? v + m : v;
}

// exp(2*pi*i * k/m) with k already reduced into [0, m)
std::complex<double> root_of_unity(std::int64_t k, std::int64_t m) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    return {std::cos(phase), std::sin(phase)};
}

// omega_p^k table for k in [0, m)
std::vector<std::complex<double>> root_table(std::int64_t m) {
    std::vector<std::complex<double>> t(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) t[static_cast<std::size_t>(k)] = root_of_unity(k, m);
    return t;
}

} // namespace

GroupSpec::GroupSpec(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw std::invalid_argument("group needs at least one cyclic factor");
    for (std::int64_t m : moduli_)
        if (m < 2) throw std::invalid_argument("every modulus must be >= 2");

    order_fits_ = true;
    unsigned __int128 ord = 1;
    double approx = 1.0;
    for (std::int64_t m : moduli_) {
        ord *= static_cast<unsigned __int128>(m);
        approx *= static_cast<double>(m);
        if (ord > static_cast<unsigned __int128>(UINT64_MAX)) {
            order_fits_ = false;
            ord = 0; // stop tracking, approx carries on
        }
    }
    order_ = order_fits_ ? static_cast<std::uint64_t>(ord) : 0;
    order_approx_ = approx;

    vector_mode_ = is_prime(moduli_[0]) &&
                   std::all_of(moduli_.begin(), moduli_.end(),
                               [&](std::int64_t m) { return m == moduli_[0]; });

    exponent_fits_ = true;
    std::int64_t e = 1;
    for (std::int64_t m : moduli_) {
        const std::int64_t g = std::gcd(e, m);
        const std::int64_t step = m / g;
        if (e > INT64_MAX / step) {
            exponent_fits_ = false;
            e = INT64_MAX;
            break;
        }
        e *= step;
    }
    exponent_ = e;
}

std::uint64_t GroupSpec::order() const {
    if (!order_fits_) throw EnumCapExceeded("group order exceeds 64 bits");
    return order_;
}

std::int64_t GroupSpec::prime() const {
    if (!vector_mode_) throw std::logic_error("prime() requires vector mode");
    return moduli_[0];
}

std::size_t GroupSpec::dimension() const {
    if (!vector_mode_) throw std::logic_error("dimension() requires vector mode");
    return moduli_.size();
}

std::int64_t GroupSpec::exponent() const { return exponent_; }

bool GroupSpec::enumerable(std::size_t r, double cap) const {
    return std::pow(order_approx_, static_cast<double>(r)) <= cap;
}

std::vector<std::int64_t> GroupSpec::coords_of(std::uint64_t index) const {
    std::vector<std::int64_t> c(rank());
    for (std::size_t j = 0; j < rank(); ++j) {
        const auto m = static_cast<std::uint64_t>(moduli_[j]);
        c[j] = static_cast<std::int64_t>(index % m);
        index /= m;
    }
    return c;
}

std::uint64_t GroupSpec::index_of(std::span<const std::int64_t> coords) const {
    if (coords.size() != rank()) throw std::invalid_argument("element/group rank mismatch");
    std::uint64_t idx = 0;
    for (std::size_t j = rank(); j-- > 0;) {
        const std::int64_t m = moduli_[j];
        idx = idx * static_cast<std::uint64_t>(m) +
              static_cast<std::uint64_t>(mod_reduce(coords[j], m));
    }
    return idx;
}

std::uint64_t GroupSpec::add_slow(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t idx = 0, mult = 1;
    for (std::size_t j = 0; j < rank(); ++j) {
        const auto m = static_cast<std::uint64_t>(moduli_[j]);
        std::uint64_t s = a % m + b % m;
        if (s >= m) s -= m;
        idx += s * mult;
        mult *= m;
        a /= m;
        b /= m;
    }
    return idx;
}

std::uint64_t GroupSpec::neg_slow(std::uint64_t a) const {
    std::uint64_t idx = 0, mult = 1;
    for (std::size_t j = 0; j < rank(); ++j) {
        const auto m = static_cast<std::uint64_t>(moduli_[j]);
        const std::uint64_t r = a % m;
        idx += (r == 0 ? 0 : m - r) * mult;
        mult *= m;
        a /= m;
    }
    return idx;
}

std::uint64_t GroupSpec::scale(std::int64_t c, std::uint64_t a) const {
    std::uint64_t idx = 0, mult = 1;
    for (std::size_t j = 0; j < rank(); ++j) {
        const std::int64_t m = moduli_[j];
        const auto r = static_cast<std::int64_t>(a % static_cast<std::uint64_t>(m));
        idx += static_cast<std::uint64_t>(mod_reduce(mod_reduce(c, m) * r, m)) * mult;
        mult *= static_cast<std::uint64_t>(m);
        a /= static_cast<std::uint64_t>(m);
    }
    return idx;
}

GroupElement element_from_coords(const GroupSpec& g, std::vector<std::int64_t> coords) {
    if (coords.size() != g.rank()) throw std::invalid_argument("element/group rank mismatch");
    for (std::size_t j = 0; j < coords.size(); ++j) coords[j] = mod_reduce(coords[j], g.moduli()[j]);
    return GroupElement{std::move(coords)};
}

GroupElement element_at(const GroupSpec& g, std::uint64_t index) {
    return GroupElement{g.coords_of(index)};
}

DensityTable::DensityTable(GroupSpec group, std::vector<double> values, double lo, double hi)
    : group_(std::move(group)), values_(std::move(values)), lo_(lo), hi_(hi) {
    if (!group_.order_fits() || group_.order() != values_.size())
        throw std::invalid_argument("table length must equal the group order");
    if (lo_ > hi_) throw std::invalid_argument("declared range is empty");
    for (double v : values_)
        if (v < lo_ || v > hi_)
            throw std::invalid_argument("table value outside its declared range");
}

DensityTable DensityTable::constant(const GroupSpec& g, double v) {
    return DensityTable(g, std::vector<double>(g.order(), v), v, v);
}

double DensityTable::mean() const {
    KahanSum s;
    for (double v : values_) s.add(v);
    return s.value() / static_cast<double>(values_.size());
}

std::complex<double> character_value(const GroupSpec& g, const GroupElement& freq,
                                     const GroupElement& point) {
    if (freq.coords.size() != g.rank() || point.coords.size() != g.rank())
        throw std::invalid_argument("element/group rank mismatch");
    double phase = 0.0;
    for (std::size_t j = 0; j < g.rank(); ++j) {
        const std::int64_t m = g.moduli()[j];
        const std::int64_t k =
            mod_reduce(mod_reduce(freq.coords[j], m) * mod_reduce(point.coords[j], m), m);
        phase += static_cast<double>(k) / static_cast<double>(m);
    }
    phase -= std::floor(phase);
    const double arg = 2.0 * std::numbers::pi * phase;
    return {std::cos(arg), std::sin(arg)};
}

std::complex<double> character_value(const GroupSpec& g, std::uint64_t freq_index,
                                     std::uint64_t point_index) {
    return character_value(g, element_at(g, freq_index), element_at(g, point_index));
}

std::vector<std::complex<double>> fourier_transform(const DensityTable& f) {
    const GroupSpec& g = f.group();
    const std::uint64_t n = g.order();

    // per-factor root tables; a character value is a product of lookups
    std::vector<std::vector<std::complex<double>>> roots;
    roots.reserve(g.rank());
    for (std::int64_t m : g.moduli()) roots.push_back(root_table(m));

    std::vector<std::complex<double>> out(n);
    std::vector<std::int64_t> fc(g.rank()), pc(g.rank());
    for (std::uint64_t fr = 0; fr < n; ++fr) {
        fc = g.coords_of(fr);
        KahanComplex acc;
        for (std::uint64_t x = 0; x < n; ++x) {
            pc = g.coords_of(x);
            std::complex<double> chi{1.0, 0.0};
            for (std::size_t j = 0; j < g.rank(); ++j) {
                const std::int64_t m = g.moduli()[j];
                chi *= roots[j][static_cast<std::size_t>(mod_reduce(fc[j] * pc[j], m))];
            }
            acc.add(chi * f[x]);
        }
        out[fr] = acc.value() / static_cast<double>(n);
    }
    return out;
}

std::complex<double> phase_average(const GroupSpec& g, std::int64_t a, std::int64_t b0,
                                   std::int64_t c) {
    if (!g.vector_mode()) throw std::invalid_argument("phase_average requires vector mode");
    const std::int64_t p = g.prime();
    const auto roots = root_table(p);

    KahanComplex acc;
    for (std::int64_t t = 0; t < p; ++t) {
        const std::int64_t k = mod_reduce(mod_reduce(a * t, p) * t + mod_reduce(b0 * t, p), p);
        acc.add(roots[static_cast<std::size_t>(k)]);
    }
    const std::complex<double> one_dim = acc.value() / static_cast<double>(p);

    std::complex<double> z{1.0, 0.0};
    for (std::size_t j = 0; j < g.dimension(); ++j) z *= one_dim;
    return z * roots[static_cast<std::size_t>(mod_reduce(c, p))];
}

std::complex<double> phase_average_direct(const GroupSpec& g, std::int64_t a, std::int64_t b0,
                                          std::int64_t c) {
    if (!g.vector_mode()) throw std::invalid_argument("phase_average requires vector mode");
    if (g.dimension() > 3) throw EnumCapExceeded("direct phase average is the n <= 3 oracle");
    const std::int64_t p = g.prime();
    const auto roots = root_table(p);
    const std::uint64_t n = g.order();

    KahanComplex acc;
    for (std::uint64_t x = 0; x < n; ++x) {
        const auto coords = g.coords_of(x);
        std::int64_t quad = 0, lin = 0;
        for (std::int64_t t : coords) {
            quad = mod_reduce(quad + t * t, p);
            lin = mod_reduce(lin + t, p);
        }
        const std::int64_t k = mod_reduce(a * quad + b0 * lin + c, p);
        acc.add(roots[static_cast<std::size_t>(k)]);
    }
    return acc.value() / static_cast<double>(n);
}

double mixed_phase_average(const GroupSpec& g, std::int64_t a, std::int64_t d, std::int64_t b0,
                           std::int64_t c, double cap) {
    if (!g.vector_mode()) throw std::invalid_argument("mixed_phase_average requires vector mode");
    if (!g.enumerable(2, cap)) throw EnumCapExceeded("|G|^2 above cap in mixed_phase_average");
    const std::int64_t p = g.prime();
    const auto roots = root_table(p);
    const std::uint64_t n = g.order();

    // coordinate vectors and quadratic/linear parts per element, once
    std::vector<std::vector<std::int64_t>> coords(n);
    std::vector<std::int64_t> qlin(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        coords[x] = g.coords_of(x);
        std::int64_t quad = 0, lin = 0;
        for (std::int64_t t : coords[x]) {
            quad = mod_reduce(quad + t * t, p);
            lin = mod_reduce(lin + t, p);
        }
        qlin[x] = mod_reduce(a * quad + b0 * lin + c, p);
    }

    KahanSum outer;
    for (std::uint64_t y = 0; y < n; ++y) {
        KahanComplex inner;
        for (std::uint64_t x = 0; x < n; ++x) {
            std::int64_t dot = 0;
            for (std::size_t j = 0; j < g.rank(); ++j)
                dot = mod_reduce(dot + coords[y][j] * coords[x][j], p);
            const std::int64_t k = mod_reduce(qlin[x] + d * dot, p);
            inner.add(roots[static_cast<std::size_t>(k)]);
        }
        outer.add(std::abs(inner.value()) / static_cast<double>(n));
    }
    return outer.value() / static_cast<double>(n);
}

} // namespace mc
