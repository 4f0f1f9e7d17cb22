#include "multicommon/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "multicommon/kahan.hpp"

namespace mc {

namespace {

std::vector<std::complex<double>> root_table(std::int64_t m) {
    std::vector<std::complex<double>> t(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        t[static_cast<std::size_t>(k)] = {std::cos(arg), std::sin(arg)};
    }
    return t;
}

std::complex<double> pow_int(std::complex<double> z, std::size_t n) {
    std::complex<double> acc{1.0, 0.0};
    while (n > 0) {
        if (n & 1U) acc *= z;
        z *= z;
        n >>= 1U;
    }
    return acc;
}

double binom(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double v = 1.0;
    for (std::size_t j = 1; j <= k; ++j)
        v = v * static_cast<double>(n - k + j) / static_cast<double>(j);
    return v;
}

// iterate k-subsets of [0, d) in lexicographic order
bool next_combination(std::vector<std::size_t>& idx, std::size_t d) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] + (k - i) < d) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// enumerate u in F_p^s, calling fn with the subset values t_i = psi_i(u)
template <class Fn>
void for_each_slice(const SubsetBasis& sb, std::int64_t p, Fn&& fn) {
    const std::size_t s = sb.span_dim;
    const std::size_t k = sb.coeffs.size();
    std::vector<std::int64_t> u(s, 0);
    std::vector<std::int64_t> t(k, 0);
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) {
            std::int64_t acc = 0;
            for (std::size_t b = 0; b < s; ++b) acc += sb.coeffs[i][b] * u[b];
            t[i] = mod_norm(acc, p);
        }
        fn(std::span<const std::int64_t>(t.data(), k));
        std::size_t pos = 0;
        while (pos < s && ++u[pos] == p) u[pos++] = 0;
        if (pos == s) break;
    }
}

double pow_of_uint(double base, std::size_t e) {
    double v = 1.0;
    for (std::size_t i = 0; i < e; ++i) v *= base;
    return v;
}

} // namespace

double commonness_threshold(std::size_t d) {
    return std::pow(2.0, 1.0 - static_cast<double>(d));
}

double multiplicity_direct(const FormSystem& sys, const DensityTable& f, double cap) {
    if (f.group() != sys.group())
        throw std::invalid_argument("function group does not match the system");
    KahanSum acc;
    for_each_instance(sys, cap, [&](std::span<const std::uint64_t> vals) {
        double prod = 1.0;
        for (std::uint64_t v : vals) prod *= f[v];
        acc.add(prod);
    });
    const double total =
        pow_of_uint(static_cast<double>(sys.group().order()), sys.var_count());
    return acc.value() / total;
}

double monochromatic_pair(const FormSystem& sys, const DensityTable& f, double cap) {
    if (f.group() != sys.group())
        throw std::invalid_argument("function group does not match the system");
    for (double v : f.values())
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("monochromatic pair needs values in [0,1]");
    KahanSum acc_f, acc_g;
    for_each_instance(sys, cap, [&](std::span<const std::uint64_t> vals) {
        double pf = 1.0, pg = 1.0;
        for (std::uint64_t v : vals) {
            pf *= f[v];
            pg *= 1.0 - f[v];
        }
        acc_f.add(pf);
        acc_g.add(pg);
    });
    const double total =
        pow_of_uint(static_cast<double>(sys.group().order()), sys.var_count());
    return (acc_f.value() + acc_g.value()) / total;
}

double CounterexampleRecipe::max_abs_directional() const {
    double m = 0.0;
    for (double v : directional.values()) m = std::max(m, std::abs(v));
    return m;
}

double CounterexampleRecipe::atom_weight_sum() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::abs(a.weight);
    return s;
}

double CounterexampleRecipe::alpha_cap() const {
    const double m1 = max_abs_directional();
    const double m2 = atom_weight_sum();
    if (m1 == 0.0 || m2 == 0.0) return 0.25; // degenerate perturbation, range is safe
    return 1.0 / (2.0 * m1 * m2);
}

GroupSpec CounterexampleRecipe::target_group() const {
    if (mode == Mode::cyclic) return GroupSpec({p});
    return GroupSpec(std::vector<std::int64_t>(n + 1, p));
}

void CounterexampleRecipe::validate() const {
    if (directional.group() != GroupSpec({p}))
        throw std::invalid_argument("directional table must live on Z_p");
    if (mode == Mode::vector_space && n < 1)
        throw std::invalid_argument("vector mode needs at least one muting dimension");
    if (atoms.empty()) throw std::invalid_argument("recipe has no muting atoms");
    for (const auto& a : atoms)
        if (a.lambda == 0) throw std::invalid_argument("atom lambda must be nonzero");
    if (beta <= 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in (0,1]");
    if (alpha < 0.0 || alpha > alpha_cap() * (1.0 + 1e-12))
        throw std::invalid_argument("alpha exceeds the range cap 1/(2 max|f1| max|f2|)");
}

MutingFactor muting_factor(const std::vector<std::vector<std::int64_t>>& rows, std::int64_t p,
                           std::span<const PhaseAtom> atoms, std::size_t n, double cap) {
    const std::size_t k = rows.size();
    const std::size_t na = atoms.size();
    const auto sb = subset_on_own_basis(rows, p);
    const std::size_t s = sb.span_dim;

    const double points = std::pow(static_cast<double>(p), static_cast<double>(s));
    double tuples = 1.0;
    for (std::size_t i = 0; i < k; ++i) tuples *= static_cast<double>(na);
    if (points > cap || tuples * points > cap)
        throw EnumCapExceeded("muting factor cost above cap");
    const auto ntuples = static_cast<std::size_t>(tuples);

    // symbolic phase coefficients per tuple: quadratic (s x s upper), linear (s)
    // tuple digits are read little-endian: digit i chooses the atom of form i
    std::vector<bool> zero_phase(ntuples, false);
    std::size_t zero_count = 0;
    double zero_mass = 0.0;
    std::vector<double> weight(ntuples, 1.0);
    {
        std::vector<std::size_t> digit(k, 0);
        for (std::size_t t = 0; t < ntuples; ++t) {
            std::size_t tt = t;
            for (std::size_t i = 0; i < k; ++i) {
                digit[i] = tt % na;
                tt /= na;
            }
            bool zero = true;
            for (std::size_t a = 0; a < s && zero; ++a) {
                for (std::size_t b = a; b < s && zero; ++b) {
                    std::int64_t coef = 0;
                    for (std::size_t i = 0; i < k; ++i) {
                        const std::int64_t la = atoms[digit[i]].lambda;
                        const std::int64_t pa = sb.coeffs[i][a];
                        const std::int64_t pb = sb.coeffs[i][b];
                        coef = mod_norm(coef + la * pa % p * pb, p);
                    }
                    if (a != b) coef = mod_norm(2 * coef, p);
                    if (coef != 0) zero = false;
                }
                if (!zero) break;
                std::int64_t lin = 0;
                for (std::size_t i = 0; i < k; ++i) {
                    const std::int64_t la = atoms[digit[i]].lambda;
                    lin = mod_norm(lin + la * atoms[digit[i]].q % p * sb.coeffs[i][a], p);
                }
                if (lin != 0) zero = false;
            }
            double w = 1.0;
            for (std::size_t i = 0; i < k; ++i) w *= atoms[digit[i]].weight;
            weight[t] = w;
            zero_phase[t] = zero;
            if (zero) {
                ++zero_count;
                zero_mass += w;
            }
        }
    }

    // numeric z_lambda for the non-vanishing phases
    const auto roots = root_table(p);
    std::vector<std::int64_t> atom_phase(na * static_cast<std::size_t>(p));
    for (std::size_t a = 0; a < na; ++a)
        for (std::int64_t t = 0; t < p; ++t)
            atom_phase[a * p + t] =
                mod_norm(atoms[a].lambda * mod_norm(t * t + atoms[a].q * t, p), p);

    std::vector<KahanComplex> acc(ntuples);
    std::vector<std::int64_t> phase_prefix;
    for_each_slice(sb, p, [&](std::span<const std::int64_t> tvals) {
        // phases of all atom tuples via a prefix tensor over the forms
        phase_prefix.assign(1, 0);
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::int64_t> next(phase_prefix.size() * na);
            for (std::size_t t = 0; t < phase_prefix.size(); ++t)
                for (std::size_t a = 0; a < na; ++a) {
                    std::int64_t v = phase_prefix[t] + atom_phase[a * p + tvals[i]];
                    if (v >= p) v -= p;
                    next[t * na + a] = v;
                }
            phase_prefix = std::move(next);
        }
        // prefix index order is big-endian in the digits; convert on the fly
        for (std::size_t t = 0; t < ntuples; ++t) {
            if (zero_phase[t]) continue;
            // digits of t little-endian -> prefix index big-endian
            std::size_t idx = 0, tt = t;
            for (std::size_t i = 0; i < k; ++i) {
                idx = idx * na + tt % na;
                tt /= na;
            }
            acc[t].add(roots[static_cast<std::size_t>(phase_prefix[idx])]);
        }
    });

    MutingFactor out;
    out.zero_phase_count = zero_count;
    out.zero_phase_mass = zero_mass;
    KahanSum total;
    total.add(zero_mass); // z = 1 exactly for vanishing phases
    for (std::size_t t = 0; t < ntuples; ++t) {
        if (zero_phase[t]) continue;
        const std::complex<double> z = acc[t].value() / points;
        total.add(weight[t] * pow_int(z, n).real());
    }
    out.value = total.value();
    return out;
}

double directional_factor(const std::vector<std::vector<std::int64_t>>& rows, std::int64_t p,
                          const DensityTable& f1, double cap) {
    if (f1.group() != GroupSpec({p}))
        throw std::invalid_argument("directional table must live on Z_p");
    const auto sb = subset_on_own_basis(rows, p);
    const double points = std::pow(static_cast<double>(p), static_cast<double>(sb.span_dim));
    if (points > cap) throw EnumCapExceeded("directional factor cost above cap");
    KahanSum acc;
    for_each_slice(sb, p, [&](std::span<const std::int64_t> tvals) {
        double prod = 1.0;
        for (std::int64_t t : tvals) prod *= f1[static_cast<std::uint64_t>(t)];
        acc.add(prod);
    });
    return acc.value() / points;
}

namespace {

// pointwise muting table on Z_p (cyclic mode); real by conjugate symmetry
std::vector<double> muting_table(std::int64_t p, std::span<const PhaseAtom> atoms) {
    const auto roots = root_table(p);
    std::vector<double> f2(static_cast<std::size_t>(p), 0.0);
    for (std::int64_t x = 0; x < p; ++x) {
        std::complex<double> v{0.0, 0.0};
        for (const auto& a : atoms)
            v += a.weight * roots[static_cast<std::size_t>(
                                mod_norm(a.lambda * mod_norm(x * x + a.q * x, p), p))];
        f2[static_cast<std::size_t>(x)] = v.real();
    }
    return f2;
}

} // namespace

StructuredValue multiplicity_structured(const FormSystem& sys, const CounterexampleRecipe& recipe,
                                        std::size_t subset_cap, double cap) {
    recipe.validate();
    if (sys.group() != recipe.target_group())
        throw std::invalid_argument("system group does not match the recipe target");
    const std::size_t d = sys.form_count();
    const std::int64_t p = recipe.p;
    const auto& rows = sys.rows_mod_p();

    double max_f1f2 = 0.0;
    std::vector<double> f12; // cyclic pointwise product table
    if (recipe.mode == Mode::cyclic) {
        const auto f2 = muting_table(p, recipe.atoms);
        f12.resize(static_cast<std::size_t>(p));
        for (std::int64_t x = 0; x < p; ++x) {
            f12[static_cast<std::size_t>(x)] =
                recipe.directional[static_cast<std::uint64_t>(x)] * f2[static_cast<std::size_t>(x)];
            max_f1f2 = std::max(max_f1f2, std::abs(f12[static_cast<std::size_t>(x)]));
        }
    } else {
        max_f1f2 = recipe.max_abs_directional() * recipe.atom_weight_sum();
    }

    const std::size_t cap_k = std::min(subset_cap, d);
    KahanSum value;
    value.add(commonness_threshold(d));

    for (std::size_t k = 2; k <= cap_k; k += 2) {
        const double factor =
            std::pow(2.0, static_cast<double>(k) + 1.0 - static_cast<double>(d)) *
            pow_of_uint(recipe.alpha, k);
        if (factor == 0.0) continue;
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        do {
            std::vector<std::vector<std::int64_t>> sub;
            sub.reserve(k);
            for (std::size_t i : idx) sub.push_back(rows[i]);
            double term;
            if (recipe.mode == Mode::vector_space) {
                const double dir = directional_factor(sub, p, recipe.directional, cap);
                const MutingFactor mf = muting_factor(sub, p, recipe.atoms, recipe.n, cap);
                term = dir * mf.value;
            } else {
                const auto sb = subset_on_own_basis(sub, p);
                const double points =
                    std::pow(static_cast<double>(p), static_cast<double>(sb.span_dim));
                if (points > cap) throw EnumCapExceeded("cyclic subset term above cap");
                KahanSum acc;
                for_each_slice(sb, p, [&](std::span<const std::int64_t> tvals) {
                    double prod = 1.0;
                    for (std::int64_t t : tvals) prod *= f12[static_cast<std::size_t>(t)];
                    acc.add(prod);
                });
                term = acc.value() / points;
            }
            value.add(factor * term);
        } while (next_combination(idx, d));
    }

    StructuredValue out;
    out.value = value.value();
    if (cap_k < d) {
        KahanSum bound;
        for (std::size_t k = cap_k + 1; k <= d; ++k)
            bound.add(std::pow(2.0, static_cast<double>(k) + 1.0 - static_cast<double>(d)) *
                      binom(d, k) * pow_of_uint(recipe.alpha * max_f1f2, k));
        out.truncation_bound = bound.value();
    }
    return out;
}

ColoringSearch min_coloring(const FormSystem& sys, double cap) {
    const GroupSpec& g = sys.group();
    if (!g.order_fits() || g.order() > 25)
        throw EnumCapExceeded("coloring search needs |G| <= 25");
    const auto n = static_cast<std::uint32_t>(g.order());

    // count, per subset mask, the tuples whose instance fits inside it; a
    // subset-sum transform then answers every coloring at once
    std::vector<std::uint32_t> cnt(std::size_t{1} << n, 0);
    for_each_instance(sys, cap, [&](std::span<const std::uint64_t> vals) {
        std::uint32_t mask = 0;
        for (std::uint64_t v : vals) mask |= std::uint32_t{1} << v;
        ++cnt[mask];
    });
    for (std::uint32_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < cnt.size(); ++a)
            if (a & (std::size_t{1} << b)) cnt[a] += cnt[a ^ (std::size_t{1} << b)];

    const double total = pow_of_uint(static_cast<double>(g.order()), sys.var_count());
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    ColoringSearch out;
    out.threshold = commonness_threshold(sys.form_count());
    double best = -1.0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t a = 0;; ++a) {
        const double v =
            (static_cast<double>(cnt[a]) + static_cast<double>(cnt[full ^ a])) / total;
        if (best < 0.0 || v < best) {
            best = v;
            best_mask = a;
        }
        if (a == full) break;
    }
    out.best_mask = best_mask;
    out.value = best;
    for (std::uint32_t e = 0; e < n; ++e)
        if (best_mask & (std::uint32_t{1} << e)) out.best_set.push_back(e);
    out.common_at_this_size = best >= out.threshold - 1e-12;
    return out;
}

} // namespace mc
