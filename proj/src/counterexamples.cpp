#include "multicommon/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
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

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

Directional directional_function(std::int64_t p) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("directional table needs a prime p >= 5");

    DirectionalSpec spec;
    spec.p = p;
    if (p == 5) {
        spec.M = 4;
        spec.a = 1.0;
        spec.b = 2.0;
        spec.A = APDescriptor{0, 1, 1, std::nullopt};
    } else if (p == 7) {
        spec.M = 6;
        spec.a = 0.5;
        spec.b = 1.5;
        spec.A = APDescriptor{0, 1, 1, std::nullopt};
    } else if (p == 11) {
        spec.M = 6;
        spec.a = 1.0;
        spec.b = 2.0;
        spec.A = APDescriptor{0, 3, 2, std::nullopt};
    } else if (p == 13 || p <= 199) {
        spec.M = 7;
        spec.a = 1.0;
        spec.b = 2.0;
        spec.A = APDescriptor{0, 5, 2, std::nullopt};
    } else {
        spec.M = (p - 1) / 2;
        spec.a = 1.0;
        spec.b = 2.0;
        spec.A = APDescriptor{0, 5, spec.M / 5 + 1, std::nullopt};
    }

    std::vector<double> vals(static_cast<std::size_t>(p), 0.0);
    for (std::int64_t j = 0; j <= spec.M; ++j)
        vals[static_cast<std::size_t>(mod_norm(j, p))] += spec.a;
    for (std::int64_t m : spec.A.members())
        vals[static_cast<std::size_t>(mod_norm(m, p))] -= spec.b;

    return Directional{DensityTable(GroupSpec({p}), std::move(vals), -1.0, 1.0), spec};
}

std::vector<PhaseAtom> muting_atoms(Mode mode, std::int64_t p, double beta) {
    if (beta <= 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in (0,1]");
    const std::int64_t q = mode == Mode::cyclic ? isqrt(p) : 1;
    return {PhaseAtom{beta, 1, q}, PhaseAtom{beta, -1, q}, PhaseAtom{1.0, 3, q},
            PhaseAtom{1.0, -3, q}};
}

CounterexampleRecipe make_recipe(Mode mode, std::int64_t p, std::size_t n, double alpha,
                                 double beta) {
    CounterexampleRecipe r{mode, p, n, directional_function(p).table,
                           muting_atoms(mode, p, beta), alpha, beta};
    r.validate();
    return r;
}

DensityTable assemble(const CounterexampleRecipe& recipe, double cap) {
    recipe.validate();
    const GroupSpec g = recipe.target_group();
    if (!g.order_fits() || !g.enumerable(1, cap))
        throw EnumCapExceeded("target group too large to materialize");
    const std::int64_t p = recipe.p;
    const std::uint64_t order = g.order();

    // real muting value per accumulated scalar phase T = sum_j (x_j^2 + q x_j)
    const std::int64_t q = recipe.atoms[0].q;
    std::vector<double> f2_of_t(static_cast<std::size_t>(p), 0.0);
    for (std::int64_t t = 0; t < p; ++t) {
        double v = 0.0;
        for (const auto& a : recipe.atoms) {
            const std::int64_t k = mod_norm(a.lambda * t, p);
            v += a.weight *
                 std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p));
        }
        f2_of_t[static_cast<std::size_t>(t)] = v;
    }

    std::vector<double> vals(order);
    for (std::uint64_t idx = 0; idx < order; ++idx) {
        const auto coords = g.coords_of(idx);
        double f1v, f2v;
        if (recipe.mode == Mode::vector_space) {
            f1v = recipe.directional[static_cast<std::uint64_t>(coords[0])];
            std::int64_t t = 0;
            for (std::size_t j = 1; j < coords.size(); ++j)
                t = mod_norm(t + coords[j] * coords[j] + q * coords[j], p);
            f2v = f2_of_t[static_cast<std::size_t>(t)];
        } else {
            const std::int64_t x = coords[0];
            f1v = recipe.directional[static_cast<std::uint64_t>(x)];
            f2v = f2_of_t[static_cast<std::size_t>(mod_norm(x * x + q * x, p))];
        }
        double v = 0.5 + recipe.alpha * f1v * f2v;
        if (v < 0.0 || v > 1.0) {
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw std::invalid_argument("assembled value escapes [0,1]; alpha too large");
            v = std::clamp(v, 0.0, 1.0);
        }
        vals[idx] = v;
    }
    return DensityTable(g, std::move(vals), 0.0, 1.0);
}

namespace {

// f2 atoms collapse per scalar phase; the cosine tables for the proportional
// constructions are built the same way
std::vector<double> sine_direction(std::int64_t p) {
    std::vector<double> v(static_cast<std::size_t>(p));
    for (std::int64_t t = 0; t < p; ++t)
        v[static_cast<std::size_t>(t)] =
            -2.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(p));
    return v;
}

std::vector<double> cosine_direction(std::int64_t p, std::int64_t c) {
    std::vector<double> v(static_cast<std::size_t>(p));
    for (std::int64_t t = 0; t < p; ++t) {
        const double base = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(p);
        const double ct = 2.0 * std::numbers::pi *
                          static_cast<double>(mod_norm(c * t, p)) / static_cast<double>(p);
        v[static_cast<std::size_t>(t)] = 2.0 * std::cos(base) - 2.0 * std::cos(ct);
    }
    return v;
}

} // namespace

DensityTable proportional_counterexample(const FormSystem& system, double alpha, double cap) {
    if (!system.group().vector_mode())
        throw std::invalid_argument("proportional construction requires vector mode");
    const std::int64_t p = system.group().prime();
    if (p == 2) throw NoConstruction("proportional construction needs p != 2");
    const auto pair = detect_proportional_pair(system);
    if (!pair) throw NoConstruction("system has no proportional pair of forms");

    const GroupSpec& g = system.group();
    if (!g.order_fits() || !g.enumerable(1, cap))
        throw EnumCapExceeded("group too large to materialize");

    std::vector<double> dir;
    double amax;
    if (pair->negation_pair_exists) {
        dir = sine_direction(p);
        amax = 0.25;
    } else {
        dir = cosine_direction(p, pair->c);
        amax = 0.125;
    }
    if (alpha < 0.0 || alpha > amax * (1.0 + 1e-12))
        throw std::invalid_argument("alpha out of range for the proportional construction");

    const std::uint64_t order = g.order();
    std::vector<double> vals(order);
    for (std::uint64_t idx = 0; idx < order; ++idx) {
        const auto coords = g.coords_of(idx);
        std::int64_t t = 0;
        for (std::int64_t cdd : coords) t = mod_norm(t + cdd, p);
        double v = 0.5 + alpha * dir[static_cast<std::size_t>(t)];
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw std::invalid_argument("proportional value escapes [0,1]");
        vals[idx] = std::clamp(v, 0.0, 1.0);
    }
    return DensityTable(g, std::move(vals), 0.0, 1.0);
}

TuneResult tune_parameters(const std::vector<std::vector<std::int64_t>>& matrix, Mode mode,
                           std::int64_t p, const TuneGrid& grid) {
    const FormSystem probe(matrix, GroupSpec({p}));
    const std::size_t d = probe.form_count();
    const double threshold = commonness_threshold(d);

    TuneResult out;
    out.p = p;
    out.threshold = threshold;
    out.margin = -1e300;

    if (detect_four_ap(probe)) {
        out.route = TuneResult::Route::muting;
        std::vector<std::size_t> ns;
        if (mode == Mode::cyclic)
            ns = {0};
        else
            ns = grid.n_candidates.empty() ? std::vector<std::size_t>{10, 20, 40, 80}
                                           : grid.n_candidates;
        for (std::size_t n : ns) {
            const GroupSpec target = mode == Mode::cyclic
                                         ? GroupSpec({p})
                                         : GroupSpec(std::vector<std::int64_t>(n + 1, p));
            const FormSystem sys(matrix, target);
            for (double beta : grid.betas) {
                CounterexampleRecipe r = make_recipe(mode, p, n, 0.0, beta);
                const double acap = r.alpha_cap();
                for (double frac : grid.alpha_fractions) {
                    r.alpha = frac * acap;
                    const std::size_t cap_k =
                        grid.subset_cap == static_cast<std::size_t>(-1) ? d : grid.subset_cap;
                    const StructuredValue sv =
                        multiplicity_structured(sys, r, cap_k, grid.enum_cap);
                    const double margin = threshold - sv.value;
                    out.rows.push_back(
                        TuneRow{p, n, r.alpha, beta, sv.value, threshold, margin});
                    if (margin > out.margin) {
                        out.margin = margin;
                        out.alpha = r.alpha;
                        out.beta = beta;
                        out.n = n;
                        out.value = sv.value;
                        out.truncation_bound = sv.truncation_bound;
                        out.recipe = r;
                    }
                }
            }
        }
        return out;
    }

    if (detect_proportional_pair(probe)) {
        out.route = TuneResult::Route::proportional;
        // the pair value of this construction does not depend on n, so the
        // smallest group already certifies every n >= 1
        const FormSystem sys(matrix, GroupSpec({p}));
        const auto pair = detect_proportional_pair(sys);
        const double amax = pair->negation_pair_exists ? 0.25 : 0.125;
        for (double frac : grid.alpha_fractions) {
            const double alpha = frac * amax;
            const DensityTable f = proportional_counterexample(sys, alpha, grid.enum_cap);
            const double value = monochromatic_pair(sys, f, grid.enum_cap);
            const double margin = threshold - value;
            out.rows.push_back(TuneRow{p, 1, alpha, 0.0, value, threshold, margin});
            if (margin > out.margin) {
                out.margin = margin;
                out.alpha = alpha;
                out.beta = 0.0;
                out.n = 1;
                out.value = value;
            }
        }
        return out;
    }

    throw NoConstruction("no construction applicable: system has neither a 4-AP nor a proportional pair");
}

RoundingResult round_to_set(const DensityTable& f, const FormSystem& system, double cap) {
    if (!system.group().vector_mode())
        throw std::invalid_argument("rounding requires vector mode");
    if (!system.pairwise_distinct())
        throw std::invalid_argument("rounding requires pairwise distinct forms");
    if (f.group() != system.group())
        throw std::invalid_argument("function group does not match the system");
    for (double v : f.values())
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("rounding needs values in [0,1]");

    const GroupSpec& g = system.group();
    const std::size_t d = system.form_count();
    const std::uint64_t order = g.order();

    // materialize injective instances once; each point appears at most once
    // per instance, so the objective is affine in any single value
    std::vector<std::uint32_t> inst;
    for_each_instance(system, cap, [&](std::span<const std::uint64_t> vals) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (vals[i] == vals[j]) return;
        for (std::uint64_t v : vals) inst.push_back(static_cast<std::uint32_t>(v));
    });
    const std::size_t n_inj = inst.size() / d;

    std::vector<double> gval(f.values());
    auto psi = [&]() {
        KahanSum s;
        for (std::size_t t = 0; t < n_inj; ++t) {
            double pf = 1.0, pg = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double v = gval[inst[t * d + i]];
                pf *= v;
                pg *= 1.0 - v;
            }
            s.add(pf + pg);
        }
        return s.value();
    };

    RoundingResult out;
    double current_psi = psi();
    out.psi_trace.push_back(current_psi);

    for (std::uint64_t a = 0; a < order; ++a) {
        if (gval[a] == 0.0 || gval[a] == 1.0) continue;
        // linear coefficient of eta -> psi(g with g(a) += eta)
        KahanSum lin;
        for (std::size_t t = 0; t < n_inj; ++t) {
            std::size_t hit = d;
            for (std::size_t i = 0; i < d; ++i)
                if (inst[t * d + i] == a) {
                    hit = i;
                    break;
                }
            if (hit == d) continue;
            double pf = 1.0, pg = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                if (i == hit) continue;
                const double v = gval[inst[t * d + i]];
                pf *= v;
                pg *= 1.0 - v;
            }
            lin.add(pf - pg);
        }
        const double coeff = lin.value();
        // zero coefficient permits either endpoint; ties go to 0
        const double eta = coeff >= 0.0 ? -gval[a] : 1.0 - gval[a];
        gval[a] = coeff >= 0.0 ? 0.0 : 1.0;
        current_psi += eta * coeff;
        if (!out.psi_trace.empty() && current_psi > out.psi_trace.back() + 1e-9)
            out.psi_monotone = false;
        out.psi_trace.push_back(current_psi);
        ++out.steps;
    }

    for (std::uint64_t a = 0; a < order; ++a)
        if (gval[a] == 1.0) out.set.push_back(a);

    // the steps tracked psi incrementally (the objective is affine in each
    // moved value); a direct recount must land on the same number
    out.psi_consistent = std::abs(psi() - current_psi) <=
                         1e-9 * std::max(1.0, std::abs(current_psi));

    const DensityTable rounded(g, gval, 0.0, 1.0);
    out.pair_before = monochromatic_pair(system, f, cap);
    out.pair_after = monochromatic_pair(system, rounded, cap);
    out.slack = static_cast<double>(d * (d - 1) / 2) / static_cast<double>(order);
    out.certificate_ok = out.pair_after <= out.pair_before + out.slack + 1e-9;
    return out;
}

} // namespace mc
