#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "multicommon/counterexamples.hpp"
#include "multicommon/recipe_io.hpp"
#include "multicommon/rng.hpp"

using namespace mc;

namespace {
const std::vector<std::vector<std::int64_t>> kAP4{{1, 0}, {1, 1}, {1, 2}, {1, 3}};
}

TEST_CASE("directional tables for the small primes") {
    const auto d5 = directional_function(5);
    CHECK(d5.table.values() == std::vector<double>{-1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(d5.spec.M == 4);
    CHECK(d5.spec.b == 2.0);

    const auto d7 = directional_function(7);
    CHECK(d7.table[0] == doctest::Approx(-1.0));
    for (std::uint64_t x = 1; x < 7; ++x) CHECK(d7.table[x] == doctest::Approx(0.5));

    const auto d11 = directional_function(11);
    CHECK(d11.table[0] == doctest::Approx(-1.0));
    CHECK(d11.table[3] == doctest::Approx(-1.0));
    CHECK(d11.table[1] == doctest::Approx(1.0));
    CHECK(d11.table[7] == doctest::Approx(0.0));

    CHECK_THROWS_AS(directional_function(4), std::invalid_argument);
    CHECK_THROWS_AS(directional_function(3), std::invalid_argument);

    // the AP part stays inside [0, M] with difference at most 5
    for (std::int64_t p : {5, 7, 11, 13, 17, 199, 211, 499}) {
        const auto d = directional_function(p);
        CHECK(d.spec.A.diff <= 5);
        for (std::int64_t m : d.spec.A.members()) {
            CHECK(m >= 0);
            CHECK(m <= d.spec.M);
        }
    }
}

TEST_CASE("directional multiplicity at p=5 is -7/25") {
    const auto d5 = directional_function(5);
    const FormSystem sys(kAP4, GroupSpec({5}));
    CHECK(multiplicity_direct(sys, d5.table) == doctest::Approx(-7.0 / 25.0).epsilon(1e-12));
}

TEST_CASE("directional bound holds on a spot-check of primes") {
    const double bound = -2.0 / (199.0 * 199.0);
    for (std::int64_t p : {5, 7, 11, 13, 17, 23, 101, 199, 211, 503}) {
        const auto d = directional_function(p);
        const FormSystem sys(kAP4, GroupSpec({p}));
        CHECK(multiplicity_direct(sys, d.table) <= bound);
    }
}

TEST_CASE("muting atoms and their pointwise values") {
    const auto atoms = muting_atoms(Mode::vector_space, 5, 1.0);
    REQUIRE(atoms.size() == 4);
    // at 0 every phase vanishes: sum of weights = 2 beta + 2
    double at0 = 0.0;
    for (const auto& a : atoms) at0 += a.weight;
    CHECK(at0 == doctest::Approx(4.0));

    // vector mode, x = 1: 2 cos(4 pi/5) + 2 cos(2 pi/5) = -1
    double at1 = 0.0;
    for (const auto& a : atoms)
        at1 += a.weight * std::cos(2.0 * M_PI * static_cast<double>(mod_norm(a.lambda * 2, 5)) / 5.0);
    CHECK(at1 == doctest::Approx(-1.0));

    // cyclic mode scales the linear term by floor(sqrt(p))
    const auto cyc = muting_atoms(Mode::cyclic, 11, 0.5);
    for (const auto& a : cyc) CHECK(a.q == 3);

    CHECK_THROWS_AS(muting_atoms(Mode::vector_space, 5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(muting_atoms(Mode::vector_space, 5, 1.5), std::invalid_argument);
}

TEST_CASE("assemble: range, special values, realness") {
    CounterexampleRecipe r = make_recipe(Mode::vector_space, 5, 1, 0.125, 1.0);
    const auto table = assemble(r);
    CHECK(table.size() == 25);
    // at (0,0): 1/2 + (1/8) * (-1) * 4 = 0
    CHECK(table[0] == doctest::Approx(0.0));
    for (std::uint64_t i = 0; i < table.size(); ++i) {
        CHECK(table[i] >= 0.0);
        CHECK(table[i] <= 1.0);
    }

    CounterexampleRecipe zero = make_recipe(Mode::vector_space, 5, 2, 0.0, 0.5);
    const auto flat = assemble(zero);
    for (std::uint64_t i = 0; i < flat.size(); ++i) CHECK(flat[i] == 0.5);

    CounterexampleRecipe cyc = make_recipe(Mode::cyclic, 211, 0, 0.05, 0.5);
    const auto ct = assemble(cyc);
    CHECK(ct.size() == 211);
}

TEST_CASE("proportional construction: exact pair value 1/2 - 4 alpha^2") {
    for (std::int64_t p : {5, 7, 11, 13}) {
        const FormSystem sys({{1}, {-1}}, GroupSpec({p}));
        for (double alpha : {0.0, 0.1, 0.25}) {
            const auto f = proportional_counterexample(sys, alpha);
            const double pair = monochromatic_pair(sys, f);
            CHECK(std::abs(pair - (0.5 - 4.0 * alpha * alpha)) < 1e-9);
        }
    }
}

TEST_CASE("proportional construction: general ratio case dips below threshold") {
    const FormSystem sys({{1}, {2}}, GroupSpec({5}));
    const auto f = proportional_counterexample(sys, 0.05);
    CHECK(monochromatic_pair(sys, f) < 0.5);

    const FormSystem indep({{1, 0}, {0, 1}}, GroupSpec({5}));
    CHECK_THROWS_AS(proportional_counterexample(indep, 0.05), NoConstruction);
    CHECK_THROWS_AS(proportional_counterexample(sys, 0.2), std::invalid_argument);
}

TEST_CASE("tuner finds an uncommonness margin for the plain 4-AP, p=5") {
    TuneGrid grid;
    grid.betas = {0.5, 0.25};
    grid.alpha_fractions = {0.0, 0.5, 1.0};
    grid.n_candidates = {20, 40};
    const auto res = tune_parameters(kAP4, Mode::vector_space, 5, grid);
    CHECK(res.route == TuneResult::Route::muting);
    CHECK(res.found());
    CHECK(res.margin > 1e-6);
    CHECK(res.n <= 100);
    // the alpha = 0 rows sit exactly at the threshold
    bool saw_zero = false;
    for (const auto& row : res.rows)
        if (row.alpha == 0.0) {
            saw_zero = true;
            CHECK(row.margin == 0.0);
        }
    CHECK(saw_zero);
}

TEST_CASE("tuner routes to the proportional construction") {
    const auto res = tune_parameters({{1}, {-1}}, Mode::vector_space, 5, TuneGrid{});
    CHECK(res.route == TuneResult::Route::proportional);
    CHECK(res.found());
    CHECK(res.margin == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(res.alpha == doctest::Approx(0.25));

    CHECK_THROWS_AS(tune_parameters({{1, 0}, {0, 1}}, Mode::vector_space, 5, TuneGrid{}),
                    NoConstruction);
}

TEST_CASE("recipe JSON round-trip reproduces the margin") {
    TuneGrid grid;
    grid.betas = {0.5};
    grid.alpha_fractions = {1.0};
    grid.n_candidates = {30};
    const auto res = tune_parameters(kAP4, Mode::vector_space, 5, grid);
    REQUIRE(res.recipe.has_value());
    const std::string text = recipe_to_json(*res.recipe);
    const auto back = recipe_from_json(text);
    const FormSystem sys(kAP4, back.target_group());
    const auto sv = multiplicity_structured(sys, back, 4);
    CHECK(std::abs(sv.value - res.value) < 1e-12);
}

TEST_CASE("rounding: fixed point on 0/1 tables") {
    const GroupSpec z5({5});
    const FormSystem sys(kAP4, z5);
    const DensityTable ind(z5, {1.0, 0.0, 1.0, 0.0, 0.0}, 0.0, 1.0);
    const auto rr = round_to_set(ind, sys);
    CHECK(rr.steps == 0);
    CHECK(rr.set == std::vector<std::uint64_t>{0, 2});
    CHECK(rr.pair_after == doctest::Approx(rr.pair_before));
    CHECK(rr.certificate_ok);
}

TEST_CASE("rounding: certificate and monotone descent on random tables") {
    const GroupSpec z101({101});
    const FormSystem sys(kAP4, z101);
    for (int t = 0; t < 10; ++t) {
        Rng rng(100 + t);
        std::vector<double> vals(101);
        for (auto& v : vals) v = rng.unit();
        const auto rr = round_to_set(DensityTable(z101, vals, 0.0, 1.0), sys);
        CHECK(rr.psi_monotone);
        CHECK(rr.psi_consistent);
        CHECK(rr.certificate_ok);
        CHECK(rr.slack == doctest::Approx(6.0 / 101.0));
    }

    // constant 1/2 rounds to something at most 1/8 + 6/101
    const auto rr = round_to_set(DensityTable::constant(z101, 0.5), sys);
    CHECK(rr.pair_after <= 1.0 / 8.0 + 6.0 / 101.0 + 1e-9);
}

TEST_CASE("rounding rejects indistinct forms") {
    const GroupSpec z5({5});
    const FormSystem dup({{1, 0}, {1, 0}, {1, 1}}, z5);
    CHECK_THROWS_AS(round_to_set(DensityTable::constant(z5, 0.5), dup), std::invalid_argument);
}
