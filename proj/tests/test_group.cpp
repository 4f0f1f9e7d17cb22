#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "multicommon/group.hpp"
#include "multicommon/kahan.hpp"
#include "multicommon/rng.hpp"

using namespace mc;

TEST_CASE("group construction and flags") {
    const GroupSpec z5({5});
    CHECK(z5.order() == 5);
    CHECK(z5.vector_mode());
    CHECK(z5.prime() == 5);
    CHECK(z5.dimension() == 1);

    const GroupSpec f53({5, 5, 5});
    CHECK(f53.order() == 125);
    CHECK(f53.vector_mode());

    const GroupSpec z6({2, 3});
    CHECK(z6.order() == 6);
    CHECK_FALSE(z6.vector_mode());
    CHECK(z6.exponent() == 6);

    CHECK_THROWS_AS(GroupSpec({1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(GroupSpec({}), std::invalid_argument);

    // huge groups are constructible, enumeration refuses
    const GroupSpec big(std::vector<std::int64_t>(41, 5));
    CHECK_FALSE(big.order_fits());
    CHECK_FALSE(big.enumerable(1));
    CHECK(big.vector_mode());
}

TEST_CASE("coords/index roundtrip and arithmetic") {
    const GroupSpec g({4, 6, 5});
    for (std::uint64_t i = 0; i < g.order(); ++i)
        CHECK(g.index_of(g.coords_of(i)) == i);

    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t a = rng.below(g.order());
        const std::uint64_t b = rng.below(g.order());
        const auto ca = g.coords_of(a);
        const auto cb = g.coords_of(b);
        const auto cs = g.coords_of(g.add(a, b));
        for (std::size_t j = 0; j < g.rank(); ++j)
            CHECK(cs[j] == (ca[j] + cb[j]) % g.moduli()[j]);
        CHECK(g.add(a, g.neg(a)) == 0);
        CHECK(g.scale(3, a) == g.add(a, g.add(a, a)));
    }
}

TEST_CASE("density table validation") {
    const GroupSpec g({5});
    CHECK_THROWS_AS(DensityTable(g, {0.0, 0.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DensityTable(g, {0.0, 2.0, 0.0, 0.0, 0.0}, 0.0, 1.0), std::invalid_argument);
    const DensityTable f(g, {0.0, 0.25, 0.5, 0.75, 1.0}, 0.0, 1.0);
    CHECK(f.mean() == doctest::Approx(0.5));
}

TEST_CASE("characters: trivial, basic value, orthogonality") {
    const GroupSpec z5({5});
    const auto zero = element_at(z5, 0);
    for (std::uint64_t x = 0; x < 5; ++x)
        CHECK(std::abs(character_value(z5, zero, element_at(z5, x)) - 1.0) < 1e-15);

    const auto w = character_value(z5, 1, 1);
    CHECK(w.real() == doctest::Approx(std::cos(2.0 * M_PI / 5)));
    CHECK(w.imag() == doctest::Approx(std::sin(2.0 * M_PI / 5)));

    // sum over all characters detects zero, on Z_7 and on mixed groups
    for (const GroupSpec& g : {GroupSpec({7}), GroupSpec({2, 3}), GroupSpec({4, 6})}) {
        for (std::uint64_t x = 0; x < g.order(); ++x) {
            KahanComplex s;
            for (std::uint64_t fr = 0; fr < g.order(); ++fr) s.add(character_value(g, fr, x));
            const double expect = x == 0 ? static_cast<double>(g.order()) : 0.0;
            CHECK(std::abs(s.value() - expect) < 1e-9 * static_cast<double>(g.order()));
        }
    }
}

TEST_CASE("fourier transform basics") {
    const GroupSpec z2({2});
    const auto fh = fourier_transform(DensityTable(z2, {1.0, -1.0}, -1.0, 1.0));
    CHECK(std::abs(fh[0]) < 1e-15);
    CHECK(std::abs(fh[1] - 1.0) < 1e-15);

    const GroupSpec g({3, 4});
    const auto ones = fourier_transform(DensityTable::constant(g, 1.0));
    CHECK(std::abs(ones[0] - 1.0) < 1e-12);
    for (std::uint64_t fr = 1; fr < g.order(); ++fr) CHECK(std::abs(ones[fr]) < 1e-12);

    const auto zeros = fourier_transform(DensityTable::constant(g, 0.0));
    for (std::uint64_t fr = 0; fr < g.order(); ++fr) CHECK(std::abs(zeros[fr]) == 0.0);

    // mean at the trivial character, conjugate symmetry for real tables
    Rng rng(11);
    std::vector<double> vals(g.order());
    for (auto& v : vals) v = rng.unit();
    const DensityTable f(g, vals, 0.0, 1.0);
    const auto fhat = fourier_transform(f);
    CHECK(std::abs(fhat[0] - f.mean()) < 1e-12);
    for (std::uint64_t fr = 0; fr < g.order(); ++fr) {
        const std::uint64_t inv = g.neg(fr);
        CHECK(std::abs(fhat[inv] - std::conj(fhat[fr])) < 1e-12);
    }
}

TEST_CASE("plancherel on assorted groups") {
    for (const GroupSpec& g :
         {GroupSpec({97}), GroupSpec({10, 10}), GroupSpec({3, 5, 7}), GroupSpec({2, 2, 2, 2})}) {
        Rng rng(g.order());
        std::vector<double> v1(g.order()), v2(g.order());
        for (auto& v : v1) v = 2.0 * rng.unit() - 1.0;
        for (auto& v : v2) v = 2.0 * rng.unit() - 1.0;
        const auto f1 = DensityTable(g, v1, -1.0, 1.0);
        const auto f2 = DensityTable(g, v2, -1.0, 1.0);
        const auto h1 = fourier_transform(f1);
        const auto h2 = fourier_transform(f2);
        KahanComplex lhs;
        for (std::uint64_t fr = 0; fr < g.order(); ++fr) lhs.add(h1[fr] * std::conj(h2[fr]));
        KahanSum rhs;
        for (std::uint64_t x = 0; x < g.order(); ++x) rhs.add(f1[x] * f2[x]);
        CHECK(std::abs(lhs.value() - rhs.value() / static_cast<double>(g.order())) < 1e-9);
    }
}

TEST_CASE("phase averages: trivial, orthogonality, classical value") {
    const GroupSpec f5({5});
    CHECK(std::abs(phase_average(f5, 0, 0, 0) - 1.0) < 1e-15);

    for (std::int64_t p : {5, 7, 11}) {
        const GroupSpec g(std::vector<std::int64_t>(2, p));
        CHECK(std::abs(phase_average(g, 0, 1, 0)) < 1e-12);
    }

    // |E omega^(x^2)| over F_5 is exactly 5^(-1/2)
    CHECK(std::abs(phase_average(f5, 1, 0, 0)) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("factorized phase average matches the direct oracle (n <= 3)") {
    for (std::int64_t p : {5, 7}) {
        for (std::size_t n : {1u, 2u, 3u}) {
            const GroupSpec g(std::vector<std::int64_t>(n, p));
            Rng rng(static_cast<std::uint64_t>(p) * 100 + n);
            for (int t = 0; t < 10; ++t) {
                const std::int64_t a = rng.range(0, p - 1);
                const std::int64_t b0 = rng.range(0, p - 1);
                const std::int64_t c = rng.range(0, p - 1);
                CHECK(std::abs(phase_average(g, a, b0, c) - phase_average_direct(g, a, b0, c)) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("gauss bound on a small grid") {
    for (std::int64_t p : {5, 7}) {
        for (std::size_t n : {1u, 2u}) {
            const GroupSpec g(std::vector<std::int64_t>(n, p));
            const double bound = 1.0 / std::sqrt(g.order_approx());
            for (std::int64_t a = 0; a < p; ++a)
                for (std::int64_t b0 = 0; b0 < p; ++b0) {
                    if (a == 0 && b0 == 0) continue;
                    CHECK(std::abs(phase_average(g, a, b0, 3)) <= bound + 1e-9);
                }
        }
    }
}

TEST_CASE("mixed phase average bound, p=5 n=1 full grid") {
    const GroupSpec g({5});
    const double bound = 1.0 / 5.0 + 1.0 / std::sqrt(5.0);
    for (std::int64_t a = 0; a < 5; ++a)
        for (std::int64_t d = 0; d < 5; ++d)
            for (std::int64_t b0 = 0; b0 < 5; ++b0) {
                if (a == 0 && b0 == 0 && d == 0) continue;
                CHECK(mixed_phase_average(g, a, d, b0, 2) <= bound + 1e-9);
            }
}
