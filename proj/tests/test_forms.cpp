#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "multicommon/forms.hpp"
#include "multicommon/multiplicity.hpp"
#include "multicommon/rng.hpp"

using namespace mc;

namespace {
const std::vector<std::vector<std::int64_t>> kAP4{{1, 0}, {1, 1}, {1, 2}, {1, 3}};
}

TEST_CASE("induce_system evaluation and flags") {
    const FormSystem sys(kAP4, GroupSpec({5}));
    // w = (0, 1) -> instance (0, 1, 2, 3)
    const std::uint64_t w[2] = {0, 1};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(sys.eval_index(i, std::span<const std::uint64_t>(w, 2)) == i);
    CHECK(sys.pairwise_distinct());
    CHECK(sys.injective());
    CHECK(sys.rank_mod_p() == 2);

    // scalar forms act per coordinate on F_3^2
    const FormSystem scal({{1}, {2}}, GroupSpec({3, 3}));
    const GroupSpec g({3, 3});
    for (std::uint64_t e = 0; e < 9; ++e) {
        const std::uint64_t we[1] = {e};
        CHECK(scal.eval_index(0, std::span<const std::uint64_t>(we, 1)) == e);
        CHECK(scal.eval_index(1, std::span<const std::uint64_t>(we, 1)) == g.scale(2, e));
    }

    CHECK_THROWS_AS(FormSystem({{1, 0}, {1}}, GroupSpec({5})), std::invalid_argument);
}

TEST_CASE("detect_four_ap") {
    CHECK(detect_four_ap(FormSystem(kAP4, GroupSpec({5})))->order ==
          std::array<std::size_t, 4>{0, 1, 2, 3});

    // reordered APs hide in (x, y, 2x-y, -x+2y): both (2x-y, x, y, -x+2y)
    // and, mod 5 only, (x, -x+2y, 2x-y, y) work; the lexicographically first
    // canonical ordering wins
    const FormSystem hidden({{1, 0}, {0, 1}, {2, -1}, {-1, 2}}, GroupSpec({5}));
    const auto found = detect_four_ap(hidden);
    REQUIRE(found.has_value());
    CHECK(found->order == std::array<std::size_t, 4>{0, 3, 2, 1});
    const auto& hrows = hidden.rows_mod_p();
    for (int step = 0; step < 2; ++step)
        for (std::size_t col = 0; col < 2; ++col)
            CHECK(mod_norm(2 * hrows[found->order[step + 1]][col] -
                               hrows[found->order[step]][col] -
                               hrows[found->order[step + 2]][col],
                           5) == 0);

    // over F_7 the extra mod-5 coincidence disappears and the textbook
    // ordering (3,1,2,4) is the unique one up to reversal
    const auto found7 = detect_four_ap(FormSystem({{1, 0}, {0, 1}, {2, -1}, {-1, 2}},
                                                  GroupSpec({7})));
    REQUIRE(found7.has_value());
    CHECK(found7->order == std::array<std::size_t, 4>{2, 0, 1, 3});

    CHECK_FALSE(detect_four_ap(FormSystem({{1, 0}, {0, 1}, {1, 1}, {1, 2}}, GroupSpec({5}))));
    CHECK_FALSE(detect_four_ap(FormSystem({{1, 0}, {1, 1}, {1, 2}}, GroupSpec({5}))));

    // invariant under row permutation
    Rng rng(3);
    std::vector<std::vector<std::int64_t>> rows = kAP4;
    for (int t = 0; t < 10; ++t) {
        for (std::size_t i = rows.size(); i-- > 1;) std::swap(rows[i], rows[rng.below(i + 1)]);
        CHECK(detect_four_ap(FormSystem(rows, GroupSpec({5}))).has_value());
    }
}

TEST_CASE("detect_proportional_pair") {
    const auto neg = detect_proportional_pair(FormSystem({{1, 0}, {-1, 0}}, GroupSpec({5})));
    REQUIRE(neg.has_value());
    CHECK(neg->i == 0);
    CHECK(neg->j == 1);
    CHECK(neg->c == 4);
    CHECK(neg->negation_pair_exists);

    const auto dbl = detect_proportional_pair(FormSystem({{1, 0}, {2, 0}}, GroupSpec({5})));
    REQUIRE(dbl.has_value());
    CHECK(dbl->c == 2);
    CHECK_FALSE(dbl->negation_pair_exists);

    CHECK_FALSE(detect_proportional_pair(FormSystem({{1, 0}, {0, 1}}, GroupSpec({5}))));
}

TEST_CASE("c_fraction_bound minimal witnesses") {
    const auto zero = c_fraction_bound(0, 13, 10);
    REQUIRE(zero.has_value());
    CHECK(zero->y == 0);
    CHECK(zero->z == 1);
    CHECK(zero->bound == 2);

    const auto one = c_fraction_bound(1, 13, 10);
    REQUIRE(one.has_value());
    CHECK(one->y == 1);
    CHECK(one->z == 1);
    CHECK(one->bound == 2);

    const auto nine = c_fraction_bound(9, 13, 10);
    REQUIRE(nine.has_value());
    CHECK(nine->y == 1);
    CHECK(nine->z == 3);
    CHECK(nine->bound == 4);
    CHECK(nine->valid());

    // no witness below the cap
    CHECK_FALSE(c_fraction_bound(5, 101, 3).has_value());
}

TEST_CASE("c-fraction closure properties") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const std::int64_t p = 101;
        const std::int64_t y1 = (rng.below(2) ? 1 : -1) * rng.range(1, 3), z1 = rng.range(1, 3);
        const std::int64_t y2 = (rng.below(2) ? 1 : -1) * rng.range(1, 3), z2 = rng.range(1, 3);
        const std::int64_t c1 = std::max(std::abs(y1), z1) + 1;
        const std::int64_t c2 = std::max(std::abs(y2), z2) + 1;
        const std::int64_t x1 = mod_norm(y1 * mod_inverse(z1, p), p);
        const std::int64_t x2 = mod_norm(y2 * mod_inverse(z2, p), p);

        CHECK(c_fraction_bound(mod_norm(x1 * x2, p), p, c1 * c2).has_value());
        CHECK(c_fraction_bound(mod_norm(x1 + x2, p), p, 2 * c1 * c2).has_value());
        CHECK(c_fraction_bound(mod_norm(-x1, p), p, c1).has_value());
        CHECK(c_fraction_bound(mod_inverse(x1, p), p, c1).has_value());
    }
}

TEST_CASE("split_ap worked example p=13") {
    // residues of {0, 9, 18, 27} are {0, 9, 5, 1}
    const APDescriptor ap{0, 9, 4, 13};
    const FractionWitness w{9, 1, 3, 13, 4};
    REQUIRE(w.valid());
    const auto pieces = split_ap(ap, w);
    CHECK(pieces.size() == 3);
    CHECK(pieces.size() <= 3 * 4);
    std::multiset<std::int64_t> members;
    for (const auto& piece : pieces) {
        CHECK(piece.diff == 1);
        for (std::int64_t m : piece.members()) members.insert(m);
    }
    CHECK(members == std::multiset<std::int64_t>{0, 1, 5, 9});
}

TEST_CASE("split_ap with unit difference wraps at most once") {
    const APDescriptor ap{8, 1, 11, 13};
    const FractionWitness w{1, 1, 1, 13, 2};
    const auto pieces = split_ap(ap, w);
    CHECK(pieces.size() <= 2);
    std::set<std::int64_t> members;
    for (const auto& piece : pieces)
        for (std::int64_t m : piece.members()) {
            CHECK(m >= 0);
            CHECK(m <= 12);
            members.insert(m);
        }
    std::set<std::int64_t> expect;
    for (std::int64_t v : ap.members()) expect.insert(v);
    CHECK(members == expect);
}

TEST_CASE("reparametrize the 4-AP on pivots {1,2}") {
    const FormSystem sys(kAP4, GroupSpec({5}));
    const std::size_t pivots[2] = {0, 1};
    const auto rep = reparametrize(sys, std::span<const std::size_t>(pivots, 2));
    const std::vector<std::vector<std::int64_t>> expect{{1, 0}, {0, 1}, {-1, 2}, {-2, 3}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(mod_norm(rep.system.matrix()[i][j] - expect[i][j], 5) == 0);

    // image equality over F_5^2 by enumeration
    auto image = [](const FormSystem& s) {
        std::set<std::vector<std::uint64_t>> out;
        for_each_instance(s, kDefaultEnumCap, [&](std::span<const std::uint64_t> vals) {
            out.insert(std::vector<std::uint64_t>(vals.begin(), vals.end()));
        });
        return out;
    };
    CHECK(image(sys) == image(rep.system));
}

TEST_CASE("reparametrize coordinate system is fixed") {
    const FormSystem sys({{1, 0}, {0, 1}}, GroupSpec({7}));
    const std::size_t pivots[2] = {0, 1};
    const auto rep = reparametrize(sys, std::span<const std::size_t>(pivots, 2));
    CHECK(rep.system.matrix() == sys.matrix());
}

TEST_CASE("reparametrize rejects dependent pivots") {
    const FormSystem sys({{1, 0}, {2, 0}}, GroupSpec({5}));
    const std::size_t pivots[2] = {0, 1};
    CHECK_THROWS_AS(reparametrize(sys, std::span<const std::size_t>(pivots, 2)),
                    std::invalid_argument);
}

TEST_CASE("subset basis rewrites rows faithfully") {
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        const std::int64_t p = 7;
        const std::size_t k = 1 + rng.below(4), r = 1 + rng.below(4);
        std::vector<std::vector<std::int64_t>> rows(k, std::vector<std::int64_t>(r));
        for (auto& row : rows)
            for (auto& x : row) x = rng.range(-3, 3);
        const auto sb = subset_on_own_basis(rows, p);
        CHECK(sb.span_dim == rank_mod_p(rows, p));
        // reconstruct each row from the basis rows it names
        std::vector<std::size_t> basis_rows;
        for (std::size_t i = 0; i < k; ++i) {
            bool unit = false;
            for (std::size_t b = 0; b < sb.span_dim; ++b)
                if (sb.coeffs[i][b] == 1 && basis_rows.size() == b) {
                    bool clean = true;
                    for (std::size_t b2 = 0; b2 < sb.span_dim; ++b2)
                        if (b2 != b && sb.coeffs[i][b2] != 0) clean = false;
                    if (clean) unit = true;
                }
            if (unit && basis_rows.size() < sb.span_dim) basis_rows.push_back(i);
        }
        REQUIRE(basis_rows.size() == sb.span_dim);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t col = 0; col < r; ++col) {
                std::int64_t acc = 0;
                for (std::size_t b = 0; b < sb.span_dim; ++b)
                    acc += sb.coeffs[i][b] * rows[basis_rows[b]][col];
                CHECK(mod_norm(acc - rows[i][col], p) == 0);
            }
    }
}
