#include "multicommon/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mc {

std::int64_t mod_norm(std::int64_t v, std::int64_t m) {
    v %= m;
    return v < 0 ? v + m : v;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
    a = mod_norm(a, p);
    if (a == 0) throw std::invalid_argument("no inverse of 0");
    // extended Euclid
    std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw std::invalid_argument("not invertible");
    return mod_norm(s0, p);
}

bool FractionWitness::valid() const {
    if (p < 2 || z < 1 || bound < 2) return false;
    if (std::max<std::int64_t>(std::llabs(y), z) + 1 > bound) return false;
    return mod_norm(x * z - y, p) == 0;
}

std::optional<FractionWitness> c_fraction_bound(std::int64_t x, std::int64_t p, std::int64_t cap) {
    if (cap < 2) throw std::invalid_argument("fraction cap must be >= 2");
    std::optional<FractionWitness> best;
    for (std::int64_t z = 1; z < cap; ++z) {
        std::int64_t y = mod_norm(x * z, p);
        if (y > p / 2) y -= p; // least absolute residue
        const std::int64_t bound = std::max<std::int64_t>(std::llabs(y), z) + 1;
        if (bound <= cap && (!best || bound < best->bound)) best = FractionWitness{x, y, z, p, bound};
    }
    return best;
}

std::vector<std::int64_t> APDescriptor::members() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
    for (std::int64_t j = 0; j < length; ++j) {
        const std::int64_t v = start + j * diff;
        out.push_back(modulus ? mod_norm(v, *modulus) : v);
    }
    return out;
}

std::vector<APDescriptor> split_ap(const APDescriptor& ap, const FractionWitness& witness) {
    if (!ap.modulus) throw std::invalid_argument("split_ap needs a modular AP");
    const std::int64_t p = *ap.modulus;
    if (!witness.valid() || witness.p != p) throw std::invalid_argument("invalid fraction witness");
    if (mod_norm(ap.diff, p) == 0) throw std::invalid_argument("AP difference is 0 mod p");
    if (mod_norm(witness.x - ap.diff, p) != 0)
        throw std::invalid_argument("witness does not match the AP difference");
    if (ap.length > p) throw std::invalid_argument("modular AP longer than p");

    const std::int64_t L = ap.length;
    std::vector<APDescriptor> pieces;
    if (L <= 0) return pieces;

    const std::int64_t y = witness.y; // diff * z = y (mod p), y != 0 since diff is a unit
    const std::int64_t z = witness.z;

    // Indices j = i + k*z within one residue class i walk the residues in
    // integer steps of y; cutting the walk at multiples of p gives integer
    // APs inside [0, p-1] with shared difference |y|.
    for (std::int64_t i = 0; i < std::min(z, L); ++i) {
        const std::int64_t count = (L - i + z - 1) / z;
        const std::int64_t base = mod_norm(ap.start + i * ap.diff, p);
        std::int64_t run_start_k = 0;
        auto window = [&](std::int64_t k) {
            const std::int64_t v = base + k * y;
            return v >= 0 ? v / p : -((-v + p - 1) / p); // floor division
        };
        auto flush = [&](std::int64_t k_begin, std::int64_t k_end) {
            const std::int64_t run_len = k_end - k_begin;
            std::int64_t first = mod_norm(base + k_begin * y, p);
            std::int64_t last = mod_norm(base + (k_end - 1) * y, p);
            if (y < 0) std::swap(first, last); // canonical ascending piece
            pieces.push_back(APDescriptor{first, std::llabs(y), run_len, std::nullopt});
        };
        for (std::int64_t k = 1; k < count; ++k) {
            if (window(k) != window(k - 1)) {
                flush(run_start_k, k);
                run_start_k = k;
            }
        }
        flush(run_start_k, count);
    }
    return pieces;
}

FormSystem::FormSystem(std::vector<std::vector<std::int64_t>> matrix, GroupSpec group)
    : matrix_(std::move(matrix)), group_(std::move(group)) {
    if (matrix_.empty()) throw std::invalid_argument("form matrix must be nonempty");
    const std::size_t r = matrix_[0].size();
    if (r == 0) throw std::invalid_argument("form matrix must have at least one column");
    for (const auto& row : matrix_)
        if (row.size() != r) throw std::invalid_argument("ragged form matrix");

    for (const auto& row : matrix_)
        for (std::int64_t v : row) coeff_bound_ = std::max<std::int64_t>(coeff_bound_, std::llabs(v));

    if (group_.vector_mode()) {
        const std::int64_t p = group_.prime();
        rows_mod_p_.reserve(matrix_.size());
        for (const auto& row : matrix_) {
            std::vector<std::int64_t> red(r);
            for (std::size_t k = 0; k < r; ++k) red[k] = mod_norm(row[k], p);
            rows_mod_p_.push_back(std::move(red));
        }
        pairwise_distinct_ = true;
        for (std::size_t i = 0; i < rows_mod_p_.size() && pairwise_distinct_; ++i)
            for (std::size_t j = i + 1; j < rows_mod_p_.size(); ++j)
                if (rows_mod_p_[i] == rows_mod_p_[j]) {
                    pairwise_distinct_ = false;
                    break;
                }
        rank_mod_p_ = mc::rank_mod_p(rows_mod_p_, p);
        vector_flags_valid_ = true;
    }
}

const std::vector<std::vector<std::int64_t>>& FormSystem::rows_mod_p() const {
    if (!vector_flags_valid_) throw std::logic_error("rows_mod_p requires vector mode");
    return rows_mod_p_;
}

bool FormSystem::pairwise_distinct() const {
    if (!vector_flags_valid_) throw std::logic_error("pairwise_distinct requires vector mode");
    return pairwise_distinct_;
}

bool FormSystem::injective() const {
    if (!vector_flags_valid_) throw std::logic_error("injective requires vector mode");
    return rank_mod_p_ == var_count();
}

std::size_t FormSystem::rank_mod_p() const {
    if (!vector_flags_valid_) throw std::logic_error("rank_mod_p requires vector mode");
    return rank_mod_p_;
}

std::uint64_t FormSystem::eval_index(std::size_t i, std::span<const std::uint64_t> w) const {
    if (w.size() != var_count()) throw std::invalid_argument("wrong tuple arity");
    std::uint64_t out = 0; // index of the zero element
    for (std::size_t k = 0; k < w.size(); ++k)
        out = group_.add(out, group_.scale(matrix_[i][k], w[k]));
    return out;
}

std::int64_t FormSystem::eval_scalar(std::size_t i, std::span<const std::int64_t> w) const {
    const std::int64_t p = group_.prime();
    std::int64_t acc = 0;
    for (std::size_t k = 0; k < w.size(); ++k) acc = mod_norm(acc + rows_mod_p()[i][k] * w[k], p);
    return acc;
}

std::optional<FourAP> detect_four_ap(const FormSystem& system) {
    if (!system.group().vector_mode())
        throw std::invalid_argument("four-AP detection requires vector mode");
    const std::size_t d = system.form_count();
    if (d < 4) return std::nullopt;
    const std::int64_t p = system.group().prime();
    const auto& rows = system.rows_mod_p();
    const std::size_t r = system.var_count();

    auto diff_eq = [&](std::size_t a, std::size_t b, std::size_t c) {
        // row_b - row_a == row_c - row_b (mod p), componentwise
        for (std::size_t k = 0; k < r; ++k)
            if (mod_norm(2 * rows[b][k] - rows[a][k] - rows[c][k], p) != 0) return false;
        return true;
    };

    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b)
            for (std::size_t c = b + 1; c < d; ++c)
                for (std::size_t e = c + 1; e < d; ++e) {
                    std::array<std::size_t, 4> perm{a, b, c, e};
                    do {
                        if (perm[0] > perm[3]) continue; // orderings up to reversal
                        if (diff_eq(perm[0], perm[1], perm[2]) && diff_eq(perm[1], perm[2], perm[3]))
                            return FourAP{perm};
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }
    return std::nullopt;
}

std::optional<ProportionalPair> detect_proportional_pair(const FormSystem& system) {
    if (!system.group().vector_mode())
        throw std::invalid_argument("proportional-pair detection requires vector mode");
    const std::int64_t p = system.group().prime();
    const auto& rows = system.rows_mod_p();
    const std::size_t d = system.form_count();
    const std::size_t r = system.var_count();

    auto ratio = [&](std::size_t i, std::size_t j) -> std::optional<std::int64_t> {
        // c with row_j = c * row_i, if any (row_i must be nonzero)
        std::size_t lead = r;
        for (std::size_t k = 0; k < r; ++k)
            if (rows[i][k] != 0) {
                lead = k;
                break;
            }
        if (lead == r) return std::nullopt;
        const std::int64_t c = mod_norm(rows[j][lead] * mod_inverse(rows[i][lead], p), p);
        for (std::size_t k = 0; k < r; ++k)
            if (mod_norm(rows[j][k] - c * rows[i][k], p) != 0) return std::nullopt;
        return c;
    };

    std::optional<ProportionalPair> first;
    bool negation = false;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const auto c = ratio(i, j);
            if (!c) continue;
            if (*c == mod_norm(-1, p)) negation = true;
            if (*c != 0 && *c != 1 && !first) first = ProportionalPair{i, j, *c, false};
        }
    if (first) first->negation_pair_exists = negation;
    return first;
}

std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
    std::size_t rank = 0;
    const std::size_t r = rows.empty() ? 0 : rows[0].size();
    std::size_t col = 0;
    for (std::size_t row = 0; row < rows.size() && col < r; ++col) {
        std::size_t pivot = rows.size();
        for (std::size_t i = row; i < rows.size(); ++i)
            if (mod_norm(rows[i][col], p) != 0) {
                pivot = i;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[row], rows[pivot]);
        const std::int64_t inv = mod_inverse(rows[row][col], p);
        for (std::size_t k = col; k < r; ++k) rows[row][k] = mod_norm(rows[row][k] * inv, p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == row) continue;
            const std::int64_t f = mod_norm(rows[i][col], p);
            if (f == 0) continue;
            for (std::size_t k = col; k < r; ++k)
                rows[i][k] = mod_norm(rows[i][k] - f * rows[row][k], p);
        }
        ++row;
        ++rank;
    }
    return rank;
}

SubsetBasis subset_on_own_basis(const std::vector<std::vector<std::int64_t>>& rows,
                                std::int64_t p) {
    const std::size_t k = rows.size();
    const std::size_t r = k == 0 ? 0 : rows[0].size();

    // echelon rows, each with its expression over the basis rows chosen so far
    std::vector<std::vector<std::int64_t>> ech;
    std::vector<std::vector<std::int64_t>> comb;
    std::vector<std::size_t> lead;

    SubsetBasis out;
    out.coeffs.assign(k, {});

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::int64_t> v(r);
        for (std::size_t c = 0; c < r; ++c) v[c] = mod_norm(rows[i][c], p);

        std::vector<std::int64_t> over_basis(out.span_dim, 0);
        for (std::size_t t = 0; t < ech.size(); ++t) {
            const std::int64_t f = mod_norm(v[lead[t]] * mod_inverse(ech[t][lead[t]], p), p);
            if (f == 0) continue;
            for (std::size_t c = 0; c < r; ++c) v[c] = mod_norm(v[c] - f * ech[t][c], p);
            for (std::size_t b = 0; b < comb[t].size(); ++b)
                over_basis[b] = mod_norm(over_basis[b] + f * comb[t][b], p);
        }

        std::size_t lv = r;
        for (std::size_t c = 0; c < r; ++c)
            if (v[c] != 0) {
                lv = c;
                break;
            }
        if (lv == r) {
            out.coeffs[i] = std::move(over_basis);
        } else {
            // row i joins the basis; its residual v equals row_i minus the
            // prior combination, so over the basis it reads unit(i) - over_basis
            std::vector<std::int64_t> cb(out.span_dim + 1, 0);
            for (std::size_t b = 0; b < out.span_dim; ++b) cb[b] = mod_norm(-over_basis[b], p);
            cb[out.span_dim] = 1;
            ech.push_back(std::move(v));
            comb.push_back(std::move(cb));
            lead.push_back(lv);
            ++out.span_dim;
            std::vector<std::int64_t> unit(out.span_dim, 0);
            unit[out.span_dim - 1] = 1;
            out.coeffs[i] = std::move(unit);
        }
    }
    for (auto& c : out.coeffs) c.resize(out.span_dim, 0);
    return out;
}

namespace {

// integer determinant, Bareiss fraction-free elimination
std::int64_t int_det(std::vector<std::vector<std::int64_t>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::int64_t sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::vector<std::vector<std::int64_t>> adjugate(const std::vector<std::vector<std::int64_t>>& b) {
    const std::size_t n = b.size();
    std::vector<std::vector<std::int64_t>> adj(n, std::vector<std::int64_t>(n, 0));
    if (n == 1) {
        adj[0][0] = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<std::int64_t>> minor;
            minor.reserve(n - 1);
            for (std::size_t rr = 0; rr < n; ++rr) {
                if (rr == j) continue; // adj_{ij} = cofactor_{ji}
                std::vector<std::int64_t> row;
                row.reserve(n - 1);
                for (std::size_t cc = 0; cc < n; ++cc)
                    if (cc != i) row.push_back(b[rr][cc]);
                minor.push_back(std::move(row));
            }
            const std::int64_t det = int_det(std::move(minor));
            adj[i][j] = ((i + j) % 2 == 0) ? det : -det;
        }
    return adj;
}

} // namespace

Reparametrization reparametrize(const FormSystem& system, std::span<const std::size_t> pivots) {
    if (!system.group().vector_mode())
        throw std::invalid_argument("reparametrization requires vector mode");
    const std::int64_t p = system.group().prime();
    const std::size_t r = system.var_count();
    const std::size_t d = system.form_count();
    if (pivots.empty() || pivots.size() > r) throw std::invalid_argument("bad pivot count");
    for (std::size_t idx : pivots)
        if (idx >= d) throw std::invalid_argument("pivot index out of range");

    std::vector<std::vector<std::int64_t>> chosen;
    for (std::size_t idx : pivots) chosen.push_back(system.matrix()[idx]);
    if (rank_mod_p(chosen, p) != pivots.size())
        throw std::invalid_argument("pivot forms are dependent mod p");

    // extend the pivot family by unit vectors without losing independence
    std::vector<std::vector<std::int64_t>> b = chosen;
    for (std::size_t j = 0; j < r && b.size() < r; ++j) {
        std::vector<std::int64_t> unit(r, 0);
        unit[j] = 1;
        b.push_back(unit);
        if (rank_mod_p(b, p) != b.size()) b.pop_back();
    }
    if (b.size() != r) throw std::logic_error("could not complete pivot basis");

    const std::int64_t det = int_det(b);
    if (mod_norm(det, p) == 0) throw std::logic_error("basis determinant vanished mod p");
    const auto adj = adjugate(b);
    const std::int64_t m = mod_inverse(det, p);

    const double c1 = static_cast<double>(system.coeff_bound());
    const double rd = static_cast<double>(r);
    const double c2 = rd * c1 * std::pow(c1 * std::sqrt(rd), rd);

    std::vector<std::vector<std::int64_t>> n_mat(d, std::vector<std::int64_t>(r, 0));
    std::vector<std::vector<FractionWitness>> wit(d, std::vector<FractionWitness>(r));
    const auto cap = static_cast<std::int64_t>(std::ceil(c2)) + 1;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            std::int64_t dot = 0;
            for (std::size_t t = 0; t < r; ++t)
                dot = mod_norm(dot + mod_norm(system.matrix()[i][t], p) * mod_norm(adj[t][j], p), p);
            std::int64_t rep = mod_norm(m * dot, p);
            if (rep > p / 2) rep -= p; // least absolute representative
            n_mat[i][j] = rep;
            auto w = c_fraction_bound(rep, p, cap);
            // the Hadamard estimate gives max(|y|, z) <= C2, with equality
            // attained in degenerate cases (e.g. r = 1 with unit entries)
            if (!w || static_cast<double>(std::max<std::int64_t>(std::llabs(w->y), w->z)) >
                          c2 * (1.0 + 1e-12) + 1e-12)
                throw std::logic_error("reparametrized coefficient is not a C2-fraction");
            wit[i][j] = *w;
        }

    return Reparametrization{FormSystem(std::move(n_mat), system.group()), c2, std::move(wit)};
}

} // namespace mc
