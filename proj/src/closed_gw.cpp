#include "chiang/closed_gw.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "chiang/errors.hpp"

namespace chiang {

namespace {

void check_index(int i) {
    if (i < 0 || i > 3) throw std::out_of_range("class index outside 0..3");
}

// Affine-linear form in the unknowns of one degree: constant + sum over b of
// coeff_b * N_d(4d-2b, b).
struct LinForm {
    Rational constant;
    std::map<int, Rational> coeff;

    bool pure_constant() const { return coeff.empty(); }

    void add(const LinForm& o, const Rational& scale) {
        constant += scale * o.constant;
        for (const auto& [b, c] : o.coeff) {
            auto [it, inserted] = coeff.emplace(b, scale * c);
            if (!inserted) {
                it->second += scale * c;
                if (it->second.is_zero()) coeff.erase(it);
            }
        }
    }
};

LinForm product(const LinForm& x, const LinForm& y) {
    if (!x.pure_constant() && !y.pure_constant())
        throw WdvvReconstructionFailure("nonlinear term in reconstruction system");
    LinForm out;
    if (x.pure_constant()) {
        out.add(y, x.constant);
    } else {
        out.add(x, y.constant);
    }
    return out;
}

struct Row {
    std::vector<Rational> coeff;  // indexed by b
    Rational rhs;
};

// Fraction-free forward elimination (Bareiss) on an integer matrix with the
// right-hand side carried as the last column.  Returns pivot row count.
int bareiss(std::vector<std::vector<mpz_class>>& m, int unknowns,
            std::vector<int>& pivot_col) {
    const int rows = static_cast<int>(m.size());
    const int cols = unknowns + 1;
    mpz_class prev(1);
    int r = 0;
    for (int c = 0; c < unknowns && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i) {
            if (sgn(m[i][c]) != 0) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        std::swap(m[r], m[pr]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) {
                mpz_class num = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_class quo, rem;
                mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                            prev.get_mpz_t());
                if (sgn(rem) != 0)
                    throw WdvvReconstructionFailure(
                        "fraction-free elimination lost exactness");
                m[i][j] = quo;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivot_col.push_back(c);
        ++r;
    }
    return r;
}

}  // namespace

Rational ClosedEngine::triple_intersection(int i, int j, int k) {
    check_index(i);
    check_index(j);
    check_index(k);
    return i + j + k == 3 ? Rational(1) : Rational(0);
}

Rational ClosedEngine::invariant_indices(int d, const std::vector<int>& insertions) {
    std::array<int, 4> counts{0, 0, 0, 0};
    for (int i : insertions) {
        check_index(i);
        ++counts[i];
    }
    return invariant(d, counts);
}

Rational ClosedEngine::invariant(int d, const std::array<int, 4>& counts) {
    if (d < 0) throw std::invalid_argument("negative degree");
    for (int c : counts)
        if (c < 0) throw std::invalid_argument("negative insertion count");
    const int total = counts[0] + counts[1] + counts[2] + counts[3];
    if (d == 0) {
        // Only the classical triple integral survives at degree zero.
        if (total != 3) return Rational(0);
        std::vector<int> idx;
        for (int i = 0; i < 4; ++i) idx.insert(idx.end(), counts[i], i);
        return triple_intersection(idx[0], idx[1], idx[2]);
    }
    if (counts[0] > 0) return Rational(0);
    const Rational factor = Rational(d).pow(counts[1]);
    const int a = counts[2];
    const int b = counts[3];
    if (a + 2 * b != 4 * d) return Rational(0);
    return factor * reduced(ClosedKey{d, a, b});
}

Rational ClosedEngine::reduced(const ClosedKey& key) {
    if (key.d < 1 || key.a < 0 || key.b < 0)
        throw std::invalid_argument("reduced invariant key out of range");
    if (key.a + 2 * key.b != 4 * key.d)
        throw std::invalid_argument("reduced invariant violates dimension");
    std::lock_guard<std::recursive_mutex> lock(mu_);
    ensure_degree(key.d);
    return memo_.at(key);
}

void ClosedEngine::ensure_degree(int d) {
    if (solved_.count(d)) return;
    if (in_progress_.count(d))
        throw WdvvReconstructionFailure("reconstruction cycle at degree " +
                                        std::to_string(d));
    in_progress_.insert(d);
    // Lower degrees feed the inhomogeneous part of the system.
    for (int lower = 1; lower < d; ++lower) ensure_degree(lower);
    solve_degree(d);
    in_progress_.erase(d);
    solved_.insert(d);
}

void ClosedEngine::solve_degree(int d) {
    const int unknowns = 2 * d + 1;  // b = 0..2d, a = 4d - 2b

    // Evaluates one side of an associativity product: degree d1 with the
    // given insertion counts.  Known degrees contribute constants, degree d
    // contributes a multiple of one unknown.
    auto sym = [&](int d1, const std::array<int, 4>& counts) -> LinForm {
        LinForm f;
        if (d1 < d) {
            f.constant = invariant(d1, counts);
            return f;
        }
        if (counts[0] > 0) return f;
        const int a = counts[2];
        const int b = counts[3];
        if (a + 2 * b != 4 * d) return f;
        f.coeff[b] = Rational(d).pow(counts[1]);
        return f;
    };

    std::vector<Row> rows;
    auto push_row = [&](const LinForm& form) {
        if (form.pure_constant()) {
            if (!form.constant.is_zero())
                throw WdvvReconstructionFailure(
                    "inconsistent constant equation at degree " + std::to_string(d));
            return;
        }
        Row row;
        row.coeff.assign(unknowns, Rational(0));
        for (const auto& [b, c] : form.coeff) row.coeff[b] = c;
        row.rhs = -form.constant;
        rows.push_back(std::move(row));
    };

    // Associativity in directions (i, j | k, l), coefficient of the monomial
    // with r2 line-directions and r3 point-directions.  The pairs run over
    // i < k and j < l; the remaining index choices repeat these equations.
    for (int i = 1; i <= 3; ++i)
        for (int k = i + 1; k <= 3; ++k)
            for (int j = 1; j <= 3; ++j)
                for (int l = j + 1; l <= 3; ++l) {
                    const int s = 4 * d - 1 - (i + j + k + l - 4);
                    for (int r3 = 0; 2 * r3 <= s; ++r3) {
                        const int r2 = s - 2 * r3;
                        LinForm eq;
                        for (int nu = 0; nu <= 3; ++nu) {
                            const int mu = 3 - nu;
                            for (int d1 = 0; d1 <= d; ++d1) {
                                const int d2 = d - d1;
                                for (int a1 = 0; a1 <= r2; ++a1)
                                    for (int b1 = 0; b1 <= r3; ++b1) {
                                        const Rational w =
                                            binomial(r2, a1) * binomial(r3, b1);
                                        std::array<int, 4> c1{0, 0, a1, b1};
                                        std::array<int, 4> c2{0, 0, r2 - a1, r3 - b1};
                                        auto bump = [](std::array<int, 4>& c, int idx) {
                                            ++c[idx];
                                        };
                                        // (i j | k l) side.
                                        auto ca = c1, cb = c2;
                                        bump(ca, i), bump(ca, j), bump(ca, nu);
                                        bump(cb, mu), bump(cb, k), bump(cb, l);
                                        LinForm t = product(sym(d1, ca), sym(d2, cb));
                                        eq.add(t, w);
                                        // minus (j k | i l) side.
                                        ca = c1, cb = c2;
                                        bump(ca, j), bump(ca, k), bump(ca, nu);
                                        bump(cb, mu), bump(cb, i), bump(cb, l);
                                        t = product(sym(d1, ca), sym(d2, cb));
                                        eq.add(t, -w);
                                    }
                            }
                        }
                        push_row(eq);
                    }
                }

    if (d == 1) {
        // Geometric seed: exactly one line passes through two generic points.
        Row seed;
        seed.coeff.assign(unknowns, Rational(0));
        seed.coeff[2] = Rational(1);
        seed.rhs = Rational(1);
        rows.push_back(std::move(seed));
    }

    // Clear denominators row by row for the fraction-free solve.
    std::vector<std::vector<mpz_class>> m;
    m.reserve(rows.size());
    for (const Row& row : rows) {
        mpz_class l(1);
        for (const Rational& c : row.coeff) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), row.rhs.den().get_mpz_t());
        std::vector<mpz_class> out;
        out.reserve(unknowns + 1);
        for (const Rational& c : row.coeff) out.push_back(c.num() * (l / c.den()));
        out.push_back(row.rhs.num() * (l / row.rhs.den()));
        m.push_back(std::move(out));
    }

    std::vector<int> pivot_col;
    const int rank = bareiss(m, unknowns, pivot_col);
    if (rank < unknowns)
        throw WdvvReconstructionFailure("underdetermined system at degree " +
                                        std::to_string(d));
    for (std::size_t i = rank; i < m.size(); ++i)
        if (sgn(m[i][unknowns]) != 0)
            throw WdvvReconstructionFailure("inconsistent system at degree " +
                                            std::to_string(d));
    // Full rank means pivot r sits on column r; back-substitute exactly.
    std::vector<Rational> x(unknowns, Rational(0));
    for (int r = unknowns - 1; r >= 0; --r) {
        Rational acc{Rational(m[r][unknowns])};
        for (int c = r + 1; c < unknowns; ++c)
            acc -= Rational(m[r][c]) * x[c];
        x[r] = acc / Rational(m[r][r]);
    }

    for (int b = 0; b <= 2 * d; ++b) {
        const ClosedKey key{d, 4 * d - 2 * b, b};
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            if (!(it->second == x[b]))
                throw CacheFormatError("imported closed value conflicts with solve");
        } else {
            memo_.emplace(key, x[b]);
        }
    }
}

Rational ClosedEngine::wdvv_residual(int i, int j, int k, int l, int d, int a, int b) {
    check_index(i);
    check_index(j);
    check_index(k);
    check_index(l);
    if (d < 0 || a < 0 || b < 0)
        throw std::invalid_argument("monomial out of range");
    Rational acc(0);
    for (int nu = 0; nu <= 3; ++nu) {
        const int mu = 3 - nu;
        for (int d1 = 0; d1 <= d; ++d1) {
            const int d2 = d - d1;
            for (int a1 = 0; a1 <= a; ++a1)
                for (int b1 = 0; b1 <= b; ++b1) {
                    const Rational w = binomial(a, a1) * binomial(b, b1);
                    auto value = [&](int dd, int p, int q, int r, int a2, int b2) {
                        std::array<int, 4> c{0, 0, a2, b2};
                        ++c[p], ++c[q], ++c[r];
                        return invariant(dd, c);
                    };
                    acc += w * value(d1, i, j, nu, a1, b1) *
                           value(d2, mu, k, l, a - a1, b - b1);
                    acc -= w * value(d1, j, k, nu, a1, b1) *
                           value(d2, mu, i, l, a - a1, b - b1);
                }
        }
    }
    return acc;
}

std::map<ClosedKey, Rational> ClosedEngine::snapshot() const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return memo_;
}

void ClosedEngine::import(const std::map<ClosedKey, Rational>& values) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    for (const auto& [key, value] : values) {
        if (key.d < 1 || key.a < 0 || key.b < 0 || key.a + 2 * key.b != 4 * key.d)
            throw CacheFormatError("closed cache key out of range");
        auto it = memo_.find(key);
        if (it != memo_.end() && !(it->second == value))
            throw CacheFormatError("closed cache value conflict");
        memo_.insert_or_assign(key, value);
    }
    // A degree counts as solved only when every unknown of that degree landed.
    std::map<int, int> per_degree;
    for (const auto& [key, value] : memo_) ++per_degree[key.d];
    for (const auto& [d, n] : per_degree)
        if (n == 2 * d + 1) solved_.insert(d);
}

void ClosedEngine::clear() {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    memo_.clear();
    solved_.clear();
    in_progress_.clear();
}

}  // namespace chiang
