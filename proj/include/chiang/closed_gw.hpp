#ifndef CHIANG_CLOSED_GW_HPP
#define CHIANG_CLOSED_GW_HPP

#include <array>
#include <compare>
#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "chiang/rational.hpp"

namespace chiang {

// Reduced closed invariant N_d(a, b): degree-d stable maps through a generic
// configuration of a lines and b points, with a + 2b = 4d.
struct ClosedKey {
    int d = 0;
    int a = 0;
    int b = 0;

    friend auto operator<=>(const ClosedKey&, const ClosedKey&) = default;
};

// Genus-zero closed invariants of the ambient space.  Hypersurface classes
// are indexed 0..3 by codimension weight: H0 is the fundamental class, H1 the
// hyperplane, H2 the line class, H3 the point class.
//
// Values are reconstructed degree by degree from the associativity equations
// of the big quantum product, seeded only by "one line through two points".
class ClosedEngine {
public:
    ClosedEngine() = default;

    // Classical cup-product integral of H_i H_j H_k; nonzero iff i+j+k = 3.
    static Rational triple_intersection(int i, int j, int k);

    // Full invariant with insertion multiset given by counts of H0..H3.
    // Applies the degree-zero, fundamental-class, divisor, and dimension
    // axioms before delegating to the reduced table.
    Rational invariant(int d, const std::array<int, 4>& counts);
    Rational invariant_indices(int d, const std::vector<int>& insertions);

    Rational reduced(const ClosedKey& key);

    // Associativity residual for directions (i, j, k, l) at the coefficient
    // of the (d, a, b) monomial; identically zero when the table is correct.
    Rational wdvv_residual(int i, int j, int k, int l, int d, int a, int b);

    std::map<ClosedKey, Rational> snapshot() const;
    void import(const std::map<ClosedKey, Rational>& values);
    void clear();

private:
    void ensure_degree(int d);
    void solve_degree(int d);

    mutable std::recursive_mutex mu_;
    std::map<ClosedKey, Rational> memo_;
    std::set<int> solved_;
    std::set<int> in_progress_;
};

}  // namespace chiang

#endif  // CHIANG_CLOSED_GW_HPP
