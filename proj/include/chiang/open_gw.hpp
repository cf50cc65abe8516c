#ifndef CHIANG_OPEN_GW_HPP
#define CHIANG_OPEN_GW_HPP

#include <atomic>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <vector>

#include "chiang/closed_gw.hpp"
#include "chiang/rational.hpp"

namespace chiang {

// Canonical label for an open invariant after normalization: disk class
// beta, k boundary point constraints, and interior constraints G2^l2 G3^l3.
// Nonzero invariants satisfy the degree balance beta = k + l2 + 2*l3.
struct OpenKey {
    int beta = 0;
    int k = 0;
    int l2 = 0;
    int l3 = 0;

    friend auto operator<=>(const OpenKey&, const OpenKey&) = default;
};

// Raw interior constraint multiset before normalization, as counts of the
// classes G0 (unit), G1 (divisor), G2, G3, and Gd (the point-like class
// that trades for a boundary constraint with a sign).
struct RawConstraints {
    int c0 = 0;
    int c1 = 0;
    int c2 = 0;
    int c3 = 0;
    int cd = 0;
};

// The three seed invariants everything else is computed from.
struct BasicInvariants {
    Rational v11{3};      // beta=1, one boundary point
    Rational v102{1, 4};  // beta=1, one G2 constraint
    Rational v203{-1};    // beta=2, one G3 constraint
};

// Outcome of reducing a raw query to a table key: identically zero, a closed
// form resolved by the axioms alone, or coeff times a canonical key.
class NormalizeResult {
public:
    enum class Kind { Zero, Value, Key };

    static NormalizeResult zero() { return NormalizeResult(Kind::Zero, {}, {}); }
    static NormalizeResult value(Rational v) {
        return NormalizeResult(Kind::Value, std::move(v), {});
    }
    static NormalizeResult key(Rational coeff, OpenKey k) {
        return NormalizeResult(Kind::Key, std::move(coeff), k);
    }

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    // For Kind::Value the resolved value; for Kind::Key the prefactor.
    const Rational& scalar() const { return scalar_; }
    const OpenKey& key() const { return key_; }

private:
    NormalizeResult(Kind kind, Rational scalar, OpenKey key)
        : kind_(kind), scalar_(std::move(scalar)), key_(key) {}

    Kind kind_;
    Rational scalar_;
    OpenKey key_;
};

// One summand of a constraint-multiset split, with its multinomial weight.
struct Split {
    int a2 = 0;
    int a3 = 0;
    Rational weight;
};

// All ways to distribute l2 copies of G2 and l3 copies of G3 onto the first
// factor of a product; the complement goes to the second factor.
std::vector<Split> multiset_splits(int l2, int l3);

class OpenEngine {
public:
    struct DispatchStats {
        unsigned long long base = 0;
        unsigned long long rec_a = 0;
        unsigned long long rec_b = 0;
        unsigned long long rec_c = 0;
        // recursion (a) calls whose key had k != 1 or more than one
        // constraint; expected to stay zero under this dispatch.
        unsigned long long rec_a_unexpected = 0;
    };

    explicit OpenEngine(std::shared_ptr<ClosedEngine> closed,
                        BasicInvariants basics = {}, int beta_max = 64);

    // Applies, in order: the wall-crossing trade Gd -> boundary point, the
    // unit axiom, vanishing in class zero, the divisor axiom for G1, and the
    // degree balance filter.
    static NormalizeResult normalize(int beta, int k, const RawConstraints& raw);

    // Memoized evaluation.  The key must be degree balanced; beta must not
    // exceed beta_max.
    Rational invariant(const OpenKey& key);
    // Normalizes first; queries that the axioms kill do not hit the cap.
    Rational invariant(int beta, int k, const RawConstraints& raw);

    // The three reduction routes, exposed individually so results can be
    // cross-checked against each other.  Sub-invariants still go through the
    // memoized dispatch.
    Rational recursion_a(const OpenKey& key);  // needs k >= 1 and l2+l3 >= 1
    Rational recursion_b(const OpenKey& key);  // needs k >= 2
    Rational recursion_c(const OpenKey& key);  // needs l2+l3 >= 2

    const BasicInvariants& basics() const { return basics_; }
    int beta_max() const { return beta_max_; }
    ClosedEngine& closed() { return *closed_; }
    std::shared_ptr<ClosedEngine> closed_ptr() const { return closed_; }

    DispatchStats stats() const;

    std::map<OpenKey, Rational> snapshot() const;
    void import(const std::map<OpenKey, Rational>& values);
    void clear();

private:
    struct Ctx {
        int root_beta = 0;
        std::vector<OpenKey> stack;
        std::set<OpenKey> in_progress;
    };
    struct Factor {
        int beta;
        int k;
        RawConstraints raw;
    };

    Rational eval(const OpenKey& key, Ctx& ctx);
    Rational dispatch(const OpenKey& key, Ctx& ctx);
    Rational eval_factor(const Factor& f, Ctx& ctx);
    // Product of two sub-invariants; both factors are normalized before
    // either is evaluated, so vanishing factors shield their partners.
    Rational term_product(const Factor& f1, const Factor& f2, Ctx& ctx);
    Rational rec_a(const OpenKey& key, Ctx& ctx);
    Rational rec_b(const OpenKey& key, Ctx& ctx);
    Rational rec_c(const OpenKey& key, Ctx& ctx);

    std::shared_ptr<ClosedEngine> closed_;
    BasicInvariants basics_;
    int beta_max_;

    mutable std::mutex mu_;
    std::map<OpenKey, Rational> memo_;

    std::atomic<unsigned long long> n_base_{0};
    std::atomic<unsigned long long> n_a_{0};
    std::atomic<unsigned long long> n_b_{0};
    std::atomic<unsigned long long> n_c_{0};
    std::atomic<unsigned long long> n_a_unexpected_{0};
};

}  // namespace chiang

#endif  // CHIANG_OPEN_GW_HPP
