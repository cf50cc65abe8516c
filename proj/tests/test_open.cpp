#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "chiang/open_gw.hpp"

using chiang::BasicInvariants;
using chiang::ClosedEngine;
using chiang::NormalizeResult;
using chiang::OpenEngine;
using chiang::OpenKey;
using chiang::Rational;
using chiang::RawConstraints;

namespace {

std::shared_ptr<ClosedEngine> shared_closed() {
    static auto closed = std::make_shared<ClosedEngine>();
    return closed;
}

OpenEngine& engine() {
    static OpenEngine e(shared_closed());
    return e;
}

}  // namespace

TEST_CASE("normalization applies the axioms in order") {
    // Unit constraint alone in class zero evaluates classically.
    NormalizeResult unit = OpenEngine::normalize(0, 1, RawConstraints{1, 0, 0, 0, 0});
    REQUIRE(unit.kind() == NormalizeResult::Kind::Value);
    CHECK(unit.scalar() == Rational(-1));

    // The unit kills everything else.
    CHECK(OpenEngine::normalize(1, 1, RawConstraints{1, 0, 1, 0, 0}).is_zero());
    CHECK(OpenEngine::normalize(0, 0, RawConstraints{1, 1, 0, 0, 0}).is_zero());

    // Nothing lives in negative classes.
    CHECK(OpenEngine::normalize(-2, 0, RawConstraints{0, 0, 1, 0, 0}).is_zero());

    // The point-like class trades for a boundary point with a sign.
    NormalizeResult traded = OpenEngine::normalize(2, 1, RawConstraints{0, 0, 0, 0, 1});
    REQUIRE(traded.kind() == NormalizeResult::Kind::Key);
    CHECK(traded.scalar() == Rational(-1));
    CHECK(traded.key() == OpenKey{2, 2, 0, 0});

    // Two trades cancel the sign.
    NormalizeResult doubled = OpenEngine::normalize(6, 2, RawConstraints{0, 0, 2, 0, 2});
    REQUIRE(doubled.kind() == NormalizeResult::Kind::Key);
    CHECK(doubled.scalar() == Rational(1));
    CHECK(doubled.key() == OpenKey{6, 4, 2, 0});

    // Each divisor insertion contributes a factor beta/4.
    NormalizeResult divisor = OpenEngine::normalize(5, 4, RawConstraints{0, 1, 1, 0, 0});
    REQUIRE(divisor.kind() == NormalizeResult::Kind::Key);
    CHECK(divisor.scalar() == Rational(5, 4));
    CHECK(divisor.key() == OpenKey{5, 4, 1, 0});

    // Degree balance: beta != k + l2 + 2*l3 dies.
    CHECK(OpenEngine::normalize(4, 1, RawConstraints{0, 0, 1, 0, 0}).is_zero());

    // A balanced query reaches the table unchanged.
    NormalizeResult plain = OpenEngine::normalize(3, 1, RawConstraints{0, 0, 0, 1, 0});
    REQUIRE(plain.kind() == NormalizeResult::Kind::Key);
    CHECK(plain.scalar() == Rational(1));
    CHECK(plain.key() == OpenKey{3, 1, 0, 1});
}

TEST_CASE("the three seeds come back unchanged") {
    CHECK(engine().invariant(OpenKey{1, 1, 0, 0}) == Rational(3));
    CHECK(engine().invariant(OpenKey{1, 0, 1, 0}) == Rational(1, 4));
    CHECK(engine().invariant(OpenKey{2, 0, 0, 1}) == Rational(-1));
}

TEST_CASE("first derived values") {
    CHECK(engine().invariant(OpenKey{2, 2, 0, 0}) == Rational(5, 4));
    CHECK(engine().invariant(OpenKey{2, 0, 2, 0}) == Rational(-35, 64));
    CHECK(engine().invariant(OpenKey{3, 3, 0, 0}) == Rational(-7, 16));
    CHECK(engine().invariant(OpenKey{3, 1, 0, 1}) == Rational(1, 2));
    CHECK(engine().invariant(OpenKey{3, 0, 1, 1}) == Rational(3, 8));
}

TEST_CASE("spot values deeper in the table") {
    CHECK(engine().invariant(OpenKey{9, 9, 0, 0}) == Rational(-2123349, 65536));
    CHECK(engine().invariant(OpenKey{7, 0, 1, 3}) == Rational(7, 32));
    CHECK(engine().invariant(OpenKey{8, 0, 2, 3}) == Rational(-3, 8));
}

TEST_CASE("raw queries that violate the balance vanish") {
    for (int beta = 0; beta <= 10; ++beta)
        for (int k = 0; k <= 4; ++k)
            for (int l2 = 0; l2 <= 3; ++l2)
                for (int l3 = 0; l3 <= 2; ++l3) {
                    if (beta == k + l2 + 2 * l3) continue;
                    CAPTURE(beta); CAPTURE(k); CAPTURE(l3);
                    CHECK(engine().invariant(
                              beta, k, RawConstraints{0, 0, l2, l3, 0}) ==
                          Rational(0));
                }
}

TEST_CASE("negative inputs and unbalanced keys are rejected") {
    CHECK(engine().invariant(-3, 0, RawConstraints{}) == Rational(0));
    CHECK_THROWS_AS(engine().invariant(OpenKey{4, 1, 1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(engine().invariant(OpenKey{2, -1, 3, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(engine().invariant(3, 1, RawConstraints{0, 0, -1, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("the class cap is enforced") {
    OpenEngine capped(shared_closed(), BasicInvariants{}, 4);
    CHECK(capped.beta_max() == 4);
    CHECK(capped.invariant(OpenKey{4, 4, 0, 0}) == Rational(-3, 4));
    CHECK_THROWS_AS(capped.invariant(OpenKey{5, 5, 0, 0}), std::out_of_range);
    CHECK_THROWS_AS(OpenEngine(shared_closed(), BasicInvariants{}, 1),
                    std::invalid_argument);
}

TEST_CASE("divisor linearity in the class") {
    // A raw G1 insertion on a balanced key scales by beta/4.
    Rational base = engine().invariant(OpenKey{5, 5, 0, 0});
    CHECK(engine().invariant(5, 5, RawConstraints{0, 1, 0, 0, 0}) ==
          Rational(5, 4) * base);
    CHECK(engine().invariant(5, 5, RawConstraints{0, 2, 0, 0, 0}) ==
          Rational(25, 16) * base);
}

TEST_CASE("wall-crossing trades match direct evaluation") {
    // One raw Gd insertion equals minus the invariant with one more boundary
    // point; two insertions restore the sign.
    CHECK(engine().invariant(3, 1, RawConstraints{0, 0, 1, 0, 1}) ==
          -engine().invariant(OpenKey{3, 2, 1, 0}));
    CHECK(engine().invariant(4, 1, RawConstraints{0, 0, 0, 1, 1}) ==
          -engine().invariant(OpenKey{4, 2, 0, 1}));
    CHECK(engine().invariant(6, 2, RawConstraints{0, 0, 2, 0, 2}) ==
          engine().invariant(OpenKey{6, 4, 2, 0}));
}

TEST_CASE("the reduction routes agree wherever several apply") {
    for (int beta = 2; beta <= 8; ++beta)
        for (int k = 0; k <= beta; ++k)
            for (int l3 = 0; 2 * l3 <= beta - k; ++l3) {
                const int l2 = beta - k - 2 * l3;
                const OpenKey key{beta, k, l2, l3};
                const Rational direct = engine().invariant(key);
                CAPTURE(beta); CAPTURE(k); CAPTURE(l3);
                if (k >= 1 && l2 + l3 >= 1)
                    CHECK(engine().recursion_a(key) == direct);
                if (k >= 2) CHECK(engine().recursion_b(key) == direct);
                if (l2 + l3 >= 2) CHECK(engine().recursion_c(key) == direct);
            }
}

TEST_CASE("route preconditions are validated") {
    CHECK_THROWS_AS(engine().recursion_a(OpenKey{3, 3, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(engine().recursion_b(OpenKey{3, 1, 0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(engine().recursion_c(OpenKey{3, 2, 1, 0}),
                    std::invalid_argument);
}

TEST_CASE("a vanishing reduction divisor is reported, not divided by") {
    auto closed = shared_closed();
    OpenEngine degenerate(closed, BasicInvariants{Rational(3), Rational(-8, 3),
                                                  Rational(-1)});
    CHECK_THROWS_AS(degenerate.invariant(OpenKey{2, 2, 0, 0}),
                    chiang::DivisorZero);
}

TEST_CASE("snapshot warm start reproduces cold values") {
    auto closed = std::make_shared<ClosedEngine>();
    OpenEngine cold(closed);
    cold.invariant(OpenKey{6, 6, 0, 0});
    auto snap = cold.snapshot();
    CHECK_FALSE(snap.empty());

    OpenEngine warm(closed);
    warm.import(snap);
    CHECK(warm.snapshot() == snap);
    CHECK(warm.invariant(OpenKey{6, 6, 0, 0}) ==
          cold.invariant(OpenKey{6, 6, 0, 0}));
    CHECK(warm.invariant(OpenKey{7, 7, 0, 0}) ==
          engine().invariant(OpenKey{7, 7, 0, 0}));
}

TEST_CASE("imports reject unbalanced keys and conflicting values") {
    OpenEngine fresh(std::make_shared<ClosedEngine>());
    std::map<OpenKey, Rational> unbalanced{{OpenKey{3, 1, 1, 0}, Rational(1)}};
    CHECK_THROWS_AS(fresh.import(unbalanced), chiang::CacheFormatError);

    fresh.invariant(OpenKey{2, 2, 0, 0});
    std::map<OpenKey, Rational> conflict{{OpenKey{2, 2, 0, 0}, Rational(1, 3)}};
    CHECK_THROWS_AS(fresh.import(conflict), chiang::CacheFormatError);
}

TEST_CASE("evaluation order does not change any value") {
    std::vector<OpenKey> keys;
    for (int beta = 1; beta <= 6; ++beta)
        for (int k = 0; k <= beta; ++k)
            for (int l3 = 0; 2 * l3 <= beta - k; ++l3)
                keys.push_back(OpenKey{beta, k, beta - k - 2 * l3, l3});

    std::map<OpenKey, Rational> reference;
    for (const OpenKey& key : keys) reference[key] = engine().invariant(key);

    std::mt19937_64 rng(40961);
    for (int round = 0; round < 3; ++round) {
        std::shuffle(keys.begin(), keys.end(), rng);
        OpenEngine fresh(std::make_shared<ClosedEngine>());
        for (const OpenKey& key : keys)
            CHECK(fresh.invariant(key) == reference.at(key));
    }
}

TEST_CASE("dispatch never routes through the narrow recursion unexpectedly") {
    OpenEngine fresh(std::make_shared<ClosedEngine>());
    for (int beta = 1; beta <= 10; ++beta)
        for (int k = 0; k <= beta; ++k)
            for (int l3 = 0; 2 * l3 <= beta - k; ++l3)
                fresh.invariant(OpenKey{beta, k, beta - k - 2 * l3, l3});
    auto stats = fresh.stats();
    CHECK(stats.rec_a_unexpected == 0);
    CHECK(stats.base > 0);
    CHECK(stats.rec_b + stats.rec_c > 0);
}

TEST_CASE("constraint splits carry multinomial weights") {
    auto splits = chiang::multiset_splits(2, 1);
    CHECK(splits.size() == 6);
    Rational total;
    for (const auto& s : splits) {
        CHECK(s.a2 >= 0);
        CHECK(s.a3 >= 0);
        CHECK(s.a2 <= 2);
        CHECK(s.a3 <= 1);
        total += s.weight;
    }
    CHECK(total == Rational(8));  // 2^2 * 2^1 choices in all
    for (const auto& s : splits)
        if (s.a2 == 1 && s.a3 == 0) CHECK(s.weight == Rational(2));
}
