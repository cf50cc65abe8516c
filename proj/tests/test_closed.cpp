#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <map>
#include <stdexcept>

#include "chiang/closed_gw.hpp"

using chiang::ClosedEngine;
using chiang::ClosedKey;
using chiang::Rational;

TEST_CASE("triple intersections on projective space") {
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j)
            for (int k = 0; k <= 3; ++k)
                CHECK(ClosedEngine::triple_intersection(i, j, k) ==
                      Rational(i + j + k == 3 ? 1 : 0));
    CHECK_THROWS_AS(ClosedEngine::triple_intersection(4, 0, 0),
                    std::out_of_range);
    CHECK_THROWS_AS(ClosedEngine::triple_intersection(0, -1, 0),
                    std::out_of_range);
}

TEST_CASE("degree zero reduces to classical intersection numbers") {
    ClosedEngine engine;
    CHECK(engine.invariant_indices(0, {0, 1, 2}) == Rational(1));
    CHECK(engine.invariant_indices(0, {1, 1, 1}) == Rational(1));
    CHECK(engine.invariant_indices(0, {0, 0, 3}) == Rational(1));
    CHECK(engine.invariant_indices(0, {1, 2, 3}) == Rational(0));
    CHECK(engine.invariant(0, {0, 2, 0, 0}) == Rational(0));
    CHECK(engine.invariant(0, {2, 0, 0, 1}) == Rational(1));
}

TEST_CASE("fundamental-class and dimension constraints force zeros") {
    ClosedEngine engine;
    CHECK(engine.invariant(1, {1, 0, 2, 1}) == Rational(0));
    CHECK(engine.invariant(2, {0, 0, 3, 0}) == Rational(0));
    CHECK(engine.invariant(1, {0, 0, 1, 1}) == Rational(0));
    CHECK(engine.invariant(3, {0, 0, 1, 5}) == Rational(0));
}

TEST_CASE("divisor insertions multiply by the degree") {
    ClosedEngine engine;
    CHECK(engine.invariant(1, {0, 2, 2, 1}) == Rational(1));
    CHECK(engine.invariant(2, {0, 3, 8, 0}) == Rational(736));
    CHECK(engine.invariant(1, {0, 1, 4, 0}) == Rational(2));
}

TEST_CASE("rational curve counts in low degree") {
    ClosedEngine engine;
    CHECK(engine.invariant(1, {0, 0, 0, 2}) == Rational(1));
    CHECK(engine.invariant(1, {0, 0, 2, 1}) == Rational(1));
    CHECK(engine.invariant(1, {0, 0, 4, 0}) == Rational(2));
    CHECK(engine.invariant(2, {0, 0, 8, 0}) == Rational(92));
    CHECK(engine.invariant(2, {0, 0, 0, 4}) == Rational(0));
    CHECK(engine.invariant(2, {0, 0, 2, 3}) == Rational(1));
    CHECK(engine.invariant(2, {0, 0, 4, 2}) == Rational(4));
    CHECK(engine.invariant(2, {0, 0, 6, 1}) == Rational(18));
    CHECK(engine.invariant(3, {0, 0, 0, 6}) == Rational(1));
    CHECK(engine.invariant(3, {0, 0, 12, 0}) == Rational(80160));
    CHECK(engine.invariant_indices(1, {2, 2, 3}) == Rational(1));
}

TEST_CASE("associativity residuals vanish") {
    ClosedEngine engine;
    for (int d = 1; d <= 3; ++d) {
        CHECK(engine.wdvv_residual(1, 1, 2, 2, d, 4 * d, 0).is_zero());
        CHECK(engine.wdvv_residual(1, 2, 1, 2, d, 4 * d - 2, 1).is_zero());
        CHECK(engine.wdvv_residual(2, 1, 2, 1, d, 0, 2 * d).is_zero());
        CHECK(engine.wdvv_residual(1, 1, 3, 3, d, 4 * d - 4, 2).is_zero());
        CHECK(engine.wdvv_residual(2, 2, 2, 2, d, 2, 2 * d - 1).is_zero());
    }
}

TEST_CASE("evaluation order does not change the table") {
    ClosedEngine a;
    ClosedEngine b;
    a.invariant(2, {0, 0, 8, 0});
    a.invariant(3, {0, 0, 12, 0});
    b.invariant(3, {0, 0, 12, 0});
    b.invariant(2, {0, 0, 8, 0});
    CHECK(a.snapshot() == b.snapshot());
}

TEST_CASE("snapshot round trip warms a fresh engine") {
    ClosedEngine warm;
    warm.invariant(3, {0, 0, 12, 0});
    auto snap = warm.snapshot();
    CHECK_FALSE(snap.empty());

    ClosedEngine cold;
    cold.import(snap);
    CHECK(cold.snapshot() == snap);
    CHECK(cold.invariant(3, {0, 0, 12, 0}) == Rational(80160));
    CHECK(cold.snapshot() == warm.snapshot());

    warm.clear();
    CHECK(warm.snapshot().empty());
    CHECK(warm.invariant(2, {0, 0, 8, 0}) == Rational(92));
}

TEST_CASE("a partial import that contradicts the solve is rejected") {
    ClosedEngine poisoned;
    std::map<ClosedKey, Rational> bad{{ClosedKey{2, 8, 0}, Rational(91)}};
    poisoned.import(bad);
    CHECK_THROWS_AS(poisoned.reduced(ClosedKey{2, 0, 4}),
                    chiang::CacheFormatError);
}

TEST_CASE("a poisoned lower degree breaks the higher-degree system") {
    ClosedEngine poisoned;
    std::map<ClosedKey, Rational> bad{{ClosedKey{1, 4, 0}, Rational(3)},
                                      {ClosedKey{1, 2, 1}, Rational(1)},
                                      {ClosedKey{1, 0, 2}, Rational(1)}};
    poisoned.import(bad);
    CHECK(poisoned.invariant(1, {0, 0, 4, 0}) == Rational(3));
    CHECK_THROWS_AS(poisoned.reduced(ClosedKey{2, 8, 0}),
                    chiang::WdvvReconstructionFailure);
}

TEST_CASE("imports validate the dimension balance") {
    ClosedEngine engine;
    std::map<ClosedKey, Rational> bad{{ClosedKey{1, 3, 0}, Rational(1)}};
    CHECK_THROWS_AS(engine.import(bad), chiang::CacheFormatError);
}

TEST_CASE("negative degrees and counts are rejected") {
    ClosedEngine engine;
    CHECK_THROWS_AS(engine.invariant(-1, {0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(engine.invariant(1, {0, -1, 4, 0}), std::invalid_argument);
    CHECK_THROWS_AS(engine.reduced(ClosedKey{1, 3, 0}), std::invalid_argument);
}
