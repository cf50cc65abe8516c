// Acceptance gate: one pass/fail line per criterion, notes after, exit 0
// only if every criterion passes.  Reference values are frozen here; the
// engine must reproduce them from the three basic invariants alone.

#include <algorithm>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chiang/analysis.hpp"
#include "chiang/cache_io.hpp"
#include "chiang/closed_gw.hpp"
#include "chiang/errors.hpp"
#include "chiang/open_gw.hpp"
#include "chiang/rational.hpp"
#include "chiang/rqc.hpp"

namespace {

using namespace chiang;

struct Gate {
    int passed = 0;
    int failed = 0;
    std::vector<std::string> notes;

    void criterion(int n, const std::string& label, bool ok,
                   const std::string& detail = "") {
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": "
                  << label;
        if (!ok && !detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
        (ok ? passed : failed) += 1;
    }

    void note(const std::string& s) { notes.push_back(s); }
};

// Boundary invariants OGW_{beta,beta}, exact, beta = 1..16 (index 0 unused).
const char* const kBoundaryExact[17] = {
    nullptr,
    "3",
    "5/4",
    "-7/16",
    "-3/4",
    "-105/256",
    "85/64",
    "16005/4096",
    "0",
    "-2123349/65536",
    "-91035/1024",
    "201485745/1048576",
    "9045/4",
    "72025175295/16777216",
    "-695299995/16384",
    "-87325406388675/268435456",
    "-4860",
};

// Rounded reference column for beta = 17..32 (index 0 -> beta 17).  The
// beta = 17 entry is the corrected rendering: the exact value
// 59493684891093075/4294967296 = 1.3851952...e7 rounds to 1.39 at three
// significant digits; the truncated 1.38·10⁷ seen in some listings is
// rejected (see the note emitted below).
const char* const kBoundaryDisplay[16] = {
    "1.39·10⁷",
    "7.68·10⁷",
    "−3.17·10⁸",
    "−6.78·10⁹",
    "−2.24·10¹⁰",
    "3.73·10¹¹",
    "4.65·10¹²",
    "8.08·10¹⁰",
    "−4.84·10¹⁴",
    "−4.05·10¹⁵",
    "2.48·10¹⁶",
    "7.68·10¹⁷",
    "3.62·10¹⁸",
    "−8.50·10¹⁹",
    "−1.47·10²¹",
    "−1.82·10¹⁹",
};

// Interior invariants OGW_{beta,0}(G2^{beta-2*l3}, G3^{l3}); "0" covers both
// the structural zeros (beta < 2*l3) and the computed zero at (6, l3=3).
const char* const kInterior[4][8] = {
    // l3 = 0: beta = 1..8
    {"1/4", "-35/64", "507/1024", "-723/1024", "427725/262144",
     "-1180259/262144", "839314095/67108864", "-39117/1024"},
    // l3 = 1
    {"0", "-1", "3/8", "-11/32", "1251/2048", "-5003/4096", "1481235/524288",
     "-15033/2048"},
    // l3 = 2
    {"0", "0", "0", "-1/4", "5/16", "-23/64", "2943/4096", "-25/16"},
    // l3 = 3
    {"0", "0", "0", "0", "0", "0", "7/32", "-3/8"},
};

std::string mismatch_list(const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& s : items) out += (out.empty() ? "" : "; ") + s;
    return out;
}

}  // namespace

int main() {
    Gate gate;
    auto closed = std::make_shared<ClosedEngine>();
    auto open = std::make_shared<OpenEngine>(closed);

    // ---- criterion 1: boundary invariants, exact, beta <= 16 -------------
    InvariantTable boundary32 = boundary_table(*open, 32);
    {
        std::vector<std::string> bad;
        for (int beta = 1; beta <= 16; ++beta) {
            const TableRow* row = boundary32.find({beta, beta, 0, 0});
            if (row == nullptr) {
                bad.push_back("missing beta " + std::to_string(beta));
                continue;
            }
            if (beta == 15) {
                Rational expected =
                    Rational::parse("-87325406388675/268435456");
                if (!(row->value == expected))
                    bad.push_back("beta 15: got " + row->value.str());
                if (!(row->value.abs() ==
                      Rational::parse("87325406388675/268435456")))
                    bad.push_back("beta 15: wrong magnitude");
                continue;
            }
            if (row->value.str() != kBoundaryExact[beta])
                bad.push_back("beta " + std::to_string(beta) + ": got " +
                              row->value.str() + ", want " +
                              kBoundaryExact[beta]);
        }
        gate.criterion(1, "boundary invariants exact through beta = 16",
                       bad.empty(), mismatch_list(bad));
        gate.note(
            "beta = 15: the engine value -87325406388675/268435456 is "
            "negative, matching the exact reference column and the "
            "period-16 sign pattern; rounded magnitude listings that show "
            "325312.49 without a sign drop it.");
    }

    // ---- criterion 2: boundary invariants, rounded display, beta 17..32 --
    {
        std::vector<std::string> bad;
        for (int beta = 17; beta <= 32; ++beta) {
            const TableRow* row = boundary32.find({beta, beta, 0, 0});
            const std::string& want = kBoundaryDisplay[beta - 17];
            if (row == nullptr || row->display != want)
                bad.push_back("beta " + std::to_string(beta) + ": got " +
                              (row ? row->display : "<missing>") + ", want " +
                              want);
        }
        // Anchor the corrected beta = 17 cell to its exact value so the
        // display claim is checkable, not asserted.
        const TableRow* b17 = boundary32.find({17, 17, 0, 0});
        if (b17 == nullptr ||
            !(b17->value ==
              Rational::parse("59493684891093075/4294967296")))
            bad.push_back("beta 17 exact value drifted");
        gate.criterion(
            2, "boundary invariants, 3-significant-digit display, beta 17..32",
            bad.empty(), mismatch_list(bad));
        gate.note(
            "beta = 17: exact value 59493684891093075/4294967296 = "
            "1.3851952...e7, which rounds to 1.39·10⁷ at three "
            "significant digits; a truncated 1.38·10⁷ appears in "
            "some reference listings and is treated as a known misprint "
            "(every other rounded cell, e.g. 8.08·10¹⁰ at "
            "beta = 24 and −8.50·10¹⁹ at beta = 30, "
            "follows round-to-nearest, as does the engine).");
    }

    // ---- criterion 3: interior invariants, exact, beta <= 8 --------------
    {
        InvariantTable interior8 = interior_table(*open, 8);
        std::vector<std::string> bad;
        int cells = 0;
        for (int l3 = 0; l3 <= 3; ++l3) {
            for (int beta = 1; beta <= 8; ++beta) {
                OpenKey key{beta, 0, beta - 2 * l3, l3};
                const TableRow* row = interior8.find(key);
                ++cells;
                if (row == nullptr) {
                    bad.push_back("missing (" + std::to_string(beta) + ", l3=" +
                                  std::to_string(l3) + ")");
                    continue;
                }
                if (row->value.str() != kInterior[l3][beta - 1])
                    bad.push_back("(" + std::to_string(beta) + ", l3=" +
                                  std::to_string(l3) + "): got " +
                                  row->value.str() + ", want " +
                                  kInterior[l3][beta - 1]);
            }
        }
        gate.criterion(3,
                       "interior invariants exact, all 32 cells incl. "
                       "structural zeros",
                       bad.empty() && cells == 32, mismatch_list(bad));
    }

    // ---- criterion 4: derived beta = 2 family via the recursions ---------
    {
        OpenEngine fresh(closed);
        bool ok = fresh.recursion_c({2, 0, 2, 0}) == Rational(-35, 64) &&
                  fresh.recursion_a({2, 1, 1, 0}) == Rational(-9, 16) &&
                  fresh.recursion_b({2, 2, 0, 0}) == Rational(5, 4) &&
                  fresh.invariant(OpenKey{2, 0, 2, 0}) == Rational(-35, 64) &&
                  fresh.invariant(OpenKey{2, 1, 1, 0}) == Rational(-9, 16) &&
                  fresh.invariant(OpenKey{2, 2, 0, 0}) == Rational(5, 4);
        gate.criterion(4,
                       "beta = 2 family produced by the recursion routes "
                       "(-35/64, -9/16, 5/4)",
                       ok);
    }

    // ---- criterion 5: closed-side seeds, WDVV residuals, cross-checks ----
    {
        std::vector<std::string> bad;
        if (!(closed->invariant(1, {0, 0, 0, 2}) == Rational(1)))
            bad.push_back("GW_1(D3,D3) != 1");
        if (!(closed->invariant(1, {0, 0, 2, 1}) == Rational(1)))
            bad.push_back("GW_1(D2,D2,D3) != 1");
        if (!(closed->invariant(1, {0, 0, 4, 0}) == Rational(2)))
            bad.push_back("N_1(4,0) != 2");
        if (!(closed->invariant(2, {0, 0, 8, 0}) == Rational(92)))
            bad.push_back("N_2(8,0) != 92");
        long residuals = 0;
        bool residual_ok = true;
        const int monomials[7][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0},
                                     {1, 1}, {3, 0}, {0, 2}};
        for (int d = 1; d <= 3 && residual_ok; ++d)
            for (int i = 0; i <= 3 && residual_ok; ++i)
                for (int j = 0; j <= 3 && residual_ok; ++j)
                    for (int k = 0; k <= 3 && residual_ok; ++k)
                        for (int l = 0; l <= 3 && residual_ok; ++l)
                            for (const auto& ab : monomials) {
                                ++residuals;
                                if (!closed
                                         ->wdvv_residual(i, j, k, l, d, ab[0],
                                                         ab[1])
                                         .is_zero()) {
                                    residual_ok = false;
                                    bad.push_back(
                                        "nonzero residual at d=" +
                                        std::to_string(d));
                                    break;
                                }
                            }
        gate.criterion(5,
                       "closed seeds, classical counts, and WDVV residuals "
                       "(d <= 3, " +
                           std::to_string(residuals) + " samples)",
                       bad.empty(), mismatch_list(bad));
    }

    // ---- criterion 6: ring presentation and associativity ----------------
    {
        QuantumProduct qp(open);
        PresentationReport pres = qp.verify_presentation();
        AssociativityReport assoc = qp.associativity_check();
        std::vector<std::string> bad;
        if (!pres.all_hold)
            for (const auto& r : pres.relations)
                if (!r.holds) bad.push_back("relation " + r.name + " fails");
        if (!assoc.ok()) bad.push_back("associativity/commutativity fails");
        if (assoc.triples_checked != 125)
            bad.push_back("expected 125 triples, saw " +
                          std::to_string(assoc.triples_checked));
        gate.criterion(6,
                       "ring presentation (5 relations) and associativity "
                       "on 125 triples",
                       bad.empty(), mismatch_list(bad));
    }

    // ---- criterion 7: left-inverse dependence -----------------------------
    {
        std::vector<std::string> bad;
        PrCertificate cert = pr_certificate(*open);
        if (!(cert.p_from_g3_pair == Rational(-1, 4)))
            bad.push_back("first solved p = " + cert.p_from_g3_pair.str());
        if (!(cert.p_from_g2g2g3 == Rational(-11, 32)))
            bad.push_back("second solved p = " + cert.p_from_g2g2g3.str());
        if (cert.verdict != "inconsistent")
            bad.push_back("verdict = " + cert.verdict);
        InvariantTable interior8 = interior_table(*open, 8);
        InvariantTable shifted = pr_shift(*closed, interior8, Rational(-1, 4));
        const TableRow* s1 = shifted.find({4, 0, 0, 2});
        const TableRow* s2 = shifted.find({4, 0, 2, 1});
        if (s1 == nullptr || !s1->value.is_zero() || s1->display != "0")
            bad.push_back("shifted (4,0;0,2) not zeroed");
        if (s2 == nullptr || !(s2->value == Rational(-3, 32)))
            bad.push_back("shifted (4,0;2,1) != -3/32");
        for (std::size_t r = 0; r < interior8.rows.size(); ++r) {
            const TableRow& a = interior8.rows[r];
            const TableRow& b = shifted.rows[r];
            if (a.key.beta % 4 != 0) {
                if (!(a.value == b.value) || a.display != b.display) {
                    bad.push_back("row outside 4Z moved");
                    break;
                }
            }
        }
        gate.criterion(7,
                       "shift certificate (-1/4 vs -11/32, inconsistent) "
                       "and shifted-table spot checks",
                       bad.empty(), mismatch_list(bad));
    }

    // ---- criterion 8: denominator structure -------------------------------
    {
        DenominatorAudit audit_b = denominator_audit(boundary32);
        InvariantTable interior8 = interior_table(*open, 8);
        DenominatorAudit audit_i = denominator_audit(interior8);
        std::vector<std::string> bad;
        if (!audit_b.boundary_rows_power_of_four ||
            !audit_b.power_of_four_violations.empty())
            bad.push_back("boundary table beta <= 32 not all powers of 4");
        if (!audit_b.all_rows_power_of_two)
            bad.push_back("boundary table has a non-power-of-2 denominator");
        if (!audit_i.all_rows_power_of_two ||
            !audit_i.power_of_two_violations.empty())
            bad.push_back("interior table beta <= 8 not all powers of 2");
        gate.criterion(8,
                       "denominators: powers of 4 on the boundary table "
                       "(beta <= 32), powers of 2 on the interior table",
                       bad.empty(), mismatch_list(bad));
    }

    // ---- criterion 9: sign periodicity and monotonicity -------------------
    {
        std::vector<std::string> bad;
        InvariantTable boundary24 = boundary_table(*open, 24);
        SignPeriodicityReport period = sign_periodicity(boundary24);
        if (!period.holds) bad.push_back("sign periodicity fails");
        bool skipped_zero_pair = false;
        for (const PeriodPair& pair : period.pairs)
            if (pair.beta_low == 8 && pair.skipped) skipped_zero_pair = true;
        if (!skipped_zero_pair)
            bad.push_back("the zero-valued pair (8, 16) was not skipped");
        std::vector<int> violations = monotonicity_violations(boundary32);
        std::vector<int> large;
        for (int beta : violations)
            if (beta >= 6) large.push_back(beta);
        if (large != std::vector<int>{8, 16, 24, 32})
            bad.push_back("violations at beta >= 6 differ from {8,16,24,32}");
        gate.criterion(9,
                       "sign flips beta -> beta+8 through 24; monotonicity "
                       "violations at beta >= 6 are exactly {8,16,24,32}",
                       bad.empty(), mismatch_list(bad));
        std::string all;
        for (int beta : violations) all += " " + std::to_string(beta);
        gate.note("monotonicity violations at beta_max = 32 (all):" + all +
                  "; entries below 6 are sporadic small-beta drops and are "
                  "reported, not gated.");
    }

    // ---- criterion 10: substitution experiment ----------------------------
    {
        std::vector<std::string> bad;
        Rational v = Rational::parse("-46912496118431/17592186044416");
        OverrideReport report = override_check(closed, v, 4);
        if (!report.gated_rows_power_of_two)
            bad.push_back("a k <= 4 denominator is not a power of 2");
        if (report.rows.size() != 5) {
            bad.push_back("expected rows k = 1..5");
        } else {
            const OverrideRow& last = report.rows.back();
            if (last.k != 5 || last.value.den() % 7 != 0)
                bad.push_back("7 does not divide the k = 5 denominator");
            else
                gate.note("override with the reference v: OGW(5,5) = " +
                          last.value.str() + ", denominator factors " +
                          [&] {
                              std::string s;
                              for (const auto& [prime, exp] :
                                   last.denominator_factors.primes) {
                                  if (!s.empty()) s += " * ";
                                  s += prime.get_str();
                                  if (exp > 1)
                                      s += "^" + std::to_string(exp);
                              }
                              return s;
                          }());
        }
        gate.criterion(10,
                       "override v102: power-of-2 denominators through k = 4, "
                       "prime 7 enters at k = 5",
                       bad.empty(), mismatch_list(bad));
    }

    // ---- criterion 11: property suites ------------------------------------
    {
        std::vector<std::string> bad;

        // Axiom involutions and commutation.
        InvariantTable boundary10 = boundary_table(*open, 10);
        InvariantTable interior6 = interior_table(*open, 6);
        auto tables_equal = [](const InvariantTable& a,
                               const InvariantTable& b) {
            if (a.rows.size() != b.rows.size()) return false;
            for (std::size_t i = 0; i < a.rows.size(); ++i) {
                if (!(a.rows[i].key == b.rows[i].key) ||
                    !(a.rows[i].value == b.rows[i].value) ||
                    a.rows[i].display != b.rows[i].display)
                    return false;
            }
            return true;
        };
        for (const InvariantTable* t : {&boundary10, &interior6}) {
            if (!tables_equal(orientation_flip(orientation_flip(*t)), *t))
                bad.push_back("orientation_flip not an involution");
            if (!tables_equal(spin_flip(spin_flip(*t)), *t))
                bad.push_back("spin_flip not an involution");
            if (!tables_equal(orientation_flip(spin_flip(*t)),
                              spin_flip(orientation_flip(*t))))
                bad.push_back("flips do not commute");
        }
        if (!(orientation_flip(boundary10).find({2, 2, 0, 0})->value ==
              Rational(-5, 4)))
            bad.push_back("orientation_flip sign at (2,2)");
        if (!(spin_flip(interior6).find({1, 0, 1, 0})->value ==
              Rational(-1, 4)))
            bad.push_back("spin_flip sign at (1,0;1,0)");

        // pr_shift is additive in p.
        {
            Rational p(7, 16);
            InvariantTable t1 = pr_shift(*closed, interior6, p);
            InvariantTable t2 = pr_shift(*closed, t1, -p);
            if (!tables_equal(t2, interior6))
                bad.push_back("pr_shift round trip failed");
        }

        // Wall-crossing: one extra point-like interior constraint equals one
        // extra boundary point with a sign.  Probes are degree balanced at
        // k+1 so the compared values are nonzero, not 0 == 0.
        {
            struct Probe {
                int beta, k;
                RawConstraints eta;
            };
            const Probe probes[] = {
                {3, 1, {0, 0, 1, 0, 0}}, {4, 1, {0, 0, 0, 1, 0}},
                {5, 1, {0, 0, 1, 1, 0}}, {6, 2, {0, 0, 1, 1, 0}},
                {4, 2, {0, 0, 1, 0, 0}},
            };
            int nonzero = 0;
            for (const Probe& probe : probes) {
                RawConstraints with_gd = probe.eta;
                ++with_gd.cd;
                Rational lhs =
                    open->invariant(probe.beta, probe.k + 1, probe.eta);
                Rational rhs =
                    -open->invariant(probe.beta, probe.k, with_gd);
                if (!(lhs == rhs)) {
                    bad.push_back("wall-crossing failed at beta " +
                                  std::to_string(probe.beta));
                    break;
                }
                if (!lhs.is_zero()) ++nonzero;
            }
            // Two trades in a row: the signs cancel.
            if (!(open->invariant(6, 2, {0, 0, 2, 0, 2}) ==
                  open->invariant(6, 4, {0, 0, 2, 0, 0})))
                bad.push_back("double wall-crossing failed");
            if (nonzero < 3)
                bad.push_back("wall-crossing probes were mostly vacuous");
        }

        // Divisor linearity: each G1 insertion multiplies by beta/4.
        {
            const OpenKey probes[] = {
                {3, 2, 1, 0}, {4, 2, 0, 1}, {5, 5, 0, 0}, {6, 2, 2, 1}};
            for (const OpenKey& key : probes) {
                RawConstraints eta{0, 0, key.l2, key.l3, 0};
                RawConstraints with_g1 = eta;
                ++with_g1.c1;
                Rational base = open->invariant(key.beta, key.k, eta);
                Rational lifted = open->invariant(key.beta, key.k, with_g1);
                if (!(lifted == Rational(key.beta, 4) * base)) {
                    bad.push_back("divisor linearity failed at beta " +
                                  std::to_string(key.beta));
                    break;
                }
                RawConstraints with_two = with_g1;
                ++with_two.c1;
                if (!(open->invariant(key.beta, key.k, with_two) ==
                      Rational(key.beta, 4) * lifted)) {
                    bad.push_back("double divisor insertion failed");
                    break;
                }
            }
        }

        // Cross-recursion: wherever both reductions apply they agree with
        // each other and with the dispatched value.
        {
            int cross_checked = 0;
            bool cross_ok = true;
            for (int beta = 2; beta <= 8 && cross_ok; ++beta)
                for (int k = 2; k <= beta && cross_ok; ++k)
                    for (int l3 = 0; l3 <= 3 && cross_ok; ++l3) {
                        int l2 = beta - k - 2 * l3;
                        if (l2 < 0 || l2 + l3 < 2) continue;
                        OpenKey key{beta, k, l2, l3};
                        Rational via_b = open->recursion_b(key);
                        Rational via_c = open->recursion_c(key);
                        Rational via_dispatch = open->invariant(key);
                        ++cross_checked;
                        if (!(via_b == via_c) || !(via_b == via_dispatch)) {
                            cross_ok = false;
                            bad.push_back("recursions disagree at " +
                                          std::to_string(beta) + "," +
                                          std::to_string(k));
                        }
                    }
            if (cross_checked == 0) {
                bad.push_back("cross-recursion probe set was empty");
            } else {
                gate.note("cross-recursion agreement checked on " +
                          std::to_string(cross_checked) +
                          " keys with k >= 2 and l2 + l3 >= 2, beta <= 8.");
            }
        }

        // Cache determinism: a shuffled evaluation order must reproduce the
        // identical memo, and the plain-text cache must round-trip it.
        {
            std::vector<OpenKey> keys;
            for (int beta = 1; beta <= 8; ++beta) {
                keys.push_back({beta, beta, 0, 0});
                for (int l3 = 0; l3 <= 3; ++l3)
                    if (beta - 2 * l3 >= 0)
                        keys.push_back({beta, 0, beta - 2 * l3, l3});
            }
            OpenEngine ordered(closed);
            for (const OpenKey& key : keys) ordered.invariant(key);
            for (unsigned seed : {12345u, 67890u}) {
                OpenEngine shuffled(closed);
                std::vector<OpenKey> perm = keys;
                std::mt19937 rng(seed);
                std::shuffle(perm.begin(), perm.end(), rng);
                for (const OpenKey& key : perm) shuffled.invariant(key);
                if (!(ordered.snapshot() == shuffled.snapshot())) {
                    bad.push_back("shuffled evaluation changed the memo (seed " +
                                  std::to_string(seed) + ")");
                    break;
                }
            }
            CacheData data;
            data.open = ordered.snapshot();
            data.closed = closed->snapshot();
            CacheData reparsed = parse_cache(serialize_cache(data));
            if (!(reparsed == data))
                bad.push_back("cache text round trip changed records");
            OpenEngine warm(closed);
            warm.import(reparsed.open);
            for (const OpenKey& key : keys)
                if (!(warm.invariant(key) == ordered.invariant(key))) {
                    bad.push_back("warm-start value drifted");
                    break;
                }
        }

        OpenEngine::DispatchStats stats = open->stats();
        if (stats.rec_a_unexpected != 0)
            bad.push_back("route (a) fired outside k = 1, l = 1");
        gate.criterion(11,
                       "property suites: involutions, wall-crossing, divisor "
                       "linearity, cross-recursion, cache determinism",
                       bad.empty(), mismatch_list(bad));
        gate.note("dispatch totals on the main engine: base = " +
                  std::to_string(stats.base) + ", route (a) = " +
                  std::to_string(stats.rec_a) + ", route (b) = " +
                  std::to_string(stats.rec_b) + ", route (c) = " +
                  std::to_string(stats.rec_c) +
                  "; route (a) is only ever selected for keys with k = 1 and "
                  "a single interior constraint (counter for other shapes: " +
                  std::to_string(stats.rec_a_unexpected) + ").");
    }

    for (const std::string& s : gate.notes) std::cout << "[NOTE] " << s << "\n";
    std::cout << "acceptance: " << gate.passed << "/11 criteria passed\n";
    return gate.failed == 0 ? 0 : 1;
}
