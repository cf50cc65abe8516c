#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chiang/analysis.hpp"
#include "json.hpp"

using chiang::ClosedEngine;
using chiang::InvariantTable;
using chiang::OpenEngine;
using chiang::OpenKey;
using chiang::Rational;
using chiang::TableRow;

namespace {

std::shared_ptr<ClosedEngine> shared_closed() {
    static auto closed = std::make_shared<ClosedEngine>();
    return closed;
}

OpenEngine& engine() {
    static OpenEngine e(shared_closed());
    return e;
}

bool rows_equal(const InvariantTable& a, const InvariantTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (!(a.rows[i].key == b.rows[i].key)) return false;
        if (!(a.rows[i].value == b.rows[i].value)) return false;
        if (a.rows[i].display != b.rows[i].display) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("fixed-point display through beta = 16") {
    CHECK(chiang::display_string(Rational(16005, 4096), 7) == "3.91");
    CHECK(chiang::display_string(Rational(9045, 4), 12) == "2261.25");
    CHECK(chiang::display_string(Rational(-7, 16), 3) == "−0.44");
    CHECK(chiang::display_string(Rational(1, 8), 1) == "0.13");
    CHECK(chiang::display_string(Rational(5, 2), 2) == "2.50");
    CHECK(chiang::display_string(Rational(3), 1) == "3.00");
    CHECK(chiang::display_string(Rational(0), 5) == "0");
    CHECK(chiang::display_string(Rational(-1, 200), 4) == "−0.01");
}

TEST_CASE("scientific display beyond beta = 16") {
    CHECK(chiang::display_string(Rational(0), 20) == "0");
    CHECK(chiang::display_string(Rational(1, 1024), 17) ==
          "9.77·10⁻⁴");
    CHECK(chiang::display_string(Rational(-1, 1024), 20) ==
          "−9.77·10⁻⁴");
    CHECK(chiang::display_string(Rational(76800000000L), 18) ==
          "7.68·10¹⁰");
    // Rounding can carry into the next power of ten.
    CHECK(chiang::display_string(Rational(1999, 200), 17) ==
          "1.00·10¹");
    CHECK(chiang::display_string(Rational(1), 17) == "1.00·10⁰");
}

TEST_CASE("boundary table shape and content") {
    InvariantTable table = chiang::boundary_table(engine(), 8);
    CHECK(table.kind == "boundary");
    CHECK(table.beta_max == 8);
    REQUIRE(table.rows.size() == 8);
    for (int beta = 1; beta <= 8; ++beta) {
        const TableRow& row = table.rows[beta - 1];
        CHECK(row.key == OpenKey{beta, beta, 0, 0});
        CHECK(row.display == chiang::display_string(row.value, beta));
    }
    const TableRow* found = table.find(OpenKey{2, 2, 0, 0});
    REQUIRE(found != nullptr);
    CHECK(found->value == Rational(5, 4));
    CHECK(found->display == "1.25");
    CHECK(table.find(OpenKey{2, 0, 2, 0}) == nullptr);
    CHECK(table.find(OpenKey{8, 8, 0, 0})->value == Rational(0));
}

TEST_CASE("interior table keeps structural zeros") {
    InvariantTable table = chiang::interior_table(engine(), 8);
    CHECK(table.kind == "interior");
    REQUIRE(table.rows.size() == 32);
    CHECK(std::is_sorted(table.rows.begin(), table.rows.end(),
                         [](const TableRow& a, const TableRow& b) {
                             return a.key < b.key;
                         }));
    const TableRow* structural = table.find(OpenKey{1, 0, -1, 1});
    REQUIRE(structural != nullptr);
    CHECK(structural->value == Rational(0));
    CHECK(structural->display == "0");

    CHECK(table.find(OpenKey{2, 0, 2, 0})->value == Rational(-35, 64));
    CHECK(table.find(OpenKey{3, 0, 1, 1})->value == Rational(3, 8));
    CHECK(table.find(OpenKey{7, 0, 1, 3})->value == Rational(7, 32));
    CHECK(table.find(OpenKey{6, 0, 0, 3})->value == Rational(0));
}

TEST_CASE("serialized tables carry rows only and are deterministic") {
    InvariantTable table = chiang::interior_table(engine(), 4);

    OpenEngine other(std::make_shared<ClosedEngine>());
    InvariantTable again = chiang::interior_table(other, 4);
    CHECK(chiang::table_to_json(table) == chiang::table_to_json(again));
    CHECK(chiang::table_to_csv(table) == chiang::table_to_csv(again));
    CHECK(chiang::table_to_markdown(table) == chiang::table_to_markdown(again));
    CHECK(chiang::table_to_text(table) == chiang::table_to_text(again));

    auto parsed = nlohmann::json::parse(chiang::table_to_json(table));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == table.rows.size());
    CHECK(parsed[0]["beta"] == 1);
    CHECK(parsed[0].contains("value"));
    CHECK(parsed[0].contains("display"));
    for (const auto& row : parsed) CHECK_FALSE(row.contains("generated_at"));

    std::string csv = chiang::table_to_csv(table);
    CHECK(csv.rfind("beta,k,l2,l3,value,display\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(table.rows.size()) + 1);

    std::string md = chiang::table_to_markdown(table);
    CHECK(md.rfind("| beta |", 0) == 0);
    CHECK(chiang::table_to_text(table).find("display") != std::string::npos);
}

TEST_CASE("denominator audit of the boundary table") {
    chiang::DenominatorAudit audit =
        chiang::denominator_audit(chiang::boundary_table(engine(), 16));
    CHECK(audit.boundary_rows_power_of_four);
    CHECK(audit.all_rows_power_of_two);
    CHECK(audit.power_of_four_violations.empty());
    CHECK(audit.power_of_two_violations.empty());
    REQUIRE(audit.rows.size() == 16);
    for (const auto& row : audit.rows) {
        CHECK(row.power_of_two);
        CHECK(row.power_of_four);
        CHECK(row.denominator_factors.complete());
    }
}

TEST_CASE("denominator audit of the interior table") {
    chiang::DenominatorAudit audit =
        chiang::denominator_audit(chiang::interior_table(engine(), 8));
    CHECK(audit.all_rows_power_of_two);
    CHECK(audit.power_of_two_violations.empty());
    auto it = std::find_if(audit.rows.begin(), audit.rows.end(),
                           [](const chiang::AuditRow& r) {
                               return r.key == OpenKey{3, 0, 1, 1};
                           });
    REQUIRE(it != audit.rows.end());
    CHECK(it->value == Rational(3, 8));
    CHECK(it->power_of_two);
    CHECK_FALSE(it->power_of_four);
}

TEST_CASE("audits flag odd prime factors") {
    InvariantTable table;
    table.kind = "boundary";
    table.beta_max = 2;
    table.rows.push_back(TableRow{OpenKey{1, 1, 0, 0}, Rational(1, 7),
                                  chiang::display_string(Rational(1, 7), 1)});
    table.rows.push_back(TableRow{OpenKey{2, 2, 0, 0}, Rational(1, 4),
                                  chiang::display_string(Rational(1, 4), 2)});
    chiang::DenominatorAudit audit = chiang::denominator_audit(table);
    CHECK_FALSE(audit.all_rows_power_of_two);
    CHECK_FALSE(audit.boundary_rows_power_of_four);
    REQUIRE(audit.power_of_two_violations.size() == 1);
    CHECK(audit.power_of_two_violations[0] == OpenKey{1, 1, 0, 0});
    REQUIRE(audit.power_of_four_violations.size() == 1);
    CHECK(audit.power_of_four_violations[0] == OpenKey{1, 1, 0, 0});
    CHECK_FALSE(chiang::audit_to_text(audit).empty());
    CHECK(nlohmann::json::parse(chiang::audit_to_json(audit)).is_object());
}

TEST_CASE("sign periodicity needs enough boundary data") {
    CHECK_THROWS_AS(chiang::sign_periodicity(chiang::boundary_table(engine(), 16)),
                    std::invalid_argument);
    CHECK_THROWS_AS(chiang::sign_periodicity(chiang::interior_table(engine(), 20)),
                    std::invalid_argument);
}

TEST_CASE("sign periodicity holds with the zero pair skipped") {
    chiang::SignPeriodicityReport report =
        chiang::sign_periodicity(chiang::boundary_table(engine(), 24));
    CHECK(report.holds);
    CHECK(report.beta_max == 24);
    CHECK(report.checked == 15);
    CHECK(report.skipped == 1);
    CHECK(report.failures.empty());
    REQUIRE(report.pairs.size() == 16);
    for (const auto& pair : report.pairs) {
        CAPTURE(pair.beta_low);
        if (pair.beta_low == 8) {
            CHECK(pair.skipped);
            CHECK(pair.low == Rational(0));
        } else {
            CHECK_FALSE(pair.skipped);
            CHECK(pair.consistent);
            CHECK(pair.low.sign() == -pair.high.sign());
        }
    }
    CHECK_FALSE(chiang::periodicity_to_text(report).empty());
    CHECK(nlohmann::json::parse(chiang::periodicity_to_json(report)).is_object());
}

TEST_CASE("monotonicity violations are exactly the known drops") {
    std::vector<int> v16 =
        chiang::monotonicity_violations(chiang::boundary_table(engine(), 16));
    CHECK(v16 == std::vector<int>{2, 3, 5, 8, 16});
    std::vector<int> v32 =
        chiang::monotonicity_violations(chiang::boundary_table(engine(), 32));
    CHECK(v32 == std::vector<int>{2, 3, 5, 8, 16, 24, 32});
}

TEST_CASE("shift experiment moves only class-4Z interior rows") {
    InvariantTable interior = chiang::interior_table(engine(), 8);
    ClosedEngine& closed = engine().closed();
    const Rational p(-1, 4);
    InvariantTable shifted = chiang::pr_shift(closed, interior, p);
    REQUIRE(shifted.rows.size() == interior.rows.size());

    CHECK(shifted.find(OpenKey{4, 0, 0, 2})->value == Rational(0));
    CHECK(shifted.find(OpenKey{4, 0, 0, 2})->display == "0");
    CHECK(shifted.find(OpenKey{4, 0, 2, 1})->value == Rational(-3, 32));

    for (std::size_t i = 0; i < interior.rows.size(); ++i) {
        const TableRow& before = interior.rows[i];
        const TableRow& after = shifted.rows[i];
        CHECK(before.key == after.key);
        if (before.key.beta % 4 != 0 || before.key.l2 < 0) {
            CHECK(before.value == after.value);
            CHECK(before.display == after.display);
        }
    }

    // Shifting back restores the original table.
    InvariantTable restored = chiang::pr_shift(closed, shifted, -p);
    CHECK(rows_equal(restored, interior));

    // Boundary rows carry k = beta and are never shifted.
    InvariantTable boundary = chiang::boundary_table(engine(), 8);
    CHECK(rows_equal(chiang::pr_shift(closed, boundary, p), boundary));
}

TEST_CASE("no single shift parameter zeroes both class-4 rows") {
    chiang::PrCertificate cert = chiang::pr_certificate(engine());
    CHECK(cert.p_from_g3_pair == Rational(-1, 4));
    CHECK(cert.p_from_g2g2g3 == Rational(-11, 32));
    CHECK(cert.verdict == "inconsistent");
    CHECK_FALSE(chiang::certificate_to_text(cert).empty());
    CHECK(nlohmann::json::parse(chiang::certificate_to_json(cert)).is_object());
}

TEST_CASE("orientation and spin transforms are commuting involutions") {
    InvariantTable boundary = chiang::boundary_table(engine(), 6);
    InvariantTable interior = chiang::interior_table(engine(), 6);

    InvariantTable o = chiang::orientation_flip(boundary);
    // k = 1 rows keep their sign, k = 2 rows flip.
    CHECK(o.find(OpenKey{1, 1, 0, 0})->value == Rational(3));
    CHECK(o.find(OpenKey{2, 2, 0, 0})->value == Rational(-5, 4));
    CHECK(o.find(OpenKey{2, 2, 0, 0})->display == "−1.25");

    InvariantTable s = chiang::spin_flip(boundary);
    // Odd classes flip, even classes stay.
    CHECK(s.find(OpenKey{1, 1, 0, 0})->value == Rational(-3));
    CHECK(s.find(OpenKey{2, 2, 0, 0})->value == Rational(5, 4));

    // Interior rows have k = 0, so orientation reversal flips them all.
    InvariantTable oi = chiang::orientation_flip(interior);
    CHECK(oi.find(OpenKey{2, 0, 2, 0})->value == Rational(35, 64));

    for (const InvariantTable& t : {boundary, interior}) {
        CHECK(rows_equal(chiang::orientation_flip(chiang::orientation_flip(t)), t));
        CHECK(rows_equal(chiang::spin_flip(chiang::spin_flip(t)), t));
        CHECK(rows_equal(chiang::spin_flip(chiang::orientation_flip(t)),
                         chiang::orientation_flip(chiang::spin_flip(t))));
    }
}

TEST_CASE("seed override reproduces the reference column at the reference value") {
    chiang::OverrideReport report =
        chiang::override_check(shared_closed(), Rational(1, 4), 3);
    CHECK(report.v == Rational(1, 4));
    CHECK(report.m == 3);
    REQUIRE(report.rows.size() == 4);
    const Rational expected[4] = {Rational(3), Rational(5, 4), Rational(-7, 16),
                                  Rational(-3, 4)};
    for (int i = 0; i < 4; ++i) {
        CHECK(report.rows[i].k == i + 1);
        CHECK(report.rows[i].value == expected[i]);
        CHECK(report.rows[i].power_of_two);
    }
    CHECK(report.gated_rows_power_of_two);
}

TEST_CASE("seed override rejects the degenerate value and bad gates") {
    CHECK_THROWS_AS(chiang::override_check(shared_closed(), Rational(-8, 3), 2),
                    chiang::DivisorZero);
    CHECK_THROWS_AS(chiang::override_check(shared_closed(), Rational(1, 4), 0),
                    std::invalid_argument);
}

TEST_CASE("the reference alternative seed lets an odd prime in at k = 5") {
    Rational v = Rational::parse("-46912496118431/17592186044416");
    chiang::OverrideReport report = chiang::override_check(shared_closed(), v, 4);
    CHECK(report.gated_rows_power_of_two);
    REQUIRE(report.rows.size() == 5);
    const chiang::OverrideRow& last = report.rows.back();
    CHECK(last.k == 5);
    CHECK_FALSE(last.power_of_two);
    CHECK(last.value.den() % 7 == 0);
    CHECK_FALSE(chiang::override_to_text(report).empty());
    CHECK(nlohmann::json::parse(chiang::override_to_json(report)).is_object());
}

TEST_CASE("the candidate scan enumerates dyadic values once and sorted") {
    std::vector<Rational> hits = chiang::v_search(shared_closed(), 4, 2, 1);
    // 9 integer candidates plus 4 odd numerators at each of t = 1, 2; all
    // pass a k <= 1 gate.
    CHECK(hits.size() == 17);
    CHECK(std::is_sorted(hits.begin(), hits.end()));
    CHECK(std::adjacent_find(hits.begin(), hits.end()) == hits.end());
    CHECK(std::find(hits.begin(), hits.end(), Rational(1, 4)) != hits.end());
    CHECK(std::find(hits.begin(), hits.end(), Rational(-3, 4)) != hits.end());
    CHECK(hits.front() == Rational(-4));
    CHECK(hits.back() == Rational(4));

    for (const Rational& v : hits) {
        CAPTURE(v.str());
        CHECK(chiang::override_check(shared_closed(), v, 1)
                  .gated_rows_power_of_two);
    }

    CHECK(chiang::v_search(shared_closed(), 0, 2, 1).empty());
    CHECK(chiang::v_search(shared_closed(), 2, -1, 1).empty());
}
