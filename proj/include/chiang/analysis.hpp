#ifndef CHIANG_ANALYSIS_HPP
#define CHIANG_ANALYSIS_HPP

#include <memory>
#include <string>
#include <vector>

#include "chiang/open_gw.hpp"
#include "chiang/rational.hpp"

namespace chiang {

// One table entry: canonical key, exact value, and the human display string
// produced by display_string(value, key.beta).
struct TableRow {
    OpenKey key;
    Rational value;
    std::string display;
};

// A generated table of open invariants plus the context it was generated in.
// Rows are sorted by (beta, k, l2, l3) with no duplicates.  The timestamp is
// in-memory metadata only; serialized forms carry just the rows.
struct InvariantTable {
    std::string kind;  // "boundary", "interior", or "override"
    int beta_max = 0;
    BasicInvariants basics;
    std::string generated_at;  // ISO-8601 UTC
    std::vector<TableRow> rows;

    const TableRow* find(const OpenKey& key) const;
};

// Rendering used by the tables: exact zero prints as "0"; for beta <= 16 a
// fixed-point form with exactly two decimals (round half away from zero); for
// beta > 16 scientific form with three significant digits, "a.bc·10^n" with a
// superscript exponent.  Negatives use U+2212.
std::string display_string(const Rational& value, int beta);

// Rows (beta, beta, 0, 0) for beta = 1..beta_max.
InvariantTable boundary_table(OpenEngine& engine, int beta_max);

// Rows (beta, 0, beta - 2*l3, l3) for l3 = 0..3 and beta = 1..beta_max.
// Rows with beta - 2*l3 < 0 are kept as structural zeros so the table shape
// is uniform; their keys are never sent to the engine.
InvariantTable interior_table(OpenEngine& engine, int beta_max);

std::string table_to_json(const InvariantTable& table);
std::string table_to_csv(const InvariantTable& table);
std::string table_to_markdown(const InvariantTable& table);
std::string table_to_text(const InvariantTable& table);

// ---------------------------------------------------------------------------
// Denominator audit

struct AuditRow {
    OpenKey key;
    Rational value;
    Factorization denominator_factors;
    bool power_of_two = false;
    bool power_of_four = false;
};

struct DenominatorAudit {
    std::vector<AuditRow> rows;
    // Over rows with no interior constraints (l2 == l3 == 0).
    bool boundary_rows_power_of_four = true;
    // Over every row.
    bool all_rows_power_of_two = true;
    std::vector<OpenKey> power_of_four_violations;
    std::vector<OpenKey> power_of_two_violations;
};

DenominatorAudit denominator_audit(const InvariantTable& table);
std::string audit_to_text(const DenominatorAudit& audit);
std::string audit_to_json(const DenominatorAudit& audit);

// ---------------------------------------------------------------------------
// Sign periodicity and monotonicity

struct PeriodPair {
    int beta_low = 0;   // compared against beta_low + 8
    Rational low;
    Rational high;
    bool skipped = false;  // one side exactly zero: sign undefined
    bool consistent = false;
};

struct SignPeriodicityReport {
    int beta_max = 0;
    std::vector<PeriodPair> pairs;
    int checked = 0;
    int skipped = 0;
    std::vector<int> failures;  // beta_low of every inconsistent pair
    bool holds = false;
};

// Requires a boundary table with beta_max >= 17; verifies that the sign of
// OGW_{beta,beta} is opposite to the sign of OGW_{beta+8,beta+8} whenever
// both are nonzero (pairs touching an exact zero, e.g. beta = 8, are skipped).
SignPeriodicityReport sign_periodicity(const InvariantTable& table);
std::string periodicity_to_text(const SignPeriodicityReport& report);
std::string periodicity_to_json(const SignPeriodicityReport& report);

// All beta in 2..beta_max with |OGW_{beta-1,beta-1}| > |OGW_{beta,beta}|,
// ascending.  Requires a boundary table.
std::vector<int> monotonicity_violations(const InvariantTable& table);

// ---------------------------------------------------------------------------
// Dependence on the choice of left inverse P

// Shifted table: rows with beta in 4Z and k = 0 become
//   value' = value - (beta/4) * GW_{beta/4}(D-images of the constraints) * p
// where the D-image of G_j is the absolute class D_j; every other row is
// carried over bit-identically.  Structural-zero rows (negative l2) are also
// untouched.
InvariantTable pr_shift(ClosedEngine& closed, const InvariantTable& table,
                        const Rational& p);

struct PrCertificate {
    Rational p_from_g3_pair;  // solves shifted OGW_{4,0}(G3, G3) = 0
    Rational p_from_g2g2g3;   // solves shifted OGW_{4,0}(G2, G2, G3) = 0
    std::string verdict;      // "consistent" or "inconsistent"
};

// Solves the two beta = 4 interior rows for the shift parameter p; the two
// solutions disagree, so no single choice of p zeroes both rows.
PrCertificate pr_certificate(OpenEngine& engine);
std::string certificate_to_text(const PrCertificate& cert);
std::string certificate_to_json(const PrCertificate& cert);

// ---------------------------------------------------------------------------
// Discrete symmetry transforms (both involutions; they commute)

// Reversing the Lagrangian's orientation rescales OGW_{beta,k} by (-1)^{k+1}.
InvariantTable orientation_flip(const InvariantTable& table);

// Switching to the other relative spin structure rescales by (-1)^beta.
InvariantTable spin_flip(const InvariantTable& table);

// ---------------------------------------------------------------------------
// Substitution experiment: replace the basic invariant OGW_{1,0}(G2)

struct OverrideRow {
    int k = 0;
    Rational value;  // OGW_{k,k} computed with the overridden seed
    Factorization denominator_factors;
    bool power_of_two = false;
};

struct OverrideReport {
    Rational v;
    int m = 0;
    std::vector<OverrideRow> rows;         // k = 1..m+1
    bool gated_rows_power_of_two = false;  // all k <= m rows pass
};

// Rebuilds a fresh open cache with v102 := v (v11, v203 unchanged), computes
// the boundary invariants OGW_{k,k} for k = 1..m+1 and factors their
// denominators.  Throws DivisorZero when the overridden OGW_{2,0}(G2,G2) =
// -1/2 - 3v/16 vanishes (v = -8/3).
OverrideReport override_check(const std::shared_ptr<ClosedEngine>& closed,
                              const Rational& v, int m);
std::string override_to_text(const OverrideReport& report);
std::string override_to_json(const OverrideReport& report);

// Heuristic scan over candidates v = p / 2^t with |p| <= numerator_bound and
// 0 <= t <= denominator_exponent_bound, returning (ascending) those whose
// override_check(v, m) keeps power-of-2 denominators through k = m.
// Candidates that hit DivisorZero are dropped.  Cost grows with the product
// of the bounds; meant for small scans, and nonpositive bounds yield an
// empty list.
std::vector<Rational> v_search(const std::shared_ptr<ClosedEngine>& closed,
                               long numerator_bound,
                               int denominator_exponent_bound, int m);

}  // namespace chiang

#endif  // CHIANG_ANALYSIS_HPP
