// Command-line surface for the open/closed Gromov-Witten engine.
//
// Exit codes: 0 success, 1 a verification report failed, 2 usage or input
// error, 3 internal computation error (cycle, degenerate divisor, ...).

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chiang/analysis.hpp"
#include "chiang/cache_io.hpp"
#include "chiang/closed_gw.hpp"
#include "chiang/errors.hpp"
#include "chiang/open_gw.hpp"
#include "chiang/rational.hpp"
#include "chiang/rqc.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kHardBetaCap = 256;

enum ExitCode {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kInternal = 3,
};

struct CliConfig {
    std::string cache_path;
    int beta_max = 64;
    std::string format = "text";
    std::string override_v;
};

struct Session {
    CliConfig cfg;
    std::shared_ptr<chiang::ClosedEngine> closed;
    std::shared_ptr<chiang::OpenEngine> open;

    void start() {
        closed = std::make_shared<chiang::ClosedEngine>();
        chiang::BasicInvariants basics;
        bool overridden = !cfg.override_v.empty();
        if (overridden) basics.v102 = chiang::Rational::parse(cfg.override_v);
        open = std::make_shared<chiang::OpenEngine>(closed, basics,
                                                    cfg.beta_max);
        if (!cfg.cache_path.empty() &&
            std::filesystem::exists(cfg.cache_path)) {
            chiang::CacheData data = chiang::load_cache(cfg.cache_path);
            closed->import(data.closed);
            if (overridden) {
                std::cerr << "note: --override-v is set; cached open records "
                             "are ignored\n";
            } else {
                open->import(data.open);
            }
        }
    }

    int table_cap(int max_beta, const char* flag) const {
        if (max_beta > cfg.beta_max)
            throw std::invalid_argument(std::string(flag) +
                                        " exceeds --beta-max");
        return max_beta;
    }
};

std::string render_table(const chiang::InvariantTable& table,
                         const std::string& format) {
    if (format == "json") return chiang::table_to_json(table);
    if (format == "csv") return chiang::table_to_csv(table);
    if (format == "md") return chiang::table_to_markdown(table);
    return chiang::table_to_text(table);
}

int basis_index(std::string name) {
    for (char& c : name) c = static_cast<char>(std::tolower(c));
    if (name == "g0") return 0;
    if (name == "g1") return 1;
    if (name == "g2") return 2;
    if (name == "g3") return 3;
    if (name == "gd") return chiang::QHElement::kDiamond;
    throw std::invalid_argument("unknown basis element '" + name +
                                "' (expected g0, g1, g2, g3, or gd)");
}

// ---------------------------------------------------------------------------

struct InvariantArgs {
    int beta = 0;
    int k = 0;
    int g0 = 0, g1 = 0, g2 = 0, g3 = 0, gd = 0;
};

int cmd_invariant(Session& s, const InvariantArgs& a) {
    chiang::RawConstraints raw{a.g0, a.g1, a.g2, a.g3, a.gd};
    chiang::Rational value = s.open->invariant(a.beta, a.k, raw);
    if (value.is_integer())
        std::cout << value.str() << "\n";
    else
        std::cout << value.str() << " (" << value.decimal() << ")\n";
    return kOk;
}

int cmd_table(Session& s, const std::string& kind, int max_beta) {
    s.table_cap(max_beta, "--max-beta");
    chiang::InvariantTable table = kind == "interior"
                                       ? chiang::interior_table(*s.open, max_beta)
                                       : chiang::boundary_table(*s.open, max_beta);
    std::cout << render_table(table, s.cfg.format);
    return kOk;
}

int cmd_closed(Session& s, int degree, int lines, int points) {
    std::cout << s.closed->invariant(degree, {0, 0, lines, points}).str()
              << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_rqc_verify(Session& s) {
    chiang::QuantumProduct qp(s.open);
    chiang::PresentationReport report = qp.verify_presentation();
    if (s.cfg.format == "json") {
        ordered_json o;
        ordered_json rel = ordered_json::array();
        for (const auto& r : report.relations) {
            ordered_json e;
            e["name"] = r.name;
            e["statement"] = r.statement;
            e["residual"] = r.residual.str();
            e["holds"] = r.holds;
            rel.push_back(std::move(e));
        }
        o["relations"] = std::move(rel);
        o["all_hold"] = report.all_hold;
        std::cout << o.dump(2) << "\n";
    } else {
        for (const auto& r : report.relations) {
            std::cout << r.name << ": " << r.statement << "\n    residual = "
                      << r.residual.str()
                      << (r.holds ? "  [holds]" : "  [FAILS]") << "\n";
        }
        std::cout << "all relations hold: "
                  << (report.all_hold ? "yes" : "no") << "\n";
    }
    return report.all_hold ? kOk : kVerificationFailed;
}

int cmd_rqc_assoc(Session& s) {
    chiang::QuantumProduct qp(s.open);
    chiang::AssociativityReport report = qp.associativity_check();
    if (s.cfg.format == "json") {
        ordered_json o;
        o["triples_checked"] = report.triples_checked;
        o["pairs_checked"] = report.pairs_checked;
        o["failed_triples"] = report.failed_triples;
        o["failed_pairs"] = report.failed_pairs;
        o["associative"] = report.associative;
        o["commutative"] = report.commutative;
        std::cout << o.dump(2) << "\n";
    } else {
        std::cout << "triples checked: " << report.triples_checked
                  << ", failures: " << report.failed_triples.size() << "\n"
                  << "pairs checked: " << report.pairs_checked
                  << ", failures: " << report.failed_pairs.size() << "\n"
                  << "associative: " << (report.associative ? "yes" : "no")
                  << ", commutative: " << (report.commutative ? "yes" : "no")
                  << "\n";
    }
    return report.ok() ? kOk : kVerificationFailed;
}

int cmd_rqc_multiply(Session& s, const std::string& a, const std::string& b) {
    chiang::QuantumProduct qp(s.open);
    chiang::QHElement product =
        qp.basis_product(basis_index(a), basis_index(b));
    std::cout << product.str() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string table = "boundary";
    std::string shift_table = "interior";
    int max_beta = 0;  // 0 = per-analysis default
    std::string p = "-1/4";
    std::string v;
    int m = 4;
    long numerator_bound = 4;
    int denominator_exponent_bound = 4;
};

chiang::InvariantTable analyze_table(Session& s, const AnalyzeArgs& a,
                                     int default_boundary,
                                     int default_interior) {
    bool interior = a.table == "interior";
    int max_beta =
        a.max_beta != 0 ? a.max_beta : (interior ? default_interior
                                                 : default_boundary);
    s.table_cap(max_beta, "--max-beta");
    return interior ? chiang::interior_table(*s.open, max_beta)
                    : chiang::boundary_table(*s.open, max_beta);
}

int cmd_analyze_denominators(Session& s, const AnalyzeArgs& a) {
    chiang::InvariantTable table = analyze_table(s, a, 32, 8);
    chiang::DenominatorAudit audit = chiang::denominator_audit(table);
    std::cout << (s.cfg.format == "json" ? chiang::audit_to_json(audit)
                                         : chiang::audit_to_text(audit));
    bool pass = audit.all_rows_power_of_two &&
                (table.kind != "boundary" ||
                 audit.boundary_rows_power_of_four);
    return pass ? kOk : kVerificationFailed;
}

int cmd_analyze_periodicity(Session& s, const AnalyzeArgs& a) {
    int max_beta = a.max_beta != 0 ? a.max_beta : 24;
    s.table_cap(max_beta, "--max-beta");
    chiang::InvariantTable table = chiang::boundary_table(*s.open, max_beta);
    chiang::SignPeriodicityReport report = chiang::sign_periodicity(table);
    std::cout << (s.cfg.format == "json"
                      ? chiang::periodicity_to_json(report)
                      : chiang::periodicity_to_text(report));
    return report.holds ? kOk : kVerificationFailed;
}

int cmd_analyze_monotonicity(Session& s, const AnalyzeArgs& a) {
    int max_beta = a.max_beta != 0 ? a.max_beta : 32;
    s.table_cap(max_beta, "--max-beta");
    chiang::InvariantTable table = chiang::boundary_table(*s.open, max_beta);
    std::vector<int> violations = chiang::monotonicity_violations(table);
    // The structural claim: every multiple of 8 in range violates
    // monotonicity.  Smaller sporadic violations are reported as data.
    bool multiples_complete = true;
    for (int beta = 8; beta <= max_beta; beta += 8) {
        if (std::find(violations.begin(), violations.end(), beta) ==
            violations.end())
            multiples_complete = false;
    }
    if (s.cfg.format == "json") {
        ordered_json o;
        o["beta_max"] = max_beta;
        o["violations"] = violations;
        o["multiples_of_8_complete"] = multiples_complete;
        std::cout << o.dump(2) << "\n";
    } else {
        std::cout << "monotonicity violations (|OGW(beta-1)| > |OGW(beta)|):";
        for (int beta : violations) std::cout << " " << beta;
        std::cout << "\nall multiples of 8 up to " << max_beta
                  << " violated: " << (multiples_complete ? "yes" : "no")
                  << "\n";
    }
    return multiples_complete ? kOk : kVerificationFailed;
}

int cmd_analyze_pr_shift(Session& s, const AnalyzeArgs& a) {
    chiang::Rational p = chiang::Rational::parse(a.p);
    AnalyzeArgs args = a;
    args.table = a.shift_table;
    chiang::InvariantTable table = analyze_table(s, args, 8, 8);
    chiang::InvariantTable shifted = chiang::pr_shift(*s.closed, table, p);
    std::cout << render_table(shifted, s.cfg.format);
    return kOk;
}

int cmd_analyze_pr_certificate(Session& s) {
    chiang::PrCertificate cert = chiang::pr_certificate(*s.open);
    std::cout << (s.cfg.format == "json" ? chiang::certificate_to_json(cert)
                                         : chiang::certificate_to_text(cert));
    // The expected outcome is disagreement between the two solved values;
    // agreement would mean the computed invariants changed.
    return cert.verdict == "inconsistent" ? kOk : kVerificationFailed;
}

int cmd_analyze_override(Session& s, const AnalyzeArgs& a) {
    chiang::Rational v = chiang::Rational::parse(a.v);
    chiang::OverrideReport report = chiang::override_check(s.closed, v, a.m);
    std::cout << (s.cfg.format == "json" ? chiang::override_to_json(report)
                                         : chiang::override_to_text(report));
    return report.gated_rows_power_of_two ? kOk : kVerificationFailed;
}

int cmd_analyze_search_v(Session& s, const AnalyzeArgs& a) {
    std::vector<chiang::Rational> hits = chiang::v_search(
        s.closed, a.numerator_bound, a.denominator_exponent_bound, a.m);
    if (s.cfg.format == "json") {
        ordered_json o = ordered_json::array();
        for (const chiang::Rational& v : hits) o.push_back(v.str());
        std::cout << o.dump(2) << "\n";
    } else {
        for (const chiang::Rational& v : hits) std::cout << v.str() << "\n";
        std::cout << "candidates passing the k <= " << a.m
                  << " gate: " << hits.size() << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

std::string require_cache_path(const Session& s) {
    if (s.cfg.cache_path.empty())
        throw std::invalid_argument(
            "no cache path: pass --cache or set CHIANG_OGW_CACHE");
    return s.cfg.cache_path;
}

int cmd_cache_load(Session& s) {
    std::string path = require_cache_path(s);
    chiang::CacheData data = chiang::load_cache(path);
    std::cout << "loaded " << data.closed.size() << " closed and "
              << data.open.size() << " open records from " << path << "\n";
    return kOk;
}

int cmd_cache_store(Session& s, int max_beta) {
    std::string path = require_cache_path(s);
    s.table_cap(max_beta, "--max-beta");
    chiang::boundary_table(*s.open, max_beta);
    chiang::interior_table(*s.open, max_beta);
    chiang::CacheData data;
    data.open = s.open->snapshot();
    data.closed = s.closed->snapshot();
    chiang::save_cache(path, data);
    std::cout << "stored " << data.closed.size() << " closed and "
              << data.open.size() << " open records to " << path << "\n";
    return kOk;
}

int cmd_cache_clear(Session& s) {
    std::string path = require_cache_path(s);
    bool removed = std::filesystem::remove(path);
    std::cout << (removed ? "removed " : "no cache file at ") << path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact open and closed Gromov-Witten invariants of complex "
        "projective 3-space with its Chiang Lagrangian"};
    app.require_subcommand(1);

    Session session;
    app.add_option("--cache", session.cfg.cache_path,
                   "cache file for memoized invariants")
        ->envname("CHIANG_OGW_CACHE");
    app.add_option("--beta-max", session.cfg.beta_max,
                   "hard cap on the disk class")
        ->check(CLI::Range(2, kHardBetaCap))
        ->capture_default_str();
    app.add_option("--format", session.cfg.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv", "md"}))
        ->capture_default_str();
    app.add_option("--override-v", session.cfg.override_v,
                   "replace the basic invariant OGW_{1,0}(G2)");

    InvariantArgs inv;
    CLI::App* c_inv =
        app.add_subcommand("invariant", "one open invariant, exact");
    c_inv->add_option("--beta", inv.beta, "disk class")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--k", inv.k, "boundary point constraints")
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--g0", inv.g0, "unit constraints")
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--g1", inv.g1, "divisor constraints")
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--g2", inv.g2, "G2 constraints")
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--g3", inv.g3, "G3 constraints")
        ->check(CLI::NonNegativeNumber);
    c_inv->add_option("--gd", inv.gd, "point-like Gd constraints")
        ->check(CLI::NonNegativeNumber);

    std::string table_kind;
    int table_max_beta = 16;
    CLI::App* c_table = app.add_subcommand("table", "invariant table");
    c_table->add_option("kind", table_kind, "boundary or interior")
        ->required()
        ->check(CLI::IsMember({"boundary", "interior"}));
    c_table->add_option("--max-beta", table_max_beta, "largest disk class")
        ->capture_default_str();

    int closed_degree = 1, closed_lines = 0, closed_points = 0;
    CLI::App* c_closed =
        app.add_subcommand("closed", "one closed invariant of CP^3");
    c_closed->add_option("--degree", closed_degree, "curve degree")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c_closed->add_option("--lines", closed_lines, "line incidences")
        ->check(CLI::NonNegativeNumber);
    c_closed->add_option("--points", closed_points, "point constraints")
        ->check(CLI::NonNegativeNumber);

    CLI::App* c_rqc =
        app.add_subcommand("rqc", "small relative quantum cohomology");
    c_rqc->require_subcommand(1);
    CLI::App* c_rqc_verify =
        c_rqc->add_subcommand("verify", "check the ring presentation");
    CLI::App* c_rqc_assoc =
        c_rqc->add_subcommand("assoc", "check associativity on all triples");
    std::string mul_a, mul_b;
    CLI::App* c_rqc_mul =
        c_rqc->add_subcommand("multiply", "product of two basis elements");
    c_rqc_mul->add_option("a", mul_a, "g0..g3 or gd")->required();
    c_rqc_mul->add_option("b", mul_b, "g0..g3 or gd")->required();

    AnalyzeArgs an;
    CLI::App* c_an = app.add_subcommand("analyze", "structural reports");
    c_an->require_subcommand(1);
    CLI::App* c_an_den =
        c_an->add_subcommand("denominators", "denominator factor audit");
    c_an_den->add_option("--table", an.table, "boundary or interior")
        ->check(CLI::IsMember({"boundary", "interior"}))
        ->capture_default_str();
    c_an_den->add_option("--max-beta", an.max_beta,
                         "largest disk class (0 = default for the table)");
    CLI::App* c_an_per =
        c_an->add_subcommand("periodicity", "sign flip across beta -> beta+8");
    c_an_per->add_option("--max-beta", an.max_beta,
                         "largest disk class (0 = 24)");
    CLI::App* c_an_mon = c_an->add_subcommand(
        "monotonicity", "classes where |OGW| drops from beta-1 to beta");
    c_an_mon->add_option("--max-beta", an.max_beta,
                         "largest disk class (0 = 32)");
    CLI::App* c_an_shift = c_an->add_subcommand(
        "pr-shift", "table under a shifted left inverse");
    c_an_shift->add_option("--p", an.p, "shift parameter, rational")
        ->capture_default_str();
    c_an_shift->add_option("--table", an.shift_table, "boundary or interior")
        ->check(CLI::IsMember({"boundary", "interior"}))
        ->capture_default_str();
    c_an_shift->add_option("--max-beta", an.max_beta,
                           "largest disk class (0 = 8)");
    CLI::App* c_an_cert = c_an->add_subcommand(
        "pr-certificate", "two incompatible solutions for the shift");
    CLI::App* c_an_ovr = c_an->add_subcommand(
        "override", "recompute boundary invariants with a replaced seed");
    c_an_ovr->add_option("--v", an.v, "replacement for OGW_{1,0}(G2)")
        ->required();
    c_an_ovr->add_option("--M", an.m, "power-of-2 gate applies through k = M")
        ->check(CLI::Range(1, kHardBetaCap - 1))
        ->capture_default_str();
    CLI::App* c_an_search = c_an->add_subcommand(
        "search-v", "scan dyadic candidates v = p/2^t through the gate");
    c_an_search
        ->add_option("--numerator-bound", an.numerator_bound, "largest |p|")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_an_search
        ->add_option("--denominator-exponent-bound",
                     an.denominator_exponent_bound, "largest t")
        ->check(CLI::Range(0, 62))
        ->capture_default_str();
    c_an_search->add_option("--M", an.m, "gate depth")
        ->check(CLI::Range(1, kHardBetaCap - 1))
        ->capture_default_str();

    int store_max_beta = 16;
    CLI::App* c_cache = app.add_subcommand("cache", "cache file maintenance");
    c_cache->require_subcommand(1);
    CLI::App* c_cache_load =
        c_cache->add_subcommand("load", "validate and summarize the cache");
    CLI::App* c_cache_store = c_cache->add_subcommand(
        "store", "warm both tables and write the cache");
    c_cache_store->add_option("--max-beta", store_max_beta, "warm depth")
        ->capture_default_str();
    CLI::App* c_cache_clear =
        c_cache->add_subcommand("clear", "delete the cache file");

    // Global options (--format, --cache, ...) are accepted after the
    // subcommand as well: unmatched options fall through to the parent.
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* cmd) {
        for (CLI::App* sub :
             cmd->get_subcommands([](const CLI::App*) { return true; })) {
            sub->fallthrough();
            allow_fallthrough(sub);
        }
    };
    allow_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        session.start();
        if (app.got_subcommand(c_inv)) return cmd_invariant(session, inv);
        if (app.got_subcommand(c_table))
            return cmd_table(session, table_kind, table_max_beta);
        if (app.got_subcommand(c_closed))
            return cmd_closed(session, closed_degree, closed_lines,
                              closed_points);
        if (app.got_subcommand(c_rqc)) {
            if (c_rqc->got_subcommand(c_rqc_verify))
                return cmd_rqc_verify(session);
            if (c_rqc->got_subcommand(c_rqc_assoc))
                return cmd_rqc_assoc(session);
            if (c_rqc->got_subcommand(c_rqc_mul))
                return cmd_rqc_multiply(session, mul_a, mul_b);
        }
        if (app.got_subcommand(c_an)) {
            if (c_an->got_subcommand(c_an_den))
                return cmd_analyze_denominators(session, an);
            if (c_an->got_subcommand(c_an_per))
                return cmd_analyze_periodicity(session, an);
            if (c_an->got_subcommand(c_an_mon))
                return cmd_analyze_monotonicity(session, an);
            if (c_an->got_subcommand(c_an_shift))
                return cmd_analyze_pr_shift(session, an);
            if (c_an->got_subcommand(c_an_cert))
                return cmd_analyze_pr_certificate(session);
            if (c_an->got_subcommand(c_an_ovr))
                return cmd_analyze_override(session, an);
            if (c_an->got_subcommand(c_an_search))
                return cmd_analyze_search_v(session, an);
        }
        if (app.got_subcommand(c_cache)) {
            if (c_cache->got_subcommand(c_cache_load))
                return cmd_cache_load(session);
            if (c_cache->got_subcommand(c_cache_store))
                return cmd_cache_store(session, store_max_beta);
            if (c_cache->got_subcommand(c_cache_clear))
                return cmd_cache_clear(session);
        }
        std::cerr << "error: no command dispatched\n";
        return kUsage;
    } catch (const chiang::CacheFormatError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const chiang::CyclicDependency& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const chiang::DivisorZero& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const chiang::WdvvReconstructionFailure& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
