// qrdist: count quadratic residues in arithmetic subsets of [1, p-1],
// evaluate character sums, class numbers and L(1, chi), and run the
// verification harness over prime ranges.
//
// Exit codes: 0 success / all checks pass, 1 a verified failure was found,
// 2 usage or domain error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrdist/charsum.hpp"
#include "qrdist/classnum.hpp"
#include "qrdist/core_arith.hpp"
#include "qrdist/counts.hpp"
#include "qrdist/harness.hpp"

using namespace qrdist;

namespace {

enum class Format { Table, Csv, Json };

Format pick_format(const std::string& requested) {
    if (requested == "table") return Format::Table;
    if (requested == "csv") return Format::Csv;
    if (requested == "json") return Format::Json;
    // default: table on a terminal, csv when redirected
    return isatty(fileno(stdout)) ? Format::Table : Format::Csv;
}

std::string rational_display(const Rational& r) {
    return r.str() + " (" + format_double(r.to_double()) + ")";
}

void write_output(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write output file: " + output_path);
    out << text;
}

int cmd_count(uint64_t p, const SubsetSelector& sel, double eps, Format format) {
    const ClassifiedPrime cp = classify(p);
    const CountRecord rec = count_brute(p, sel, eps);
    switch (format) {
        case Format::Csv:
            std::cout << count_record_csv_header() << "\n"
                      << count_record_csv_row(cp, rec) << "\n";
            break;
        case Format::Json: {
            nlohmann::ordered_json doc;
            doc["p"] = rec.p;
            doc["class4"] = cp.r4;
            doc["class8"] = cp.r8;
            doc["class12"] = cp.r12;
            doc["selector"] = rec.selector.name();
            doc["Q"] = rec.residues;
            doc["N"] = rec.nonresidues;
            doc["size"] = rec.size;
            doc["main_term"] = rec.main_term.str();
            doc["gap"] = rec.gap.str();
            doc["eps"] = rec.eps;
            doc["normalized_gap"] = rec.normalized_gap;
            std::cout << doc.dump(2) << "\n";
            break;
        }
        case Format::Table:
            std::cout << "p=" << rec.p << " (r4=" << cp.r4 << ", r8=" << cp.r8
                      << ", r12=" << cp.r12 << ") selector=" << rec.selector.name() << "\n"
                      << "Q=" << rec.residues << " N=" << rec.nonresidues << " size=" << rec.size
                      << "\n"
                      << "main_term=" << rational_display(rec.main_term)
                      << " gap=" << rational_display(rec.gap) << "\n"
                      << "normalized_gap(eps=" << format_double(eps)
                      << ")=" << format_double(rec.normalized_gap) << "\n";
            break;
    }
    return 0;
}

int cmd_sum(uint64_t p, int den, const std::string& dump_path) {
    const int64_t s = partial_sum(p, 1, den);
    std::cout << "S(1, " << p << "/" << den << ") = " << s << "\n";
    if (!dump_path.empty()) {
        std::ofstream out(dump_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write dump file: " + dump_path);
        dump_profile_csv(p, out);
        std::cerr << "profile written to " << dump_path << "\n";
    }
    return 0;
}

int cmd_classnum(int64_t d, uint64_t p, const std::string& family) {
    QuadCharacter chi;
    bool have_character = false;
    if (p != 0) {
        CharKind kind;
        if (family == "p")
            kind = CharKind::ChiP;
        else if (family == "3p")
            kind = CharKind::Chi3P;
        else if (family == "4p")
            kind = CharKind::Chi4P;
        else
            throw std::invalid_argument("classnum: family must be one of p, 3p, 4p");
        chi = make_character(kind, p);
        if (!chi.discriminant)
            throw std::invalid_argument("classnum: chi_" + family +
                                        " with p=" + std::to_string(p) +
                                        " is even; no imaginary quadratic discriminant");
        d = *chi.discriminant;
        have_character = true;
    } else {
        try {
            chi = discriminant_character(d);
            have_character = true;
        } catch (const std::invalid_argument&) {
            have_character = false;  // forms oracle still applies
        }
    }
    const int64_t h_forms = class_number_forms(d);
    std::cout << "d=" << d << " h=" << h_forms << " w=" << unit_count(d);
    if (have_character) {
        const int64_t h_weighted = class_number_weighted(chi);
        std::cout << " (forms=" << h_forms << ", weighted=" << h_weighted << ", "
                  << (h_forms == h_weighted ? "agree" : "DISAGREE") << ")\n";
        if (h_forms != h_weighted) return 1;
    } else {
        std::cout << " (forms oracle; no character family for this discriminant)\n";
    }
    return 0;
}

int cmd_lvalue(uint64_t p, const std::string& family, uint64_t terms) {
    CharKind kind;
    if (family == "p")
        kind = CharKind::ChiP;
    else if (family == "3p")
        kind = CharKind::Chi3P;
    else if (family == "4p")
        kind = CharKind::Chi4P;
    else
        throw std::invalid_argument("lvalue: family must be one of p, 3p, 4p");
    const QuadCharacter chi = make_character(kind, p);
    if (!chi.odd)
        throw std::invalid_argument(
            "lvalue: chi_" + family + " with p=" + std::to_string(p) +
            " is even; the class number formula applies to odd characters only "
            "(try --family 3p or 4p for p = 1 mod 4, --family p for p = 3 mod 4)");
    const LValueRecord exact = l_value_exact(chi);
    const auto [series, tail] = l_value_series(chi, terms);
    const int64_t d = *chi.discriminant;
    const double diff = std::fabs(series - exact.exact_value);
    std::printf("chi_%s p=%llu modulus=%llu discriminant=%lld h=%lld w=%d\n", family.c_str(),
                static_cast<unsigned long long>(p), static_cast<unsigned long long>(chi.modulus),
                static_cast<long long>(d), static_cast<long long>(class_number_forms(d)),
                unit_count(d));
    std::printf("L(1,chi) exact  = %.5f\n", exact.exact_value);
    std::printf("series(%llu terms) = %.5f  tail_bound = %.3e  |diff| = %.3e %s\n",
                static_cast<unsigned long long>(terms), series, tail, diff,
                diff <= tail ? "(within bound)" : "(OUT OF BOUND)");
    return diff <= tail ? 0 : 1;
}

struct ExpectMismatch {
    std::string what;
};

// Expectation snapshot: JSON {"claims": {"<id>": {"pass": n, "fail": m}, ...}}.
// Only ids present in the file are compared.
std::vector<ExpectMismatch> compare_expectations(const VerificationReport& report,
                                                 const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read expectation file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<ExpectMismatch> mismatches;
    if (!doc.contains("claims")) return mismatches;
    for (const auto& [id, expected] : doc["claims"].items()) {
        const auto it = std::find_if(report.claims.begin(), report.claims.end(),
                                     [&](const ClaimTally& t) { return to_string(t.id) == id; });
        if (it == report.claims.end()) {
            mismatches.push_back({"claim " + id + " not present in the run"});
            continue;
        }
        const uint64_t want_pass = expected.value("pass", uint64_t{0});
        const uint64_t want_fail = expected.value("fail", uint64_t{0});
        if (it->pass != want_pass || it->fail != want_fail) {
            mismatches.push_back({"claim " + id + ": got pass=" + std::to_string(it->pass) +
                                  " fail=" + std::to_string(it->fail) + ", expected pass=" +
                                  std::to_string(want_pass) + " fail=" + std::to_string(want_fail)});
        }
    }
    return mismatches;
}

std::vector<IdentityId> parse_identities(const std::string& arg) {
    std::vector<IdentityId> ids;
    if (arg == "none") return ids;
    if (arg == "all") {
        ids.assign(kAllIdentities.begin(), kAllIdentities.end());
        return ids;
    }
    std::stringstream ss(arg);
    std::string token;
    while (std::getline(ss, token, ',')) ids.push_back(identity_from_string(token));
    return ids;
}

std::vector<ClaimId> parse_claims(const std::string& arg) {
    std::vector<ClaimId> ids;
    if (arg == "none") return ids;
    if (arg == "all") {
        ids.assign(kAllClaims.begin(), kAllClaims.end());
        return ids;
    }
    std::stringstream ss(arg);
    std::string token;
    while (std::getline(ss, token, ',')) ids.push_back(claim_from_string(token));
    return ids;
}

int cmd_verify(uint64_t min, uint64_t max, const std::string& identities,
               const std::string& claims, std::vector<double> eps, unsigned jobs,
               Format format, const std::string& output, uint64_t witness_cap,
               const std::string& cache, const std::string& expect) {
    RunConfig cfg;
    cfg.identities = parse_identities(identities);
    cfg.claims = parse_claims(claims);
    if (!eps.empty()) cfg.eps_grid = std::move(eps);
    cfg.jobs = jobs;
    cfg.cache_path = cache;
    cfg.witness_cap = witness_cap;

    const auto started = std::chrono::steady_clock::now();
    const VerificationReport report = run_range(min, max, cfg);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    std::cerr << "verified " << report.primes_processed << " primes in " << elapsed
              << " ms (jobs=" << cfg.jobs << ")\n";

    switch (format) {
        case Format::Json:
            write_output(report_to_json(report), output);
            break;
        case Format::Csv:
            write_output(report_to_csv(report), output);
            break;
        case Format::Table:
            write_output(report_to_table(report), output);
            break;
    }

    int rc = 0;
    for (const IdentityTally& t : report.identities) {
        if (t.fail > 0) rc = 1;
    }
    if (!expect.empty()) {
        for (const auto& m : compare_expectations(report, expect)) {
            std::cerr << "expectation mismatch: " << m.what << "\n";
            rc = 1;
        }
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic residue distribution toolkit (primes capped at 2^32)"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "count residues/non-residues in a subset of [1,p-1]");
    uint64_t count_p = 0;
    uint64_t count_k = 0;
    bool count_odds = false, count_s2m4 = false;
    double count_eps = 0.25;
    std::string count_format;
    count->add_option("--p", count_p, "odd prime")->required();
    auto* kopt = count->add_option("--k", count_k, "count inside S_k, the multiples of k");
    auto* oopt = count->add_flag("--odds", count_odds, "count inside the odd numbers");
    auto* mopt = count->add_flag("--s2-minus-s4", count_s2m4, "count inside S_2 \\ S_4");
    kopt->excludes(oopt)->excludes(mopt);
    oopt->excludes(mopt);
    count->add_option("--eps", count_eps, "normalization exponent offset, in (0, 1/2)");
    count->add_option("--format", count_format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    // sum
    auto* sum = app.add_subcommand("sum", "partial character sum S(1, p/den)");
    uint64_t sum_p = 0;
    int sum_den = 2;
    std::string sum_dump;
    sum->add_option("--p", sum_p, "odd prime")->required();
    sum->add_option("--den", sum_den, "denominator: 2, 3 or 4")->required();
    sum->add_option("--dump", sum_dump, "write the full prefix profile CSV (m,chi,prefix)");

    // classnum
    auto* classnum = app.add_subcommand("classnum", "class number h(d) by dual oracles");
    int64_t cn_d = 0;
    uint64_t cn_p = 0;
    std::string cn_family = "p";
    auto* dopt = classnum->add_option("--d", cn_d, "negative fundamental discriminant");
    auto* popt = classnum->add_option("--p", cn_p, "odd prime (with --family)");
    classnum->add_option("--family", cn_family, "character family: p, 3p or 4p");
    dopt->excludes(popt);

    // lvalue
    auto* lvalue = app.add_subcommand("lvalue", "L(1, chi): class number formula vs series");
    uint64_t lv_p = 0;
    std::string lv_family = "p";
    uint64_t lv_terms = 100000;
    lvalue->add_option("--p", lv_p, "odd prime")->required();
    lvalue->add_option("--family", lv_family, "character family: p, 3p or 4p");
    lvalue->add_option("--terms", lv_terms, "series truncation (>= modulus)");

    // verify
    auto* verify = app.add_subcommand("verify", "run identity/claims registries over [min, max)");
    uint64_t v_min = 0, v_max = 0;
    std::string v_identities = "all", v_claims = "all";
    std::vector<double> v_eps;
    unsigned v_jobs = 1;
    std::string v_format, v_output, v_cache, v_expect;
    uint64_t v_witness_cap = 10;
    verify->add_option("--min", v_min, "range lower bound (inclusive)")->required();
    verify->add_option("--max", v_max, "range upper bound (exclusive)")->required();
    verify->add_option("--identities", v_identities, "all | none | comma list (B1,W1,...)");
    verify->add_option("--claims", v_claims, "all | none | comma list (T1.1-pos,...)");
    verify->add_option("--eps", v_eps, "normalization grid, values in (0, 1/2)")
        ->delimiter(',');
    verify->add_option("--jobs", v_jobs, "worker threads (report is identical for any value)");
    verify->add_option("--format", v_format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    verify->add_option("--output", v_output, "write the report here instead of stdout");
    verify->add_option("--witness-cap", v_witness_cap, "max stored witnesses per id");
    verify->add_option("--cache", v_cache, "class-number cache CSV path")
        ->envname("QRDIST_CACHE");
    verify->add_option("--expect", v_expect, "claim expectation snapshot (JSON); mismatches exit 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (count->parsed()) {
            SubsetSelector sel = SubsetSelector::multiples(2);
            if (count_odds)
                sel = SubsetSelector::odds();
            else if (count_s2m4)
                sel = SubsetSelector::s2_minus_s4();
            else if (kopt->count() > 0)
                sel = SubsetSelector::multiples(count_k);
            else
                throw std::invalid_argument("count: pick one of --k, --odds, --s2-minus-s4");
            return cmd_count(count_p, sel, count_eps, pick_format(count_format));
        }
        if (sum->parsed()) return cmd_sum(sum_p, sum_den, sum_dump);
        if (classnum->parsed()) {
            if (dopt->count() == 0 && popt->count() == 0)
                throw std::invalid_argument("classnum: provide --d or --p with --family");
            return cmd_classnum(cn_d, popt->count() ? cn_p : 0, cn_family);
        }
        if (lvalue->parsed()) return cmd_lvalue(lv_p, lv_family, lv_terms);
        if (verify->parsed())
            return cmd_verify(v_min, v_max, v_identities, v_claims, v_eps, v_jobs,
                              pick_format(v_format), v_output, v_witness_cap, v_cache, v_expect);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
