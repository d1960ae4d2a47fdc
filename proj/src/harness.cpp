#include "qrdist/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qrdist/charsum.hpp"

namespace qrdist {

namespace {

constexpr const char* kIdentityNames[] = {"B1", "B2", "B3", "W1", "W2", "W3", "W4",
                                          "C2", "C3", "C4", "QN", "PV", "EXP"};
constexpr const char* kClaimNames[] = {"T1.1-exact",    "T1.1-pos",      "C1.2-pos",
                                       "T1.3-pos",      "C1.4-pos",      "T1.5-exact",
                                       "T1.5-pos-1mod4", "T1.5-pos-7mod8", "C1.6",
                                       "C1.7-pos"};

const std::vector<std::string>& class_labels() {
    static const std::vector<std::string> labels = {
        "r4=1", "r4=3", "r8=1", "r8=3", "r8=5", "r8=7",
        "r12=1", "r12=5", "r12=7", "r12=11"};
    return labels;
}

bool in_class(const ClassifiedPrime& cp, const std::string& label) {
    const auto eq = label.find('=');
    const unsigned v = static_cast<unsigned>(std::stoul(label.substr(eq + 1)));
    if (label[1] == '4') return cp.r4 == v;
    if (label[2] == '=') return cp.r8 == v;
    return cp.r12 == v;
}

const std::vector<SubsetSelector>& stat_selectors() {
    static const std::vector<SubsetSelector> sels = {
        SubsetSelector::multiples(2), SubsetSelector::multiples(3), SubsetSelector::multiples(4),
        SubsetSelector::odds(), SubsetSelector::s2_minus_s4()};
    return sels;
}

}  // namespace

const char* to_string(IdentityId id) { return kIdentityNames[static_cast<int>(id)]; }
const char* to_string(ClaimId id) { return kClaimNames[static_cast<int>(id)]; }

IdentityId identity_from_string(const std::string& s) {
    for (IdentityId id : kAllIdentities)
        if (s == to_string(id)) return id;
    throw std::invalid_argument("unknown identity id: " + s);
}

ClaimId claim_from_string(const std::string& s) {
    for (ClaimId id : kAllClaims)
        if (s == to_string(id)) return id;
    throw std::invalid_argument("unknown claim id: " + s);
}

bool identity_applicable(IdentityId id, const ClassifiedPrime& cp) {
    switch (id) {
        case IdentityId::B1:
            return cp.r4 == 1;
        case IdentityId::B2:
            return cp.r8 == 3;
        case IdentityId::B3:
            return cp.r8 == 7;
        case IdentityId::W1:
        case IdentityId::W2:
            return cp.r4 == 3 && cp.p > 3;
        case IdentityId::W3:
        case IdentityId::W4:
            return cp.r4 == 1 && cp.p > 3;
        case IdentityId::C2:
        case IdentityId::C3:
        case IdentityId::C4:
            return cp.p > 3;
        case IdentityId::QN:
        case IdentityId::PV:
        case IdentityId::EXP:
            return true;
    }
    return false;
}

bool claim_applicable(ClaimId id, const ClassifiedPrime& cp) {
    if (cp.p <= 3) return false;
    switch (id) {
        case ClaimId::T11Exact:
            return cp.r4 == 1;
        case ClaimId::T11Pos:
        case ClaimId::C12Pos:
            return cp.r4 == 3;
        case ClaimId::T13Pos:
        case ClaimId::C14Pos:
            return cp.r12 == 1 || cp.r12 == 11;
        case ClaimId::T15Exact:
        case ClaimId::C17Pos:
            return cp.r8 == 3;
        case ClaimId::T15Pos1Mod4:
            return cp.r4 == 1;
        case ClaimId::T15Pos7Mod8:
            return cp.r8 == 7;
        case ClaimId::C16:
            return true;
    }
    return false;
}

namespace {

IdentityResult run_identity(const ClassifiedPrime& cp, IdentityId id, ClassNumberSource* src) {
    IdentityResult res;
    res.id = id;
    if (!identity_applicable(id, cp)) {
        res.status = CheckStatus::NotApplicable;
        return res;
    }
    const uint64_t p = cp.p;
    switch (id) {
        case IdentityId::B1:
        case IdentityId::B2:
        case IdentityId::B3: {
            const VanishingOutcome v = vanishing_check(cp);
            res.status = v.pass ? CheckStatus::Pass : CheckStatus::Fail;
            res.lhs = std::to_string(v.witness);
            res.rhs = "0";
            break;
        }
        case IdentityId::W1:
        case IdentityId::W2:
        case IdentityId::W3:
        case IdentityId::W4: {
            const auto which = static_cast<ClassNumberIdentity>(static_cast<int>(id) -
                                                                static_cast<int>(IdentityId::W1));
            const auto out = check_class_number_identity(cp, which, src);
            res.status = out.pass ? CheckStatus::Pass : CheckStatus::Fail;
            res.lhs = std::to_string(out.lhs);
            res.rhs = std::to_string(out.rhs) + " (d=" + std::to_string(out.d) + ")";
            break;
        }
        case IdentityId::C2:
        case IdentityId::C3:
        case IdentityId::C4: {
            const uint64_t k = (id == IdentityId::C2) ? 2 : (id == IdentityId::C3) ? 3 : 4;
            const auto sel = SubsetSelector::multiples(k);
            const auto cf = closed_form(cp, sel, src);
            const auto brute = count_brute(p, sel);
            res.status = (cf.residues == brute.residues) ? CheckStatus::Pass : CheckStatus::Fail;
            res.lhs = "closed_form=" + std::to_string(cf.residues);
            res.rhs = "brute=" + std::to_string(brute.residues);
            break;
        }
        case IdentityId::QN: {
            const auto rec = count_brute(p, SubsetSelector::multiples(1));
            const auto half = static_cast<int64_t>((p - 1) / 2);
            res.status = (rec.residues == half && rec.nonresidues == half) ? CheckStatus::Pass
                                                                           : CheckStatus::Fail;
            res.lhs = "Q=" + std::to_string(rec.residues) + ",N=" + std::to_string(rec.nonresidues);
            res.rhs = "(p-1)/2=" + std::to_string(half);
            break;
        }
        case IdentityId::PV: {
            const auto ext = pv_extremum(p);
            res.status = (static_cast<double>(ext.max_interval) <= ext.bound) ? CheckStatus::Pass
                                                                              : CheckStatus::Fail;
            res.lhs = std::to_string(ext.max_interval);
            res.rhs = "sqrt(p)ln(p)=" + format_double(ext.bound);
            break;
        }
        case IdentityId::EXP: {
            const uint64_t kmax = std::min<uint64_t>(p - 1, 50);
            const double envelope = std::sqrt(static_cast<double>(p)) *
                                    std::log(static_cast<double>(p));
            res.status = CheckStatus::Pass;
            res.lhs = "k=1.." + std::to_string(kmax);
            res.rhs = "formula=brute";
            for (uint64_t k = 1; k <= kmax; ++k) {
                const int64_t q = count_formula(p, k);
                const int64_t n = count_formula_nonresidues(p, k);
                const auto brute = count_brute(p, SubsetSelector::multiples(k));
                // |Q - floor((p-1)/k)/2| = |S|/2, so the envelope check is 2|gap| <= sqrt(p)ln(p)
                const int64_t twice_gap = 2 * q - static_cast<int64_t>((p - 1) / k);
                const bool in_envelope =
                    static_cast<double>(twice_gap < 0 ? -twice_gap : twice_gap) <= envelope;
                if (q != brute.residues || n != brute.nonresidues || !in_envelope) {
                    res.status = CheckStatus::Fail;
                    res.lhs = "k=" + std::to_string(k) + " formula Q=" + std::to_string(q) +
                              ",N=" + std::to_string(n);
                    res.rhs = "brute Q=" + std::to_string(brute.residues) +
                              ",N=" + std::to_string(brute.nonresidues);
                    break;
                }
            }
            break;
        }
    }
    return res;
}

struct SelectorCounts {
    CountRecord s2, s3, s4, odds, s2m4;
};

SelectorCounts brute_counts(const ClassifiedPrime& cp) {
    SelectorCounts sc;
    if (cp.p < kQrTableCap) {
        const QrTable table(cp.p);
        sc.s2 = count_brute(table, SubsetSelector::multiples(2));
        sc.s3 = count_brute(table, SubsetSelector::multiples(3));
        sc.s4 = count_brute(table, SubsetSelector::multiples(4));
        sc.odds = count_brute(table, SubsetSelector::odds());
        sc.s2m4 = count_brute(table, SubsetSelector::s2_minus_s4());
    } else {
        sc.s2 = count_brute(cp.p, SubsetSelector::multiples(2));
        sc.s3 = count_brute(cp.p, SubsetSelector::multiples(3));
        sc.s4 = count_brute(cp.p, SubsetSelector::multiples(4));
        sc.odds = count_brute(cp.p, SubsetSelector::odds());
        sc.s2m4 = count_brute(cp.p, SubsetSelector::s2_minus_s4());
    }
    return sc;
}

ClaimResult run_claim(const ClassifiedPrime& cp, ClaimId id, const SelectorCounts& sc) {
    ClaimResult res;
    res.id = id;
    if (!claim_applicable(id, cp)) {
        res.status = CheckStatus::NotApplicable;
        return res;
    }
    const auto p = static_cast<int64_t>(cp.p);
    const Rational quarter(p - 1, 4);
    const Rational sixth(p - 1, 6);
    const Rational eighth(p - 1, 8);
    const Rational half_floor_quarter((p - 1) / 4, 2);

    bool want_zero = false;
    switch (id) {
        case ClaimId::T11Exact:
            res.gap = Rational(sc.s2.residues) - quarter;
            want_zero = true;
            break;
        case ClaimId::T11Pos:
            res.gap = Rational(sc.s2.residues) - quarter;
            break;
        case ClaimId::C12Pos: {
            const Rational gap_n = quarter - Rational(sc.s2.nonresidues);
            const Rational gap_o = quarter - Rational(sc.odds.residues);
            res.gap = gap_n;
            res.relation = "> 0";
            res.status = (gap_n.signum() > 0 && gap_o.signum() > 0) ? CheckStatus::Pass
                                                                    : CheckStatus::Fail;
            return res;
        }
        case ClaimId::T13Pos:
            res.gap = Rational(sc.s3.residues) - sixth;
            break;
        case ClaimId::C14Pos:
            res.gap = sixth - Rational(sc.s3.nonresidues);
            break;
        case ClaimId::T15Exact:
            res.gap = Rational(sc.s4.residues) - half_floor_quarter;
            want_zero = true;
            break;
        case ClaimId::T15Pos1Mod4:
            res.gap = Rational(sc.s4.residues) - eighth;
            break;
        case ClaimId::T15Pos7Mod8:
            res.gap = Rational(sc.s4.residues) - half_floor_quarter;
            break;
        case ClaimId::C16:
            if (cp.r8 == 3) {
                res.gap = Rational(sc.s4.nonresidues) - half_floor_quarter;
                want_zero = true;
            } else if (cp.r4 == 1) {
                res.gap = eighth - Rational(sc.s4.nonresidues);
            } else {  // r8 == 7
                res.gap = half_floor_quarter - Rational(sc.s4.nonresidues);
            }
            break;
        case ClaimId::C17Pos:
            res.gap = Rational(sc.s2m4.residues) - half_floor_quarter;
            break;
    }
    if (want_zero) {
        res.relation = "= 0";
        res.status = (res.gap.signum() == 0) ? CheckStatus::Pass : CheckStatus::Fail;
    } else {
        res.relation = "> 0";
        res.status = (res.gap.signum() > 0) ? CheckStatus::Pass : CheckStatus::Fail;
    }
    return res;
}

}  // namespace

std::vector<IdentityResult> verify_prime(const ClassifiedPrime& cp,
                                         const std::vector<IdentityId>& ids,
                                         ClassNumberSource* src) {
    std::vector<IdentityResult> out;
    out.reserve(ids.size());
    for (IdentityId id : ids) {
        try {
            out.push_back(run_identity(cp, id, src));
        } catch (const std::exception& e) {
            throw std::runtime_error("identity " + std::string(to_string(id)) + " at p=" +
                                     std::to_string(cp.p) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ClaimResult> check_claims(const ClassifiedPrime& cp) {
    if (cp.p <= 3) throw std::invalid_argument("check_claims: requires p > 3");
    const SelectorCounts sc = brute_counts(cp);
    std::vector<ClaimResult> out;
    out.reserve(kAllClaims.size());
    for (ClaimId id : kAllClaims) out.push_back(run_claim(cp, id, sc));
    return out;
}

namespace {

// Read-only view over the shared cache; misses are computed locally and
// handed back to the merge phase, so workers never contend.
class WorkerCache : public ClassNumberSource {
public:
    explicit WorkerCache(const ClassNumberCache* shared) : shared_(shared) {}

    int64_t class_number(int64_t d) override {
        if (shared_) {
            if (auto h = shared_->lookup(d)) return *h;
        }
        const auto it = local_.find(d);
        if (it != local_.end()) return it->second;
        const int64_t h = class_number_forms(d);
        local_[d] = h;
        return h;
    }

    const std::map<int64_t, int64_t>& local() const { return local_; }

private:
    const ClassNumberCache* shared_;
    std::map<int64_t, int64_t> local_;
};

struct PrimeOutcome {
    ClassifiedPrime cp;
    std::vector<IdentityResult> identities;
    std::vector<ClaimResult> claims;
    std::vector<CountRecord> records;  // stat_selectors() order; empty when claims off
    std::map<int64_t, int64_t> new_class_numbers;
};

PrimeOutcome evaluate_prime(uint64_t p, const RunConfig& cfg, const ClassNumberCache* shared) {
    PrimeOutcome out;
    out.cp = classify(p);
    WorkerCache cache(shared);
    out.identities = verify_prime(out.cp, cfg.identities, &cache);
    if (!cfg.claims.empty() && p > 3) {
        const SelectorCounts sc = brute_counts(out.cp);
        out.claims.reserve(cfg.claims.size());
        for (ClaimId id : cfg.claims) out.claims.push_back(run_claim(out.cp, id, sc));
        out.records = {sc.s2, sc.s3, sc.s4, sc.odds, sc.s2m4};
    }
    out.new_class_numbers = cache.local();
    return out;
}

void validate_config(uint64_t lo, uint64_t hi, const RunConfig& cfg) {
    if (lo > hi) throw std::invalid_argument("run_range: inverted range");
    if (hi > kPrimeCap) throw std::invalid_argument("run_range: upper bound exceeds 2^32");
    for (double eps : cfg.eps_grid) {
        if (!(eps > 0.0 && eps < 0.5))
            throw std::invalid_argument("run_range: eps values must lie in (0, 1/2)");
    }
    if (cfg.jobs < 1) throw std::invalid_argument("run_range: jobs must be >= 1");
}

}  // namespace

VerificationReport run_range(uint64_t lo, uint64_t hi, const RunConfig& cfg) {
    validate_config(lo, hi, cfg);

    VerificationReport report;
    report.lo = lo;
    report.hi = hi;
    report.config = cfg;

    ClassNumberCache cache;
    if (!cfg.cache_path.empty()) cache.load(cfg.cache_path);

    const std::vector<uint64_t> primes = primes_in_range(std::max<uint64_t>(lo, 3), hi);
    std::vector<PrimeOutcome> outcomes(primes.size());

    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, 64));
    if (jobs == 1 || primes.size() < 2) {
        for (size_t i = 0; i < primes.size(); ++i)
            outcomes[i] = evaluate_prime(primes[i], cfg, &cache);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            workers.emplace_back([&, t] {
                try {
                    for (size_t i = next.fetch_add(1); i < primes.size(); i = next.fetch_add(1))
                        outcomes[i] = evaluate_prime(primes[i], cfg, &cache);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Single-threaded merge in ascending-p order: tallies, capped witnesses,
    // gap statistics and cache updates all become independent of job count.
    report.identities.reserve(cfg.identities.size());
    for (IdentityId id : cfg.identities) report.identities.push_back(IdentityTally{id});
    report.claims.reserve(cfg.claims.size());
    for (ClaimId id : cfg.claims) {
        ClaimTally tally;
        tally.id = id;
        for (const auto& label : class_labels()) tally.by_class.push_back(ClassTally{label});
        report.claims.push_back(std::move(tally));
    }

    struct CellAcc {
        uint64_t count = 0;
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        double min_abs = std::numeric_limits<double>::infinity();
        uint64_t argmin_p = 0;
    };
    const auto& labels = class_labels();
    const auto& sels = stat_selectors();
    std::vector<CellAcc> cells(cfg.eps_grid.size() * labels.size() * sels.size());

    for (const PrimeOutcome& out : outcomes) {
        ++report.primes_processed;
        for (size_t i = 0; i < out.identities.size(); ++i) {
            const IdentityResult& res = out.identities[i];
            IdentityTally& tally = report.identities[i];
            if (res.status == CheckStatus::NotApplicable) continue;
            ++report.identity_checks;
            ++tally.applicable;
            if (res.status == CheckStatus::Pass) {
                ++tally.pass;
            } else {
                ++tally.fail;
                if (tally.witnesses.size() < cfg.witness_cap)
                    tally.witnesses.push_back(Witness{out.cp.p, res.lhs, res.rhs});
            }
        }
        for (size_t i = 0; i < out.claims.size(); ++i) {
            const ClaimResult& res = out.claims[i];
            ClaimTally& tally = report.claims[i];
            if (res.status == CheckStatus::NotApplicable) continue;
            ++report.claim_checks;
            ++tally.applicable;
            const bool pass = res.status == CheckStatus::Pass;
            if (pass) {
                ++tally.pass;
            } else {
                ++tally.fail;
                if (tally.witnesses.size() < cfg.witness_cap)
                    tally.witnesses.push_back(
                        Witness{out.cp.p, "gap=" + res.gap.str(), res.relation});
            }
            for (size_t c = 0; c < labels.size(); ++c) {
                if (!in_class(out.cp, labels[c])) continue;
                ++tally.by_class[c].applicable;
                pass ? ++tally.by_class[c].pass : ++tally.by_class[c].fail;
            }
        }
        for (size_t s = 0; s < out.records.size(); ++s) {
            const CountRecord& rec = out.records[s];
            report.count_records.emplace_back(out.cp, rec);
            for (size_t e = 0; e < cfg.eps_grid.size(); ++e) {
                const double ng = normalized_gap(rec, cfg.eps_grid[e]);
                for (size_t c = 0; c < labels.size(); ++c) {
                    if (!in_class(out.cp, labels[c])) continue;
                    CellAcc& acc = cells[(e * labels.size() + c) * sels.size() + s];
                    ++acc.count;
                    acc.min = std::min(acc.min, ng);
                    acc.max = std::max(acc.max, ng);
                    acc.sum += ng;
                    const double a = std::fabs(ng);
                    if (a < acc.min_abs) {
                        acc.min_abs = a;
                        acc.argmin_p = rec.p;
                    }
                }
            }
        }
        for (const auto& [d, h] : out.new_class_numbers) cache.insert(d, h);
    }

    for (size_t e = 0; e < cfg.eps_grid.size(); ++e) {
        for (size_t c = 0; c < labels.size(); ++c) {
            for (size_t s = 0; s < sels.size(); ++s) {
                const CellAcc& acc = cells[(e * labels.size() + c) * sels.size() + s];
                if (acc.count == 0) continue;
                GapCell cell;
                cell.eps = cfg.eps_grid[e];
                cell.cls = labels[c];
                cell.selector = sels[s].name();
                cell.count = acc.count;
                cell.min = acc.min;
                cell.max = acc.max;
                cell.mean = acc.sum / static_cast<double>(acc.count);
                cell.min_abs = acc.min_abs;
                cell.argmin_abs_p = acc.argmin_p;
                report.gap_stats.push_back(std::move(cell));
            }
        }
    }

    if (!cfg.cache_path.empty()) cache.save(cfg.cache_path);
    return report;
}

std::vector<GapStatRow> gap_statistics(const VerificationReport& report, double eps) {
    const auto& grid = report.config.eps_grid;
    const bool known = std::any_of(grid.begin(), grid.end(),
                                   [eps](double g) { return std::fabs(g - eps) < 1e-12; });
    if (!known) throw std::invalid_argument("gap_statistics: eps is not in the configured grid");
    std::vector<GapStatRow> rows;
    for (const GapCell& cell : report.gap_stats) {
        if (std::fabs(cell.eps - eps) >= 1e-12) continue;
        rows.push_back(GapStatRow{cell.cls, cell.selector, cell.min_abs, cell.argmin_abs_p});
    }
    return rows;
}

std::string report_to_json(const VerificationReport& report) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["range"] = {{"lo", report.lo}, {"hi", report.hi}};

    json config;
    json ids = json::array();
    for (IdentityId id : report.config.identities) ids.push_back(to_string(id));
    json claims = json::array();
    for (ClaimId id : report.config.claims) claims.push_back(to_string(id));
    config["identities"] = std::move(ids);
    config["claims"] = std::move(claims);
    config["eps"] = report.config.eps_grid;
    config["witness_cap"] = report.config.witness_cap;
    doc["config"] = std::move(config);

    json identities = json::array();
    for (const IdentityTally& tally : report.identities) {
        json entry;
        entry["id"] = to_string(tally.id);
        entry["applicable"] = tally.applicable;
        entry["pass"] = tally.pass;
        entry["fail"] = tally.fail;
        json witnesses = json::array();
        for (const Witness& w : tally.witnesses)
            witnesses.push_back({{"p", w.p}, {"lhs", w.lhs}, {"rhs", w.rhs}});
        entry["witnesses"] = std::move(witnesses);
        identities.push_back(std::move(entry));
    }
    doc["identities"] = std::move(identities);

    json claim_entries = json::array();
    for (const ClaimTally& tally : report.claims) {
        json entry;
        entry["id"] = to_string(tally.id);
        entry["applicable"] = tally.applicable;
        entry["pass"] = tally.pass;
        entry["fail"] = tally.fail;
        json witnesses = json::array();
        for (const Witness& w : tally.witnesses)
            witnesses.push_back({{"p", w.p}, {"lhs", w.lhs}, {"rhs", w.rhs}});
        entry["witnesses"] = std::move(witnesses);
        json by_class = json::array();
        for (const ClassTally& ct : tally.by_class) {
            if (ct.applicable == 0) continue;
            by_class.push_back({{"class", ct.label},
                                {"applicable", ct.applicable},
                                {"pass", ct.pass},
                                {"fail", ct.fail}});
        }
        entry["by_class"] = std::move(by_class);
        claim_entries.push_back(std::move(entry));
    }
    doc["claims"] = std::move(claim_entries);

    json gap_stats = json::array();
    for (const GapCell& cell : report.gap_stats) {
        gap_stats.push_back({{"eps", cell.eps},
                             {"class", cell.cls},
                             {"selector", cell.selector},
                             {"count", cell.count},
                             {"min", cell.min},
                             {"max", cell.max},
                             {"mean", cell.mean},
                             {"min_abs", cell.min_abs},
                             {"argmin_p", cell.argmin_abs_p}});
    }
    doc["gap_stats"] = std::move(gap_stats);

    doc["timing"] = {{"primes", report.primes_processed},
                     {"identity_checks", report.identity_checks},
                     {"claim_checks", report.claim_checks}};

    return doc.dump(2) + "\n";
}

std::string report_to_csv(const VerificationReport& report) {
    std::string out = count_record_csv_header() + "\n";
    for (const auto& [cp, rec] : report.count_records)
        out += count_record_csv_row(cp, rec) + "\n";
    return out;
}

std::string report_to_table(const VerificationReport& report) {
    std::ostringstream out;
    out << "range [" << report.lo << ", " << report.hi << "), " << report.primes_processed
        << " primes\n";
    if (!report.identities.empty()) {
        out << "\nidentities:\n";
        for (const IdentityTally& t : report.identities) {
            out << "  " << to_string(t.id) << ": applicable=" << t.applicable
                << " pass=" << t.pass << " fail=" << t.fail << "\n";
            for (const Witness& w : t.witnesses)
                out << "    p=" << w.p << " lhs=" << w.lhs << " rhs=" << w.rhs << "\n";
        }
    }
    if (!report.claims.empty()) {
        out << "\nclaims:\n";
        for (const ClaimTally& t : report.claims) {
            out << "  " << to_string(t.id) << ": applicable=" << t.applicable
                << " pass=" << t.pass << " fail=" << t.fail << "\n";
            for (const ClassTally& ct : t.by_class) {
                if (ct.applicable == 0) continue;
                out << "    " << ct.label << ": pass=" << ct.pass << " fail=" << ct.fail << "\n";
            }
            for (const Witness& w : t.witnesses)
                out << "    witness p=" << w.p << " " << w.lhs << " (expected " << w.rhs << ")\n";
        }
    }
    if (!report.gap_stats.empty()) {
        out << "\ngap statistics (min |gap| / p^(1/2-eps)):\n";
        for (const GapCell& cell : report.gap_stats) {
            out << "  eps=" << format_double(cell.eps) << " " << cell.cls << " " << cell.selector
                << ": n=" << cell.count << " min_abs=" << format_double(cell.min_abs)
                << " at p=" << cell.argmin_abs_p << " mean=" << format_double(cell.mean) << "\n";
        }
    }
    out << "\nchecks: identities=" << report.identity_checks << " claims=" << report.claim_checks
        << "\n";
    return out.str();
}

}  // namespace qrdist
