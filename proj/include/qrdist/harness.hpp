#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qrdist/classnum.hpp"
#include "qrdist/core_arith.hpp"
#include "qrdist/counts.hpp"
#include "qrdist/rational.hpp"

namespace qrdist {

// Registry of exact identities. Each one names its residue-class
// applicability; it is never evaluated outside it.
//   B1/B2/B3  vanishing character sums (r4=1 / r8=3 / r8=7)
//   W1..W4    class-number identities (p > 3, r4 = 3 resp. 1)
//   C2/C3/C4  closed forms for Q(p,S_2/S_3/S_4) vs brute force (p > 3)
//   QN        exactly (p-1)/2 residues and non-residues in [1, p-1]
//   PV        extremal interval sum <= sqrt(p) ln(p)
//   EXP       counting formula == brute force for k <= min(p-1, 50),
//             plus the |Q - floor((p-1)/k)/2| <= sqrt(p) ln(p)/2 envelope
enum class IdentityId { B1, B2, B3, W1, W2, W3, W4, C2, C3, C4, QN, PV, EXP };

// Registry of claims adjudicated as written against brute-force counts.
// A claim may fail; that is a finding, not a harness defect.
enum class ClaimId {
    T11Exact,     // r4=1: Q(p,S_2) = (p-1)/4
    T11Pos,       // r4=3: Q(p,S_2) - (p-1)/4 > 0
    C12Pos,       // r4=3: (p-1)/4 - R > 0 for R = N(p,S_2) and R = Q(p,odds)
    T13Pos,       // p = 1,11 (mod 12): Q(p,S_3) - (p-1)/6 > 0
    C14Pos,       // p = 1,11 (mod 12): (p-1)/6 - N(p,S_3) > 0
    T15Exact,     // r8=3: Q(p,S_4) = floor((p-1)/4)/2
    T15Pos1Mod4,  // r4=1: Q(p,S_4) - (p-1)/8 > 0
    T15Pos7Mod8,  // r8=7: Q(p,S_4) - floor((p-1)/4)/2 > 0
    C16,          // N(p,S_4) counterpart of T1.5, per class
    C17Pos,       // r8=3: Q(p,S_2\S_4) - floor((p-1)/4)/2 > 0
};

inline constexpr std::array<IdentityId, 13> kAllIdentities = {
    IdentityId::B1, IdentityId::B2, IdentityId::B3, IdentityId::W1, IdentityId::W2,
    IdentityId::W3, IdentityId::W4, IdentityId::C2, IdentityId::C3, IdentityId::C4,
    IdentityId::QN, IdentityId::PV, IdentityId::EXP};

inline constexpr std::array<ClaimId, 10> kAllClaims = {
    ClaimId::T11Exact, ClaimId::T11Pos,      ClaimId::C12Pos,      ClaimId::T13Pos,
    ClaimId::C14Pos,   ClaimId::T15Exact,    ClaimId::T15Pos1Mod4, ClaimId::T15Pos7Mod8,
    ClaimId::C16,      ClaimId::C17Pos};

const char* to_string(IdentityId id);
const char* to_string(ClaimId id);
IdentityId identity_from_string(const std::string& s);
ClaimId claim_from_string(const std::string& s);

bool identity_applicable(IdentityId id, const ClassifiedPrime& cp);
bool claim_applicable(ClaimId id, const ClassifiedPrime& cp);

enum class CheckStatus { Pass, Fail, NotApplicable };

struct IdentityResult {
    IdentityId id = IdentityId::B1;
    CheckStatus status = CheckStatus::NotApplicable;
    std::string lhs;
    std::string rhs;
};

struct ClaimResult {
    ClaimId id = ClaimId::T11Exact;
    CheckStatus status = CheckStatus::NotApplicable;
    Rational gap;         // the claim's own gap, as written
    std::string relation; // "= 0" or "> 0"
};

/// Evaluate the requested identities for one prime. Inapplicable identities
/// are reported as NotApplicable, distinct from pass/fail.
std::vector<IdentityResult> verify_prime(const ClassifiedPrime& cp,
                                         const std::vector<IdentityId>& ids,
                                         ClassNumberSource* src = nullptr);

/// Adjudicate every claim for one prime (p > 3) against brute-force counts.
std::vector<ClaimResult> check_claims(const ClassifiedPrime& cp);

struct RunConfig {
    std::vector<IdentityId> identities;
    std::vector<ClaimId> claims;
    std::vector<double> eps_grid = {0.1, 0.25, 0.4};
    unsigned jobs = 1;
    std::string cache_path;  // empty: in-memory class numbers only
    uint64_t witness_cap = 10;
};

struct Witness {
    uint64_t p = 0;
    std::string lhs;
    std::string rhs;
};

struct IdentityTally {
    IdentityId id = IdentityId::B1;
    uint64_t applicable = 0;
    uint64_t pass = 0;
    uint64_t fail = 0;
    std::vector<Witness> witnesses;  // capped; counts stay exact
};

struct ClassTally {
    std::string label;  // "r4=1", "r8=3", ...
    uint64_t applicable = 0;
    uint64_t pass = 0;
    uint64_t fail = 0;
};

struct ClaimTally {
    ClaimId id = ClaimId::T11Exact;
    uint64_t applicable = 0;
    uint64_t pass = 0;
    uint64_t fail = 0;
    std::vector<Witness> witnesses;
    std::vector<ClassTally> by_class;
};

struct GapCell {
    double eps = 0.0;
    std::string cls;
    std::string selector;
    uint64_t count = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double min_abs = 0.0;
    uint64_t argmin_abs_p = 0;
};

struct VerificationReport {
    uint64_t lo = 0;
    uint64_t hi = 0;
    RunConfig config;
    std::vector<IdentityTally> identities;
    std::vector<ClaimTally> claims;
    std::vector<GapCell> gap_stats;  // only non-empty cells
    // Deterministic work counters; wall-clock never enters the report so
    // serialized output is byte-identical across runs and job counts.
    uint64_t primes_processed = 0;
    uint64_t identity_checks = 0;
    uint64_t claim_checks = 0;
    // Per-prime per-subset counts, ascending p then selector; feeds CSV export.
    std::vector<std::pair<ClassifiedPrime, CountRecord>> count_records;
};

/// Run the registries over every odd prime in [lo, hi). Work may be spread
/// over config.jobs threads; results are merged in ascending-p order so the
/// report is identical regardless of job count.
VerificationReport run_range(uint64_t lo, uint64_t hi, const RunConfig& config);

struct GapStatRow {
    std::string cls;
    std::string selector;
    double min_abs = 0.0;
    uint64_t argmin_p = 0;
};

/// Lower-envelope table at one eps of the configured grid.
std::vector<GapStatRow> gap_statistics(const VerificationReport& report, double eps);

std::string report_to_json(const VerificationReport& report);
std::string report_to_csv(const VerificationReport& report);
std::string report_to_table(const VerificationReport& report);

}  // namespace qrdist
