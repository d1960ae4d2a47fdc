#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qrdist/core_arith.hpp"

namespace qrdist {

// Prefix sums of chi_p over [1, p-1] with extremal statistics. Materialized
// only on request (profile dumps, small-p tests); large-p consumers use the
// streaming pv_extremum instead.
struct PartialSumProfile {
    uint64_t p = 0;
    std::vector<int64_t> prefix;  // length p, prefix[j] = sum_{m=1..j} chi_p(m)
    int64_t max_prefix = 0;
    int64_t min_prefix = 0;
    int64_t max_interval = 0;  // max_prefix - min_prefix
};

PartialSumProfile build_profile(uint64_t p);

/// S(1, num*p/den) = sum of chi_p(m) over 1 <= m <= floor(p/den).
/// Only num = 1 and den in {2, 3, 4} are supported; p must exceed den.
int64_t partial_sum(uint64_t p, int num, int den);

/// Sum of chi_p(m) over the inclusive interval m in [lo, hi],
/// 0 <= lo <= hi <= p-1.
int64_t interval_sum(uint64_t p, uint64_t lo, uint64_t hi);

struct PvExtremum {
    int64_t max_interval = 0;  // max over all intervals of |sum chi_p|
    double bound = 0.0;        // sqrt(p) * ln(p)
};

/// Extremal interval character sum in one O(p) streaming pass over the
/// prefix walk, plus the sqrt(p)*ln(p) envelope it is measured against.
PvExtremum pv_extremum(uint64_t p);

// Which vanishing sum applies: B1 for p = 1 (mod 4), B2 for p = 3 (mod 8),
// B3 for p = 7 (mod 8). Exactly one case fits every odd prime.
enum class VanishingCase { B1, B2, B3 };

struct VanishingOutcome {
    VanishingCase which = VanishingCase::B1;
    bool pass = false;
    int64_t witness = 0;  // the computed sum; zero on pass
};

/// Evaluate the vanishing sum for cp's residue class.
VanishingOutcome vanishing_check(const ClassifiedPrime& cp);

/// Stream the profile as CSV rows `m,chi,prefix` for m = 1..p-1.
void dump_profile_csv(uint64_t p, std::ostream& out);

const char* vanishing_case_name(VanishingCase v);

}  // namespace qrdist
