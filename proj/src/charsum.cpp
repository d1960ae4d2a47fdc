#include "qrdist/charsum.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qrdist {

namespace {

void require_odd_prime_arg(uint64_t p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("character sum: p must be an odd prime");
}

}  // namespace

PartialSumProfile build_profile(uint64_t p) {
    require_odd_prime_arg(p);
    PartialSumProfile prof;
    prof.p = p;
    prof.prefix.resize(p, 0);
    int64_t run = 0;
    for (uint64_t m = 1; m < p; ++m) {
        run += legendre(static_cast<int64_t>(m), p);
        prof.prefix[m] = run;
        prof.max_prefix = std::max(prof.max_prefix, run);
        prof.min_prefix = std::min(prof.min_prefix, run);
    }
    prof.max_interval = prof.max_prefix - prof.min_prefix;
    return prof;
}

int64_t partial_sum(uint64_t p, int num, int den) {
    require_odd_prime_arg(p);
    if (num != 1) throw std::invalid_argument("partial_sum: only numerator 1 is supported");
    if (den != 2 && den != 3 && den != 4)
        throw std::invalid_argument("partial_sum: denominator must be 2, 3 or 4");
    if (p <= static_cast<uint64_t>(den))
        throw std::invalid_argument("partial_sum: p must exceed the denominator");
    // p prime > den makes p/den non-integral, so the strict cutoff m < p/den
    // coincides with m <= floor(p/den).
    const uint64_t limit = p / static_cast<uint64_t>(den);
    int64_t sum = 0;
    for (uint64_t m = 1; m <= limit; ++m) sum += legendre(static_cast<int64_t>(m), p);
    return sum;
}

int64_t interval_sum(uint64_t p, uint64_t lo, uint64_t hi) {
    require_odd_prime_arg(p);
    if (lo > hi || hi > p - 1)
        throw std::invalid_argument("interval_sum: bounds must satisfy 0 <= lo <= hi <= p-1");
    int64_t sum = 0;
    for (uint64_t m = lo; m <= hi; ++m) sum += legendre(static_cast<int64_t>(m), p);
    return sum;
}

PvExtremum pv_extremum(uint64_t p) {
    require_odd_prime_arg(p);
    int64_t run = 0, max_prefix = 0, min_prefix = 0;
    for (uint64_t m = 1; m < p; ++m) {
        run += legendre(static_cast<int64_t>(m), p);
        if (run > max_prefix) max_prefix = run;
        if (run < min_prefix) min_prefix = run;
    }
    PvExtremum ext;
    ext.max_interval = max_prefix - min_prefix;
    const auto dp = static_cast<double>(p);
    ext.bound = std::sqrt(dp) * std::log(dp);
    assert(static_cast<double>(ext.max_interval) <= ext.bound);
    return ext;
}

VanishingOutcome vanishing_check(const ClassifiedPrime& cp) {
    if (cp.r4 == 1) {
        const int64_t s = partial_sum(cp.p, 1, 2);
        return {VanishingCase::B1, s == 0, s};
    }
    if (cp.r8 == 3) {
        // p = 3 has an empty sum (floor(3/4) = 0); partial_sum requires p > 4.
        const int64_t s = (cp.p > 4) ? partial_sum(cp.p, 1, 4) : 0;
        return {VanishingCase::B2, s == 0, s};
    }
    const uint64_t lo = (cp.p + 3) / 4;  // ceil(p/4)
    const uint64_t hi = cp.p / 2;        // floor(p/2)
    const int64_t s = interval_sum(cp.p, lo, hi);
    return {VanishingCase::B3, s == 0, s};
}

void dump_profile_csv(uint64_t p, std::ostream& out) {
    require_odd_prime_arg(p);
    out << "m,chi,prefix\n";
    int64_t run = 0;
    for (uint64_t m = 1; m < p; ++m) {
        const int chi = legendre(static_cast<int64_t>(m), p);
        run += chi;
        out << m << ',' << chi << ',' << run << '\n';
    }
}

const char* vanishing_case_name(VanishingCase v) {
    switch (v) {
        case VanishingCase::B1:
            return "B1";
        case VanishingCase::B2:
            return "B2";
        case VanishingCase::B3:
            return "B3";
    }
    return "?";
}

}  // namespace qrdist
