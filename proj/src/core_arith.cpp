#include "qrdist/core_arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qrdist {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// First twelve primes: valid deterministic witness set for all n < 3.3e24,
// which covers the full 64-bit range.
constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

uint64_t isqrt_u64(uint64_t n) {
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Jacobi symbol (a|n) for odd n >= 1.
int jacobi(uint64_t a, uint64_t n) {
    int s = 1;
    a %= n;
    while (a != 0) {
        const int z = std::countr_zero(a);
        a >>= z;
        const uint64_t n8 = n & 7;
        if ((z & 1) && (n8 == 3 || n8 == 5)) s = -s;
        if ((a & 3) == 3 && (n & 3) == 3) s = -s;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? s : 0;
}

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : kWitnesses) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    const int s = std::countr_zero(n - 1);
    const uint64_t d = (n - 1) >> s;
    for (uint64_t a : kWitnesses) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("primes_in_range: inverted range");
    if (hi > kPrimeCap) throw std::invalid_argument("primes_in_range: upper bound exceeds 2^32");

    std::vector<uint64_t> primes;
    if (hi <= 2) return primes;
    lo = std::max<uint64_t>(lo, 2);

    const uint64_t root = isqrt_u64(hi - 1);
    std::vector<char> base(root + 1, 1);
    std::vector<uint64_t> base_primes;
    for (uint64_t i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_primes.push_back(i);
        for (uint64_t j = i * i; j <= root; j += i) base[j] = 0;
    }

    constexpr uint64_t kSegment = uint64_t(1) << 20;
    for (uint64_t seg_lo = lo; seg_lo < hi; seg_lo += kSegment) {
        const uint64_t seg_hi = std::min(hi, seg_lo + kSegment);
        std::vector<char> mark(seg_hi - seg_lo, 1);
        for (uint64_t q : base_primes) {
            uint64_t start = std::max(q * q, (seg_lo + q - 1) / q * q);
            for (uint64_t j = start; j < seg_hi; j += q) mark[j - seg_lo] = 0;
        }
        for (uint64_t n = seg_lo; n < seg_hi; ++n) {
            if (mark[n - seg_lo] && n >= 2) primes.push_back(n);
        }
    }
    return primes;
}

int legendre(int64_t a, uint64_t p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("legendre: modulus must be an odd prime");
    const auto sp = static_cast<int64_t>(p);
    const uint64_t r = static_cast<uint64_t>((a % sp + sp) % sp);
    return jacobi(r, p);
}

int chi4(int64_t n) {
    const int64_t r = (n % 4 + 4) % 4;
    if (r == 1) return 1;
    if (r == 3) return -1;
    return 0;
}

ClassifiedPrime classify(uint64_t p) {
    if (p >= kPrimeCap) throw std::invalid_argument("classify: p at or above the 2^32 cap");
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("classify: p must be an odd prime");
    return ClassifiedPrime{p, unsigned(p % 4), unsigned(p % 8), unsigned(p % 12)};
}

QuadCharacter make_character(CharKind kind, uint64_t p) {
    if (p >= kPrimeCap || p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("make_character: p must be an odd prime below 2^32");
    if (kind == CharKind::Chi3P && p == 3)
        throw std::invalid_argument("make_character: chi_3p requires p > 3");

    QuadCharacter chi;
    chi.kind = kind;
    chi.p = p;
    switch (kind) {
        case CharKind::ChiP:
            chi.modulus = p;
            chi.odd = (p % 4 == 3);
            break;
        case CharKind::Chi3P:
            chi.modulus = 3 * p;
            chi.odd = (p % 4 == 1);  // chi_3 is odd, so the product flips parity
            break;
        case CharKind::Chi4P:
            chi.modulus = 4 * p;
            chi.odd = (p % 4 == 1);
            break;
    }
    if (chi.odd) chi.discriminant = -static_cast<int64_t>(chi.modulus);
    return chi;
}

int char_eval(const QuadCharacter& chi, int64_t n) {
    switch (chi.kind) {
        case CharKind::ChiP:
            return legendre(n, chi.p);
        case CharKind::Chi3P:
            return legendre(n, 3) * legendre(n, chi.p);
        case CharKind::Chi4P:
            return chi4(n) * legendre(n, chi.p);
    }
    return 0;
}

const char* char_kind_name(CharKind kind) {
    switch (kind) {
        case CharKind::ChiP:
            return "p";
        case CharKind::Chi3P:
            return "3p";
        case CharKind::Chi4P:
            return "4p";
    }
    return "?";
}

}  // namespace qrdist
