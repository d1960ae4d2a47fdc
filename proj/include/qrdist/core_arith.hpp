#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qrdist {

// Classified primes are capped so that a*m products and chi-weighted sums fit
// 64/128-bit intermediates throughout the toolkit.
inline constexpr uint64_t kPrimeCap = uint64_t(1) << 32;

/// Deterministic primality for the full 64-bit range (fixed strong-probable-prime
/// witness set, no probabilistic mode).
bool is_prime(uint64_t n);

/// Primes in the half-open interval [lo, hi), ascending. Segmented generation,
/// memory stays O(segment). Requires lo <= hi <= 2^32.
std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi);

/// Legendre symbol (a|p) for an odd prime p: +1 for nonzero squares mod p,
/// -1 for non-squares, 0 when p divides a. Binary reciprocity algorithm;
/// the Euler criterion is used only as a test oracle.
int legendre(int64_t a, uint64_t p);

/// The odd character mod 4: 0 on even n, (-1)^((n-1)/2) on odd n.
int chi4(int64_t n);

// An odd prime together with its residue classes mod 4, 8, 12.
struct ClassifiedPrime {
    uint64_t p = 0;
    unsigned r4 = 0;
    unsigned r8 = 0;
    unsigned r12 = 0;
};

/// Primality-check p and populate its residue classes. Rejects even or
/// composite input and anything at or above 2^32.
ClassifiedPrime classify(uint64_t p);

// The three quadratic character families in play: chi_p, chi_3*chi_p and
// chi_4*chi_p.
enum class CharKind { ChiP, Chi3P, Chi4P };

struct QuadCharacter {
    CharKind kind = CharKind::ChiP;
    uint64_t p = 0;
    uint64_t modulus = 0;
    bool odd = false;  // parity: chi(-1) == -1
    // Fundamental discriminant < 0; present exactly when the character is odd
    // (-p, -3p or -4p depending on the family).
    std::optional<int64_t> discriminant;
};

/// Build a character of the given family over the odd prime p.
/// Chi3P requires p > 3.
QuadCharacter make_character(CharKind kind, uint64_t p);

/// Evaluate the character at n via multiplicative composition. Value is 0
/// exactly when gcd(n, modulus) > 1.
int char_eval(const QuadCharacter& chi, int64_t n);

const char* char_kind_name(CharKind kind);  // "p", "3p", "4p"

}  // namespace qrdist
