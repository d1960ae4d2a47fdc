#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrdist/classnum.hpp"
#include "qrdist/core_arith.hpp"
#include "qrdist/rational.hpp"

namespace qrdist {

// Arithmetic subsets of [1, p-1]: the multiples of k, the odd numbers, and
// the multiples of 2 that are not multiples of 4.
enum class SubsetKind { Multiples, Odds, S2MinusS4 };

struct SubsetSelector {
    SubsetKind kind = SubsetKind::Multiples;
    uint64_t k = 1;  // only meaningful for Multiples

    static SubsetSelector multiples(uint64_t k) { return {SubsetKind::Multiples, k}; }
    static SubsetSelector odds() { return {SubsetKind::Odds, 0}; }
    static SubsetSelector s2_minus_s4() { return {SubsetKind::S2MinusS4, 0}; }

    std::string name() const;  // "S2", "ODDS", "S2minusS4", ...
};

struct CountRecord {
    uint64_t p = 0;
    SubsetSelector selector;
    int64_t residues = 0;     // Q: quadratic residues in the subset
    int64_t nonresidues = 0;  // N
    uint64_t size = 0;        // |subset|
    Rational main_term;       // floor((p-1)/k)/2 for multiples, per-subset otherwise
    Rational gap;             // Q - main_term
    double eps = 0.25;
    double normalized_gap = 0.0;  // gap / p^(1/2 - eps)
};

// Quadratic-residue membership table over [1, p-1], built by marking
// x^2 mod p for x = 1..(p-1)/2. Table mode is capped at p < 2^26; larger
// primes must use the streaming counters.
class QrTable {
public:
    explicit QrTable(uint64_t p);
    uint64_t p() const { return p_; }
    bool is_qr(uint64_t a) const { return qr_[a % p_]; }
    int chi(uint64_t a) const {
        a %= p_;
        if (a == 0) return 0;
        return qr_[a] ? 1 : -1;
    }

private:
    uint64_t p_;
    std::vector<bool> qr_;
};

inline constexpr uint64_t kQrTableCap = uint64_t(1) << 26;

/// Brute-force count of residues/non-residues in the subset via per-element
/// Legendre symbols (streaming; no table needed).
CountRecord count_brute(uint64_t p, const SubsetSelector& sel, double eps = 0.25);

/// Same, reading chi from a prebuilt table; preferred when several subsets of
/// the same prime are counted.
CountRecord count_brute(const QrTable& table, const SubsetSelector& sel, double eps = 0.25);

/// Q(p, S_k) by the character-sum formula
///   floor((p-1)/k)/2 + (k|p)/2 * sum_{m<=floor((p-1)/k)} (m|p).
int64_t count_formula(uint64_t p, uint64_t k);

/// N(p, S_k): same expression with the minus sign.
int64_t count_formula_nonresidues(uint64_t p, uint64_t k);

struct ClosedFormResult {
    int64_t residues = 0;
    std::string derivation;  // driving identity, e.g. "C2" / "C3" / "C4"
};

/// Class-number closed form for Q(p, sel), exact in integers. Supported for
/// S_2, S_3, S_4, the odd numbers, and S_2 \ S_4; requires p > 3.
ClosedFormResult closed_form(const ClassifiedPrime& cp, const SubsetSelector& sel,
                             ClassNumberSource* src = nullptr);

/// gap / p^(1/2 - eps), sign preserving; eps must lie in (0, 1/2).
double normalized_gap(const CountRecord& rec, double eps);

std::string count_record_csv_header();
std::string count_record_csv_row(const ClassifiedPrime& cp, const CountRecord& rec);

// Shortest round-trip decimal formatting; used everywhere a float reaches
// an output file so that reports are byte-reproducible.
std::string format_double(double v);

}  // namespace qrdist
