#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "qrdist/core_arith.hpp"

namespace qrdist {

/// True for negative fundamental discriminants: d = 1 (mod 4) squarefree,
/// or d = 4m with m = 2 or 3 (mod 4) squarefree.
bool is_fundamental_discriminant(int64_t d);

/// Unit count w of the order of discriminant d: 6 for -3, 4 for -4, else 2.
int unit_count(int64_t d);

/// Class number h(d) by counting reduced primitive forms (a,b,c) with
/// b^2 - 4ac = d, -a < b <= a <= c, b >= 0 when a = c, gcd(a,b,c) = 1.
/// O(|d|) via the a <= sqrt(|d|/3) outer loop.
int64_t class_number_forms(int64_t d);

/// Class number by the finite weighted sum h = -(w/2|d|) * sum a*chi(a),
/// evaluated in exact integer arithmetic. Only odd characters qualify.
/// A divisibility violation signals a character-evaluation bug and raises.
int64_t class_number_weighted(const QuadCharacter& chi);

enum class ClassNumberMethod { Forms, WeightedSum };

struct ClassNumberRecord {
    int64_t d = 0;
    int64_t h = 0;
    int w = 2;
    ClassNumberMethod method = ClassNumberMethod::Forms;
};

/// Map a discriminant back to its character family (-p, -3p or -4p; -3 is
/// reached as chi_3 via p = 3). Throws when d fits no family.
QuadCharacter discriminant_character(int64_t d);

// Abstract h(d) supplier so callers can route through a cache.
class ClassNumberSource {
public:
    virtual ~ClassNumberSource() = default;
    virtual int64_t class_number(int64_t d) = 0;
};

// Persistent d -> h cache. File format: CSV with header `d,h`, rows in
// ascending |d|, rewritten atomically (temp file + rename). Absence of the
// cache never changes results, only speed. Not thread-safe; concurrent
// readers must share an immutable snapshot.
class ClassNumberCache : public ClassNumberSource {
public:
    ClassNumberCache() = default;

    void load(const std::string& path);        // missing file is fine
    void save(const std::string& path) const;  // atomic rewrite
    std::optional<int64_t> lookup(int64_t d) const;
    void insert(int64_t d, int64_t h);
    int64_t class_number(int64_t d) override;  // forms oracle on miss
    size_t size() const { return by_d_.size(); }

private:
    std::map<int64_t, int64_t> by_d_;
};

struct LValueRecord {
    QuadCharacter chi;
    double exact_value = 0.0;  // 2*pi*h / (w * sqrt|d|)
    double series_value = 0.0;
    uint64_t series_terms = 0;
    double tail_bound = 0.0;
};

/// L(1, chi) through the class number formula; requires an odd character.
LValueRecord l_value_exact(const QuadCharacter& chi, ClassNumberSource* src = nullptr);

/// Truncated series sum_{n<=terms} chi(n)/n plus the partial-summation tail
/// bound 2*sqrt(q)*ln(q)/terms. Requires terms >= modulus.
std::pair<double, double> l_value_series(const QuadCharacter& chi, uint64_t terms);

// The four exact integer identities tying half/third/quarter character sums
// to class numbers:
//   W1 (p = 3 mod 4):  S(1,p/2)   = (2 - (2|p)) * h(-p)
//   W2 (p = 3 mod 4):  2*S(1,p/3) = (3 - (3|p)) * h(-p)
//   W3 (p = 1 mod 4):  2*S(1,p/3) = h(-3p)
//   W4 (p = 1 mod 4):  2*S(1,p/4) = h(-4p)
// All require p > 3.
enum class ClassNumberIdentity { W1, W2, W3, W4 };

struct ClassNumberIdentityOutcome {
    bool pass = false;
    int64_t lhs = 0;
    int64_t rhs = 0;
    int64_t d = 0;  // the discriminant whose h enters the right side
};

ClassNumberIdentityOutcome check_class_number_identity(const ClassifiedPrime& cp,
                                                       ClassNumberIdentity which,
                                                       ClassNumberSource* src = nullptr);

const char* class_number_identity_name(ClassNumberIdentity which);

}  // namespace qrdist
