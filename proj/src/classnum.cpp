#include "qrdist/classnum.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qrdist/charsum.hpp"

namespace qrdist {

namespace {

bool squarefree(uint64_t n) {
    if (n % 4 == 0) return false;
    for (uint64_t q = 3; q * q <= n; q += 2) {
        if (n % (q * q) == 0) return false;
    }
    return true;
}

void require_fundamental(int64_t d) {
    if (d >= 0) throw std::invalid_argument("class number: discriminant must be negative");
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("class number: discriminant is not fundamental");
}

int64_t gcd3(int64_t a, int64_t b, int64_t c) {
    return std::gcd(std::gcd(a, b < 0 ? -b : b), c);
}

}  // namespace

bool is_fundamental_discriminant(int64_t d) {
    if (d >= 0) return false;
    const uint64_t ad = static_cast<uint64_t>(-d);
    const int64_t mod4 = ((d % 4) + 4) % 4;
    if (mod4 == 1) return squarefree(ad);
    if (mod4 != 0) return false;
    const int64_t m = d / 4;
    const int64_t m4 = ((m % 4) + 4) % 4;
    if (m4 != 2 && m4 != 3) return false;
    return squarefree(static_cast<uint64_t>(-m));
}

int unit_count(int64_t d) {
    if (d == -3) return 6;
    if (d == -4) return 4;
    return 2;
}

int64_t class_number_forms(int64_t d) {
    require_fundamental(d);
    const int64_t abs_d = -d;
    const int64_t b_parity = abs_d & 1;  // b^2 = d (mod 4) forces b's parity
    int64_t count = 0;
    for (int64_t a = 1; 3 * a * a <= abs_d; ++a) {
        for (int64_t b = -a + 1; b <= a; ++b) {
            if ((b & 1) != b_parity) continue;
            const int64_t num = b * b + abs_d;
            if (num % (4 * a) != 0) continue;
            const int64_t c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd3(a, b, c) != 1) continue;
            ++count;
        }
    }
    return count;
}

int64_t class_number_weighted(const QuadCharacter& chi) {
    if (!chi.odd || !chi.discriminant)
        throw std::invalid_argument("class_number_weighted: character must be odd");
    const int64_t d = *chi.discriminant;
    const int64_t abs_d = -d;
    const int w = unit_count(d);
    __int128 sum = 0;
    for (int64_t a = 1; a < abs_d; ++a) sum += static_cast<__int128>(a) * char_eval(chi, a);
    const __int128 numer = -static_cast<__int128>(w) * sum;
    const int64_t denom = 2 * abs_d;
    if (numer % denom != 0)
        throw std::logic_error("class_number_weighted: weighted sum not divisible by 2|d|");
    const auto h = static_cast<int64_t>(numer / denom);
    if (h < 1) throw std::logic_error("class_number_weighted: nonpositive class number");
    return h;
}

QuadCharacter discriminant_character(int64_t d) {
    require_fundamental(d);
    const uint64_t ad = static_cast<uint64_t>(-d);
    if (ad % 4 == 0 && is_prime(ad / 4) && (ad / 4) % 4 == 1)
        return make_character(CharKind::Chi4P, ad / 4);
    if (ad % 3 == 0 && ad / 3 > 1 && is_prime(ad / 3) && (ad / 3) % 4 == 1)
        return make_character(CharKind::Chi3P, ad / 3);
    if (is_prime(ad) && ad % 4 == 3) return make_character(CharKind::ChiP, ad);
    throw std::invalid_argument("discriminant_character: no character family matches d");
}

void ClassNumberCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line)) return;
    if (line != "d,h") throw std::runtime_error("class-number cache: bad header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("class-number cache: malformed row in " + path);
        const int64_t d = std::stoll(line.substr(0, comma));
        const int64_t h = std::stoll(line.substr(comma + 1));
        by_d_[d] = h;
    }
}

void ClassNumberCache::save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("class-number cache: cannot write " + tmp);
        out << "d,h\n";
        // map ascends in d, so reverse iteration gives ascending |d|
        for (auto it = by_d_.rbegin(); it != by_d_.rend(); ++it)
            out << it->first << ',' << it->second << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::optional<int64_t> ClassNumberCache::lookup(int64_t d) const {
    const auto it = by_d_.find(d);
    if (it == by_d_.end()) return std::nullopt;
    return it->second;
}

void ClassNumberCache::insert(int64_t d, int64_t h) { by_d_[d] = h; }

int64_t ClassNumberCache::class_number(int64_t d) {
    if (auto h = lookup(d)) return *h;
    const int64_t h = class_number_forms(d);
    by_d_[d] = h;
    return h;
}

namespace {

int64_t class_number_of(int64_t d, ClassNumberSource* src) {
    return src ? src->class_number(d) : class_number_forms(d);
}

}  // namespace

LValueRecord l_value_exact(const QuadCharacter& chi, ClassNumberSource* src) {
    if (!chi.odd || !chi.discriminant)
        throw std::invalid_argument("l_value_exact: character must be odd");
    const int64_t d = *chi.discriminant;
    const int64_t h = class_number_of(d, src);
    const int w = unit_count(d);
    LValueRecord rec;
    rec.chi = chi;
    rec.exact_value = 2.0 * std::numbers::pi * static_cast<double>(h) /
                      (static_cast<double>(w) * std::sqrt(static_cast<double>(-d)));
    return rec;
}

std::pair<double, double> l_value_series(const QuadCharacter& chi, uint64_t terms) {
    if (terms < chi.modulus)
        throw std::invalid_argument("l_value_series: need at least one full period of terms");
    double sum = 0.0;
    for (uint64_t n = 1; n <= terms; ++n)
        sum += static_cast<double>(char_eval(chi, static_cast<int64_t>(n))) / static_cast<double>(n);
    const auto q = static_cast<double>(chi.modulus);
    const double tail = 2.0 * std::sqrt(q) * std::log(q) / static_cast<double>(terms);
    return {sum, tail};
}

ClassNumberIdentityOutcome check_class_number_identity(const ClassifiedPrime& cp,
                                                       ClassNumberIdentity which,
                                                       ClassNumberSource* src) {
    const auto p = cp.p;
    if (p <= 3)
        throw std::invalid_argument("class number identity: requires p > 3");
    const auto sp = static_cast<int64_t>(p);
    ClassNumberIdentityOutcome out;
    switch (which) {
        case ClassNumberIdentity::W1:
            if (cp.r4 != 3) throw std::invalid_argument("W1 applies to p = 3 (mod 4)");
            out.d = -sp;
            out.lhs = partial_sum(p, 1, 2);
            out.rhs = (2 - legendre(2, p)) * class_number_of(out.d, src);
            break;
        case ClassNumberIdentity::W2:
            if (cp.r4 != 3) throw std::invalid_argument("W2 applies to p = 3 (mod 4)");
            out.d = -sp;
            out.lhs = 2 * partial_sum(p, 1, 3);
            out.rhs = (3 - legendre(3, p)) * class_number_of(out.d, src);
            break;
        case ClassNumberIdentity::W3:
            if (cp.r4 != 1) throw std::invalid_argument("W3 applies to p = 1 (mod 4)");
            out.d = -3 * sp;
            out.lhs = 2 * partial_sum(p, 1, 3);
            out.rhs = class_number_of(out.d, src);
            break;
        case ClassNumberIdentity::W4:
            if (cp.r4 != 1) throw std::invalid_argument("W4 applies to p = 1 (mod 4)");
            out.d = -4 * sp;
            out.lhs = 2 * partial_sum(p, 1, 4);
            out.rhs = class_number_of(out.d, src);
            break;
    }
    out.pass = (out.lhs == out.rhs);
    return out;
}

const char* class_number_identity_name(ClassNumberIdentity which) {
    switch (which) {
        case ClassNumberIdentity::W1:
            return "W1";
        case ClassNumberIdentity::W2:
            return "W2";
        case ClassNumberIdentity::W3:
            return "W3";
        case ClassNumberIdentity::W4:
            return "W4";
    }
    return "?";
}

}  // namespace qrdist
