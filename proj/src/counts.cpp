#include "qrdist/counts.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qrdist/charsum.hpp"

namespace qrdist {

namespace {

void require_odd_prime_arg(uint64_t p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("counts: p must be an odd prime");
}

void validate_selector(uint64_t p, const SubsetSelector& sel) {
    if (sel.kind == SubsetKind::Multiples && (sel.k < 1 || sel.k > p - 1))
        throw std::invalid_argument("count: k must lie in [1, p-1]");
}

Rational selector_main_term(uint64_t p, const SubsetSelector& sel) {
    switch (sel.kind) {
        case SubsetKind::Multiples:
            return Rational(static_cast<int64_t>((p - 1) / sel.k), 2);
        case SubsetKind::Odds:
            return Rational(static_cast<int64_t>(p - 1), 4);
        case SubsetKind::S2MinusS4:
            return Rational(static_cast<int64_t>((p - 1) / 4), 2);
    }
    return Rational(0);
}

// Applies fn to every subset element in ascending order.
template <typename Fn>
void for_each_member(uint64_t p, const SubsetSelector& sel, Fn&& fn) {
    switch (sel.kind) {
        case SubsetKind::Multiples:
            for (uint64_t a = sel.k; a <= p - 1; a += sel.k) fn(a);
            break;
        case SubsetKind::Odds:
            for (uint64_t a = 1; a <= p - 1; a += 2) fn(a);
            break;
        case SubsetKind::S2MinusS4:
            for (uint64_t a = 2; a <= p - 1; a += 4) fn(a);
            break;
    }
}

template <typename ChiFn>
CountRecord count_with(uint64_t p, const SubsetSelector& sel, double eps, ChiFn&& chi) {
    validate_selector(p, sel);
    CountRecord rec;
    rec.p = p;
    rec.selector = sel;
    rec.eps = eps;
    for_each_member(p, sel, [&](uint64_t a) {
        ++rec.size;
        const int c = chi(a);
        if (c > 0)
            ++rec.residues;
        else if (c < 0)
            ++rec.nonresidues;
    });
    rec.main_term = selector_main_term(p, sel);
    rec.gap = Rational(rec.residues) - rec.main_term;
    rec.normalized_gap = normalized_gap(rec, eps);
    return rec;
}

}  // namespace

std::string SubsetSelector::name() const {
    switch (kind) {
        case SubsetKind::Multiples:
            return "S" + std::to_string(k);
        case SubsetKind::Odds:
            return "ODDS";
        case SubsetKind::S2MinusS4:
            return "S2minusS4";
    }
    return "?";
}

QrTable::QrTable(uint64_t p) : p_(p) {
    require_odd_prime_arg(p);
    if (p >= kQrTableCap)
        throw std::invalid_argument(
            "qr_table: p at or above 2^26 exceeds the table memory guard; use streaming counts");
    qr_.assign(p, false);
    for (uint64_t x = 1; x <= (p - 1) / 2; ++x) qr_[x * x % p] = true;
}

CountRecord count_brute(uint64_t p, const SubsetSelector& sel, double eps) {
    require_odd_prime_arg(p);
    return count_with(p, sel, eps,
                      [p](uint64_t a) { return legendre(static_cast<int64_t>(a), p); });
}

CountRecord count_brute(const QrTable& table, const SubsetSelector& sel, double eps) {
    return count_with(table.p(), sel, eps, [&table](uint64_t a) { return table.chi(a); });
}

namespace {

int64_t formula_common(uint64_t p, uint64_t k, int sign) {
    require_odd_prime_arg(p);
    if (k % p == 0) throw std::invalid_argument("count_formula: k must not be a multiple of p");
    if (k < 1 || k > p - 1) throw std::invalid_argument("count_formula: k must lie in [1, p-1]");
    const uint64_t limit = (p - 1) / k;
    int64_t s = 0;
    for (uint64_t m = 1; m <= limit; ++m) s += legendre(static_cast<int64_t>(m), p);
    const int64_t twice = static_cast<int64_t>(limit) +
                          sign * legendre(static_cast<int64_t>(k), p) * s;
    if (twice % 2 != 0) throw std::logic_error("count_formula: parity violation");
    return twice / 2;
}

}  // namespace

int64_t count_formula(uint64_t p, uint64_t k) { return formula_common(p, k, +1); }

int64_t count_formula_nonresidues(uint64_t p, uint64_t k) { return formula_common(p, k, -1); }

namespace {

int64_t h_of(int64_t d, ClassNumberSource* src) {
    return src ? src->class_number(d) : class_number_forms(d);
}

Rational closed_form_s2(const ClassifiedPrime& cp, ClassNumberSource* src) {
    const auto p = static_cast<int64_t>(cp.p);
    if (cp.r4 == 1) return Rational(p - 1, 4);
    const int64_t h = h_of(-p, src);
    if (cp.r8 == 3) return Rational(p - 1, 4) - Rational(3 * h, 2);
    return Rational(p - 1, 4) + Rational(h, 2);  // r8 == 7
}

Rational closed_form_s3(const ClassifiedPrime& cp, ClassNumberSource* src) {
    const auto p = static_cast<int64_t>(cp.p);
    const int chi3 = legendre(3, cp.p);
    // S(1, p/3) expressed through class numbers (W2 for p = 3 mod 4, W3 else)
    const Rational s = (cp.r4 == 3) ? Rational((3 - chi3) * h_of(-p, src), 2)
                                    : Rational(h_of(-3 * p, src), 2);
    return Rational((p - 1) / 3, 2) + Rational(chi3, 2) * s;
}

Rational closed_form_s4(const ClassifiedPrime& cp, ClassNumberSource* src) {
    const auto p = static_cast<int64_t>(cp.p);
    if (cp.r4 == 1) return Rational(p - 1, 8) + Rational(h_of(-4 * p, src), 4);
    if (cp.r8 == 3) return Rational((p - 1) / 4, 2);
    return Rational((p - 1) / 4, 2) + Rational(h_of(-p, src), 2);  // r8 == 7
}

}  // namespace

ClosedFormResult closed_form(const ClassifiedPrime& cp, const SubsetSelector& sel,
                             ClassNumberSource* src) {
    if (cp.p <= 3) throw std::invalid_argument("closed_form: requires p > 3");
    validate_selector(cp.p, sel);
    const auto p = static_cast<int64_t>(cp.p);
    Rational q;
    std::string derivation;
    switch (sel.kind) {
        case SubsetKind::Multiples:
            if (sel.k == 2) {
                q = closed_form_s2(cp, src);
                derivation = "C2";
            } else if (sel.k == 3) {
                q = closed_form_s3(cp, src);
                derivation = "C3";
            } else if (sel.k == 4) {
                q = closed_form_s4(cp, src);
                derivation = "C4";
            } else {
                throw std::invalid_argument("closed_form: only S_2, S_3, S_4 have closed forms");
            }
            break;
        case SubsetKind::Odds:
            q = Rational(p - 1, 2) - closed_form_s2(cp, src);
            derivation = "C2";
            break;
        case SubsetKind::S2MinusS4:
            q = closed_form_s2(cp, src) - closed_form_s4(cp, src);
            derivation = "C2-C4";
            break;
    }
    if (!q.is_integer()) throw std::logic_error("closed_form: non-integral count");
    return {q.num, derivation};
}

double normalized_gap(const CountRecord& rec, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("normalized_gap: eps must lie in (0, 1/2)");
    return rec.gap.to_double() / std::pow(static_cast<double>(rec.p), 0.5 - eps);
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string count_record_csv_header() {
    return "p,class4,class8,class12,selector,Q,N,size,main_term,gap,normalized_gap";
}

std::string count_record_csv_row(const ClassifiedPrime& cp, const CountRecord& rec) {
    std::string row = std::to_string(rec.p);
    row += ',' + std::to_string(cp.r4);
    row += ',' + std::to_string(cp.r8);
    row += ',' + std::to_string(cp.r12);
    row += ',' + rec.selector.name();
    row += ',' + std::to_string(rec.residues);
    row += ',' + std::to_string(rec.nonresidues);
    row += ',' + std::to_string(rec.size);
    row += ',' + rec.main_term.str();
    row += ',' + rec.gap.str();
    row += ',' + format_double(rec.normalized_gap);
    return row;
}

}  // namespace qrdist
