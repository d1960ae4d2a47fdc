#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qrdist/counts.hpp"
#include "qrdist/core_arith.hpp"

using namespace qrdist;

TEST_CASE("qr_table marks exactly the squares") {
    const QrTable t7(7);
    std::set<uint64_t> qrs7;
    for (uint64_t a = 1; a < 7; ++a)
        if (t7.is_qr(a)) qrs7.insert(a);
    CHECK(qrs7 == std::set<uint64_t>{1, 2, 4});

    const QrTable t11(11);
    std::set<uint64_t> qrs11;
    for (uint64_t a = 1; a < 11; ++a)
        if (t11.is_qr(a)) qrs11.insert(a);
    CHECK(qrs11 == std::set<uint64_t>{1, 3, 4, 5, 9});

    const QrTable t13(13);
    std::set<uint64_t> qrs13;
    for (uint64_t a = 1; a < 13; ++a)
        if (t13.is_qr(a)) qrs13.insert(a);
    CHECK(qrs13 == std::set<uint64_t>{1, 3, 4, 9, 10, 12});

    // exactly (p-1)/2 entries marked, chi agrees with legendre
    for (uint64_t p : primes_in_range(3, 500)) {
        const QrTable t(p);
        uint64_t marked = 0;
        for (uint64_t a = 1; a < p; ++a) {
            if (t.is_qr(a)) ++marked;
            CHECK(t.chi(a) == legendre(static_cast<int64_t>(a), p));
        }
        CHECK(marked == (p - 1) / 2);
        CHECK(t.chi(p) == 0);
    }
}

TEST_CASE("qr_table memory guard") {
    CHECK_THROWS_WITH_AS(QrTable((uint64_t(1) << 26) + 3), doctest::Contains("streaming"),
                         std::invalid_argument);
}

TEST_CASE("count_brute frozen examples") {
    const auto r7 = count_brute(7, SubsetSelector::multiples(2));
    CHECK(r7.residues == 2);  // evens {2,4,6}, QRs {2,4}
    CHECK(r7.nonresidues == 1);
    CHECK(r7.size == 3);

    CHECK(count_brute(13, SubsetSelector::multiples(2)).residues == 3);  // (13-1)/4
    CHECK(count_brute(11, SubsetSelector::multiples(4)).residues == 1);  // floor(10/4)/2
    CHECK(count_brute(13, SubsetSelector::multiples(3)).residues == 3);

    const auto r5 = count_brute(5, SubsetSelector::multiples(3));
    CHECK(r5.residues == 0);  // subset {3}, non-residue mod 5
    CHECK(r5.nonresidues == 1);

    const auto odds7 = count_brute(7, SubsetSelector::odds());
    CHECK(odds7.residues == 1);  // odd QRs mod 7: {1}
    CHECK(odds7.nonresidues == 2);
    CHECK(odds7.size == 3);

    CHECK_THROWS_AS(count_brute(7, SubsetSelector::multiples(7)), std::invalid_argument);
    CHECK_THROWS_AS(count_brute(7, SubsetSelector::multiples(0)), std::invalid_argument);
}

TEST_CASE("table and streaming counters agree") {
    for (uint64_t p : primes_in_range(5, 300)) {
        const QrTable t(p);
        for (const auto& sel :
             {SubsetSelector::multiples(2), SubsetSelector::multiples(3), SubsetSelector::odds(),
              SubsetSelector::s2_minus_s4()}) {
            const auto a = count_brute(p, sel);
            const auto b = count_brute(t, sel);
            CHECK(a.residues == b.residues);
            CHECK(a.nonresidues == b.nonresidues);
            CHECK(a.size == b.size);
        }
    }
}

TEST_CASE("count_formula frozen examples and equivalence with brute force") {
    CHECK(count_formula(7, 2) == 2);
    CHECK(count_formula(11, 2) == 1);
    for (uint64_t p : {5ull, 13ull, 101ull, 9973ull})
        CHECK(count_formula(p, 1) == static_cast<int64_t>((p - 1) / 2));

    for (uint64_t p : primes_in_range(3, 300)) {
        const uint64_t kmax = std::min<uint64_t>(p - 1, 50);
        for (uint64_t k = 1; k <= kmax; ++k) {
            const auto brute = count_brute(p, SubsetSelector::multiples(k));
            CHECK(count_formula(p, k) == brute.residues);
            CHECK(count_formula_nonresidues(p, k) == brute.nonresidues);
        }
    }
    CHECK_THROWS_AS(count_formula(7, 14), std::invalid_argument);
    CHECK_THROWS_AS(count_formula(7, 0), std::invalid_argument);
}

TEST_CASE("closed_form frozen examples") {
    CHECK(closed_form(classify(13), SubsetSelector::multiples(4)).residues == 2);
    CHECK(closed_form(classify(23), SubsetSelector::multiples(4)).residues == 4);
    CHECK(closed_form(classify(19), SubsetSelector::multiples(2)).residues == 3);
    CHECK(closed_form(classify(11), SubsetSelector::multiples(3)).residues == 2);
    CHECK(closed_form(classify(13), SubsetSelector::multiples(2)).derivation == "C2");
    CHECK_THROWS_AS(closed_form(classify(3), SubsetSelector::multiples(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(closed_form(classify(13), SubsetSelector::multiples(5)),
                    std::invalid_argument);
}

TEST_CASE("closed_form equals brute force for every selector, 3 < p < 2000") {
    for (uint64_t p : primes_in_range(5, 2000)) {
        const auto cp = classify(p);
        const QrTable t(p);
        for (const auto& sel :
             {SubsetSelector::multiples(2), SubsetSelector::multiples(3),
              SubsetSelector::multiples(4), SubsetSelector::odds(),
              SubsetSelector::s2_minus_s4()}) {
            const auto brute = count_brute(t, sel);
            const auto cf = closed_form(cp, sel);
            if (cf.residues != brute.residues) {
                CAPTURE(p);
                CAPTURE(sel.name());
                REQUIRE(cf.residues == brute.residues);
            }
        }
    }
}

TEST_CASE("odds and evens partition the residues") {
    for (uint64_t p : primes_in_range(3, 1000)) {
        const QrTable t(p);
        const auto odds = count_brute(t, SubsetSelector::odds());
        const auto evens = count_brute(t, SubsetSelector::multiples(2));
        CHECK(odds.residues + evens.residues == static_cast<int64_t>((p - 1) / 2));
        // reflection a <-> p-a swaps parity and residue status for p = 3 (mod 4)
        if (p % 4 == 3) CHECK(odds.residues == evens.nonresidues);
    }
}

TEST_CASE("gap vanishes exactly on the exact-count classes") {
    for (uint64_t p : primes_in_range(5, 2000)) {
        const auto cp = classify(p);
        const QrTable t(p);
        for (const auto& sel :
             {SubsetSelector::multiples(2), SubsetSelector::multiples(3),
              SubsetSelector::multiples(4), SubsetSelector::odds(),
              SubsetSelector::s2_minus_s4()}) {
            const auto rec = count_brute(t, sel);
            const bool expect_zero = (sel.name() == "S2" && cp.r4 == 1) ||
                                     (sel.name() == "S4" && cp.r8 == 3) ||
                                     (sel.name() == "ODDS" && cp.r4 == 1);
            CHECK((rec.gap.signum() == 0) == expect_zero);
        }
    }
}

TEST_CASE("Q stays within the sqrt(p) ln(p) envelope") {
    for (uint64_t p : primes_in_range(3, 2000)) {
        const QrTable t(p);
        const double envelope =
            0.5 * std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p));
        const uint64_t kmax = std::min<uint64_t>(p - 1, 50);
        for (uint64_t k = 1; k <= kmax; ++k) {
            const auto rec = count_brute(t, SubsetSelector::multiples(k));
            CHECK(std::fabs(rec.gap.to_double()) <= envelope);
        }
    }
}

TEST_CASE("normalized_gap frozen examples") {
    const auto r13 = count_brute(13, SubsetSelector::multiples(2));
    CHECK(normalized_gap(r13, 0.25) == 0.0);

    const auto r23 = count_brute(23, SubsetSelector::multiples(2));
    CHECK(r23.gap == Rational(3, 2));
    CHECK(normalized_gap(r23, 0.25) == doctest::Approx(0.685).epsilon(1e-3));

    const auto r11 = count_brute(11, SubsetSelector::multiples(2));
    CHECK(r11.gap == Rational(-3, 2));
    CHECK(normalized_gap(r11, 0.25) == doctest::Approx(-0.824).epsilon(1e-3));

    CHECK_THROWS_AS(normalized_gap(r11, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(normalized_gap(r11, 0.5), std::invalid_argument);
}

TEST_CASE("CSV row format") {
    CHECK(count_record_csv_header() ==
          "p,class4,class8,class12,selector,Q,N,size,main_term,gap,normalized_gap");
    const auto rec = count_brute(13, SubsetSelector::multiples(2));
    CHECK(count_record_csv_row(classify(13), rec) == "13,1,5,1,S2,3,3,6,3,0,0");
    const auto rec23 = count_brute(23, SubsetSelector::multiples(2));
    const auto row = count_record_csv_row(classify(23), rec23);
    CHECK(row.substr(0, 26) == "23,3,7,11,S2,7,4,11,11/2,3");
}

TEST_CASE("rational arithmetic basics") {
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(-3, 2) == Rational(3, -2));
    CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
    CHECK((Rational(1, 2) - Rational(3, 2)) == Rational(-1));
    CHECK(Rational(5, 2) > Rational(2));
    CHECK(Rational(0, 7).den == 1);
    CHECK(Rational(7, 2).is_integer() == false);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}
