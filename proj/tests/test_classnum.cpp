#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qrdist/classnum.hpp"
#include "qrdist/core_arith.hpp"

using namespace qrdist;

TEST_CASE("fundamental discriminant recognition") {
    for (int64_t d : {-3, -4, -7, -8, -11, -15, -20, -23, -39, -52}) {
        CAPTURE(d);
        CHECK(is_fundamental_discriminant(d));
    }
    for (int64_t d : {-1, -5, -9, -12, -16, -25, -27, -28, -45, 0, 5, 23}) {
        CAPTURE(d);
        CHECK_FALSE(is_fundamental_discriminant(d));
    }
}

TEST_CASE("class_number_forms frozen examples") {
    CHECK(class_number_forms(-3) == 1);
    CHECK(class_number_forms(-4) == 1);   // only (1,0,1)
    CHECK(class_number_forms(-7) == 1);
    CHECK(class_number_forms(-8) == 1);   // (1,0,2)
    CHECK(class_number_forms(-23) == 3);  // (1,1,6), (2,+-1,3)
    CHECK(class_number_forms(-39) == 4);  // (1,1,10), (2,+-1,5), (3,3,4)
    CHECK(class_number_forms(-52) == 2);  // (1,0,13), (2,2,7)
    CHECK(class_number_forms(-163) == 1);
    CHECK_THROWS_AS(class_number_forms(-12), std::invalid_argument);
    CHECK_THROWS_AS(class_number_forms(5), std::invalid_argument);
}

TEST_CASE("class_number_weighted frozen examples") {
    // d = -7: sum a*chi(a) = 1+2-3+4-5-6 = -7, h = -(2/14)(-7) = 1
    CHECK(class_number_weighted(make_character(CharKind::ChiP, 7)) == 1);
    CHECK(class_number_weighted(make_character(CharKind::ChiP, 11)) == 1);
    CHECK(class_number_weighted(make_character(CharKind::Chi4P, 13)) == 2);
    // d = -3 exercises w = 6
    CHECK(class_number_weighted(make_character(CharKind::ChiP, 3)) == 1);
    CHECK_THROWS_AS(class_number_weighted(make_character(CharKind::ChiP, 13)),
                    std::invalid_argument);  // even character
}

TEST_CASE("forms and weighted oracles agree for every family discriminant |d| <= 200") {
    int checked = 0;
    for (uint64_t p : primes_in_range(3, 200)) {
        if (p % 4 == 3) {
            const auto chi = make_character(CharKind::ChiP, p);
            CHECK(class_number_forms(-static_cast<int64_t>(p)) == class_number_weighted(chi));
            ++checked;
        } else {
            if (3 * p <= 200) {
                const auto chi = make_character(CharKind::Chi3P, p);
                CHECK(class_number_forms(-static_cast<int64_t>(3 * p)) ==
                      class_number_weighted(chi));
                ++checked;
            }
            if (4 * p <= 200) {
                const auto chi = make_character(CharKind::Chi4P, p);
                CHECK(class_number_forms(-static_cast<int64_t>(4 * p)) ==
                      class_number_weighted(chi));
                ++checked;
            }
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("h(-p) is odd for p = 3 (mod 4), p > 3") {
    for (uint64_t p : primes_in_range(5, 10000)) {
        if (p % 4 != 3) continue;
        const int64_t h = class_number_forms(-static_cast<int64_t>(p));
        if (h % 2 != 1) {
            CAPTURE(p);
            REQUIRE(h % 2 == 1);
        }
    }
}

TEST_CASE("discriminant_character maps back to the families") {
    CHECK(discriminant_character(-7).kind == CharKind::ChiP);
    CHECK(discriminant_character(-3).kind == CharKind::ChiP);  // chi_3 via p = 3
    CHECK(discriminant_character(-39).kind == CharKind::Chi3P);
    CHECK(discriminant_character(-52).kind == CharKind::Chi4P);
    CHECK(discriminant_character(-20).p == 5);
    CHECK_THROWS_AS(discriminant_character(-8), std::invalid_argument);
    CHECK_THROWS_AS(discriminant_character(-4), std::invalid_argument);
}

TEST_CASE("l_value_exact frozen examples") {
    // pi*h/sqrt|d| for w = 2; decimals frozen from 30-digit arithmetic
    CHECK(l_value_exact(make_character(CharKind::ChiP, 7)).exact_value ==
          doctest::Approx(1.1874104).epsilon(1e-6));
    CHECK(l_value_exact(make_character(CharKind::ChiP, 23)).exact_value ==
          doctest::Approx(1.9652021).epsilon(1e-6));
    CHECK(l_value_exact(make_character(CharKind::Chi4P, 13)).exact_value ==
          doctest::Approx(0.8713210).epsilon(1e-6));
    CHECK(l_value_exact(make_character(CharKind::Chi3P, 13)).exact_value ==
          doctest::Approx(2.0122297).epsilon(1e-6));
    CHECK_THROWS_AS(l_value_exact(make_character(CharKind::ChiP, 13)), std::invalid_argument);
}

TEST_CASE("series converges to the exact value within the tail bound") {
    struct Sample {
        CharKind kind;
        uint64_t p;
    };
    for (const Sample s : {Sample{CharKind::ChiP, 7}, Sample{CharKind::ChiP, 23},
                           Sample{CharKind::ChiP, 31}, Sample{CharKind::Chi3P, 5},
                           Sample{CharKind::Chi3P, 13}, Sample{CharKind::Chi4P, 13},
                           Sample{CharKind::Chi4P, 29}}) {
        const auto chi = make_character(s.kind, s.p);
        const auto exact = l_value_exact(chi).exact_value;
        const auto [series, tail] = l_value_series(chi, 20000);
        CAPTURE(s.p);
        CHECK(std::fabs(series - exact) <= tail);
        CHECK(exact > 0.0);
    }
}

TEST_CASE("tail bound follows the 1/terms law") {
    const auto chi = make_character(CharKind::ChiP, 7);
    const auto [s1, t1] = l_value_series(chi, 10000);
    const auto [s2, t2] = l_value_series(chi, 20000);
    CHECK(t1 == doctest::Approx(2 * t2));
    CHECK_THROWS_AS(l_value_series(chi, 3), std::invalid_argument);  // below the modulus
}

TEST_CASE("class number identities W1-W4 on worked primes") {
    auto outcome = check_class_number_identity(classify(7), ClassNumberIdentity::W1);
    CHECK(outcome.pass);
    CHECK(outcome.lhs == 1);
    CHECK(outcome.rhs == 1);  // (2 - 1) * h(-7)

    outcome = check_class_number_identity(classify(11), ClassNumberIdentity::W2);
    CHECK(outcome.pass);
    CHECK(outcome.lhs == 2);
    CHECK(outcome.rhs == 2);  // (3 - 1) * h(-11)

    outcome = check_class_number_identity(classify(13), ClassNumberIdentity::W3);
    CHECK(outcome.pass);
    CHECK(outcome.lhs == 4);
    CHECK(outcome.rhs == 4);  // h(-39)

    outcome = check_class_number_identity(classify(13), ClassNumberIdentity::W4);
    CHECK(outcome.pass);
    CHECK(outcome.lhs == 2);
    CHECK(outcome.rhs == 2);  // h(-52)

    CHECK_THROWS_AS(check_class_number_identity(classify(13), ClassNumberIdentity::W1),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_class_number_identity(classify(11), ClassNumberIdentity::W4),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_class_number_identity(classify(3), ClassNumberIdentity::W1),
                    std::invalid_argument);
}

TEST_CASE("cache round trip, ordering and atomic rewrite") {
    const auto dir = std::filesystem::temp_directory_path() / "qrdist_cache_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "classnum.csv").string();

    ClassNumberCache cache;
    CHECK(cache.class_number(-23) == 3);
    CHECK(cache.class_number(-7) == 1);
    CHECK(cache.class_number(-52) == 2);
    CHECK(cache.size() == 3);
    cache.save(path);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "d,h");
    std::getline(in, line);
    CHECK(line == "-7,1");  // ascending |d|
    std::getline(in, line);
    CHECK(line == "-23,3");
    std::getline(in, line);
    CHECK(line == "-52,2");

    ClassNumberCache reloaded;
    reloaded.load(path);
    CHECK(reloaded.size() == 3);
    CHECK(reloaded.lookup(-23) == 3);
    CHECK_FALSE(reloaded.lookup(-11).has_value());
    CHECK(reloaded.class_number(-11) == 1);  // computed on miss

    ClassNumberCache missing;
    missing.load((dir / "absent.csv").string());  // silently empty
    CHECK(missing.size() == 0);
    std::filesystem::remove_all(dir);
}
