#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specialforms/scalar.hpp"

#include <random>

using namespace specialforms;

namespace {

Scalar one_plus_i() { return Scalar::one() + Scalar::i(); }
Scalar one_minus_i() { return Scalar::one() - Scalar::i(); }

Scalar random_scalar(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> piexp(-2, 2);
    std::uniform_int_distribution<int> nterms(0, 3);
    Scalar s = Scalar::zero();
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        CycElem e(Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)),
                  Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)));
        s += Scalar::of(e, piexp(rng));
    }
    return s;
}

}  // namespace

TEST_CASE("conjugate sum and products") {
    CHECK(one_plus_i() + one_minus_i() == Scalar::integer(2));
    CHECK(Scalar::pi_pow(1) + Scalar::zero() == Scalar::pi_pow(1));
    Scalar t = Scalar::sqrt2() * Scalar::pi_pow(-1);
    CHECK(t + t == Scalar::integer(2) * Scalar::sqrt2() * Scalar::pi_pow(-1));
    CHECK(one_plus_i() * one_minus_i() == Scalar::integer(2));
    CHECK(Scalar::sqrt2() * Scalar::sqrt2() == Scalar::integer(2));
    CHECK(Scalar::two_pi_i_pow(-1) * Scalar::two_pi_i_pow(1) == Scalar::one());
}

TEST_CASE("inverse") {
    // (2 pi i)^-1 = -(i/2) pi^-1.
    Scalar inv = Scalar::two_pi_i_pow(1).inv();
    Scalar expected = Scalar::of(CycElem(0, Rational(-1, 2), 0, 0), -1);
    CHECK(inv == expected);
    CHECK(inv == Scalar::two_pi_i_pow(-1));
    CHECK(Scalar::one().inv() == Scalar::one());
    CHECK_THROWS_AS(Scalar::zero().inv(), std::domain_error);
    CHECK_THROWS_AS((Scalar::one() + Scalar::pi_pow(1)).inv(), std::domain_error);
    // Units of the field invert exactly.
    Scalar u = Scalar::one() + Scalar::sqrt2() + Scalar::i();
    CHECK(u * u.inv() == Scalar::one());
}

TEST_CASE("sqrt2 and 2*pi*i powers") {
    CHECK(Scalar::sqrt2_pow(2) == Scalar::integer(2));
    CHECK(Scalar::sqrt2_pow(-2) == Scalar::rational(Rational(1, 2)));
    CHECK(Scalar::sqrt2_pow(-1) * Scalar::sqrt2() == Scalar::one());
    CHECK(Scalar::sqrt2_pow(-3) * Scalar::sqrt2_pow(3) == Scalar::one());
    CHECK(Scalar::two_pi_i_pow(2) == Scalar::of(CycElem(-4, 0, 0, 0), 2));
}

TEST_CASE("ring axioms on random scalars") {
    std::mt19937_64 rng(20240811);
    for (int rep = 0; rep < 200; ++rep) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a - a == Scalar::zero());
    }
}

TEST_CASE("nonzero iff nonempty term map") {
    Scalar s = Scalar::sqrt2_pow(-1) * Scalar::two_pi_i_pow(-3) * Scalar::integer(8);
    CHECK(!s.is_zero());
    CHECK(s - s == Scalar::zero());
    CHECK((s - s).is_zero());
}

TEST_CASE("canonical rendering") {
    Scalar s = Scalar::of(CycElem(0, Rational(3, 2), 0, 0), -1) + Scalar::sqrt2();
    CHECK(s.str() == "3/2*i*pi^-1 + sqrt2");
    CHECK(Scalar::zero().str() == "0");
    CHECK(Scalar::integer(-1).str() == "-1");
    CHECK((-(Scalar::pi_pow(2))).str() == "-pi^2");
    CHECK(Scalar::two_pi_i_pow(-1).str() == "-1/2*i*pi^-1");
}

TEST_CASE("numeric evaluation") {
    std::complex<double> v = Scalar::two_pi_i_pow(1).eval();
    CHECK(v.real() == doctest::Approx(0.0));
    CHECK(v.imag() == doctest::Approx(6.283185307179586));
    CHECK(Scalar::sqrt2().eval().real() == doctest::Approx(1.4142135623730951));
}
