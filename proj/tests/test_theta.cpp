#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specialforms/theta.hpp"

#include <cmath>
#include <random>

using namespace specialforms;
using namespace specialforms::theta;
using liegeom::ParabolicData;
using liegeom::QuadSpace;
using weil::GaussPoly;

namespace {

LatticeCoset unit_lattice(int d, Rational scale = 1, std::vector<Rational> shift = {}) {
    LatticeCoset L;
    L.basis.assign(d, std::vector<Rational>(d, Rational(0)));
    for (int i = 0; i < d; ++i) L.basis[i][i] = scale;
    L.shift = shift.empty() ? std::vector<Rational>(d, Rational(0)) : shift;
    return L;
}

GaussPoly xpoly(int d, int var, int deg = 1) {
    GaussPoly g = GaussPoly::gaussian(1, d);
    return GaussPoly(1, d, g.poly().mul_var(var, deg));
}

// Direct summation oracle over a box, no enumeration machinery.
double direct_sum_1d(double c, double h, const std::function<double(double)>& f) {
    double s = 0;
    for (long long k = -200; k <= 200; ++k) s += f(c * k + h);
    return s;
}

}  // namespace

TEST_CASE("classical theta value") {
    // L = Z, h = 0, phi = phi_0, t = 1: sum e^{-pi k^2} = 1.0864348...
    ThetaValue v = theta_eval({unit_lattice(1)}, GaussPoly::gaussian(1, 1), 1.0, 8.0);
    double oracle = direct_sum_1d(1.0, 0.0, [](double x) { return std::exp(-M_PI * x * x); });
    CHECK(std::abs(v.value.real() - oracle) < 1e-14);
    CHECK(std::abs(v.value.real() - 1.0864348112133080) < 1e-12);
    CHECK(v.tail < 1e-12);
    CHECK(v.value.imag() == 0.0);
}

TEST_CASE("zero polynomial sums to zero") {
    GaussPoly zero(1, 1);
    ThetaValue v = theta_eval({unit_lattice(1)}, zero, 1.0, 6.0);
    CHECK(v.value == std::complex<double>(0.0, 0.0));
}

TEST_CASE("shifted odd sum is nonzero") {
    // L = Z, h = 1/4, phi = x phi_0: dominated by the x = 1/4 term.
    ThetaValue v =
        theta_eval({unit_lattice(1, 1, {Rational(1, 4)})}, xpoly(1, 0), 1.0, 8.0);
    double oracle =
        direct_sum_1d(1.0, 0.25, [](double x) { return x * std::exp(-M_PI * x * x); });
    CHECK(std::abs(v.value.real() - oracle) < 1e-14);
    CHECK(std::abs(v.value.real()) > v.tail);
}

TEST_CASE("tail bound dominates radius growth") {
    for (double r : {4.0, 5.0, 7.0}) {
        GaussPoly phi = xpoly(2, 0, 2);
        LatticeCoset L = unit_lattice(2, Rational(1), {Rational(1, 3), Rational(0)});
        ThetaValue a = theta_eval({L}, phi, 1.0, r);
        ThetaValue b = theta_eval({L}, phi, 1.0, 2 * r);
        CHECK(std::abs(a.value - b.value) <= a.tail);
    }
}

TEST_CASE("radius too small to certify") {
    CHECK_THROWS_AS(theta_eval({unit_lattice(1)}, xpoly(1, 0, 6), 0.05, 2.0),
                    std::domain_error);
    CHECK_THROWS_AS(
        theta_eval({unit_lattice(1)}, GaussPoly::gaussian(1, 1), 1.0, 6.0, 1e-40),
        std::domain_error);
}

TEST_CASE("parallel kernel agrees with the serial reference") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> den(1, 4), num(-3, 3);
    for (int rep = 0; rep < 4; ++rep) {
        LatticeCoset L;
        int d = 2 + rep % 2;
        L.basis.assign(d, std::vector<Rational>(d, Rational(0)));
        for (int i = 0; i < d; ++i) {
            L.basis[i][i] = Rational(den(rng));
            for (int j = 0; j < i; ++j) L.basis[i][j] = Rational(num(rng), 2);
        }
        L.shift.assign(d, Rational(0));
        for (int i = 0; i < d; ++i) L.shift[i] = Rational(num(rng), 4);
        GaussPoly phi = xpoly(d, rep % d, 1 + rep % 2);
        ThetaValue par = theta_eval({L}, phi, 1.0, 9.0);
        ThetaValue ser = theta_eval_serial({L}, phi, 1.0, 9.0);
        CHECK(par.terms == ser.terms);
        double scale = std::max(1.0, std::abs(ser.value));
        CHECK(std::abs(par.value - ser.value) < 1e-12 * scale);
        // Determinism: a second parallel run gives identical bits.
        ThetaValue par2 = theta_eval({L}, phi, 1.0, 9.0);
        CHECK(par.value == par2.value);
    }
}

TEST_CASE("boundary lattice family") {
    // Hyperbolic plane, L = Z u_1 + Z u'_1: W = 0, a single weight-1 point.
    QuadSpace V11{1, 1};
    ParabolicData P11(V11, 1);
    LatticeCoset L = unit_lattice(2);
    auto fam = hat_LW(L, P11, 1);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0].dim() == 0);
    CHECK(fam[0].weight == Rational(1));

    // Scaling L_E by N multiplies the weight by N^{-n}.
    LatticeCoset Lscaled = L;
    Lscaled.basis[0][0] = 3;  // u-part scaled by 3
    auto fam3 = hat_LW(Lscaled, P11, 1);
    REQUIRE(fam3.size() == 1);
    CHECK(fam3[0].weight == Rational(1, 3));
    auto fam3n2 = hat_LW(Lscaled, P11, 2);
    CHECK(fam3n2[0].weight == Rational(1, 9));

    // A shift along E leaves the W-support unchanged.
    QuadSpace V21{2, 1};
    ParabolicData P21(V21, 1);
    LatticeCoset L3 = unit_lattice(3);
    auto base = hat_LW(L3, P21, 1);
    LatticeCoset L3s = L3;
    L3s.shift[0] = Rational(1, 2);  // u_1-direction shift
    auto shifted = hat_LW(L3s, P21, 1);
    REQUIRE(base.size() == shifted.size());
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].shift == shifted[i].shift);
        CHECK(base[i].weight == shifted[i].weight);
    }

    // A glued lattice: Z(u_1 + w/2) + Z u'_1 + Z w with w the middle vector:
    // the W-projection decomposes into two cosets of (1/1)-index sublattices.
    LatticeCoset Lg = unit_lattice(3);
    Lg.basis[0][1] = Rational(1, 2);
    auto glued = hat_LW(Lg, P21, 1);
    // Total W-covolume balance: sum over cosets of covol(L_W)^{-1} stays 1.
    Rational total = 0;
    for (const auto& cs : glued) {
        Rational det = cs.basis[0][0];
        total += cs.weight / (det < 0 ? -det : det);
    }
    CHECK(total == Rational(1));
}

TEST_CASE("restriction of theta to the W-sum matches a direct slice") {
    // For L = Z^3 in Witt coordinates at (2,1), ell = 1, n = 1: the W-family is
    // Z with weight 1; summing the restricted Gaussian matches theta over Z.
    QuadSpace V21{2, 1};
    ParabolicData P(V21, 1);
    auto fam = hat_LW(unit_lattice(3), P, 1);
    REQUIRE(fam.size() == 1);
    REQUIRE(fam[0].dim() == 1);
    ThetaValue v = theta_eval(fam, GaussPoly::gaussian(1, 1), 1.0, 8.0);
    CHECK(std::abs(v.value.real() - 1.0864348112133080) < 1e-12);
}

TEST_CASE("poisson summation residuals") {
    CHECK(poisson_check(Rational(1), Rational(0), GaussPoly::gaussian(1, 1)) < 1e-12);
    CHECK(poisson_check(Rational(2), Rational(0), GaussPoly::gaussian(1, 1)) < 1e-12);
    CHECK(poisson_check(Rational(1), Rational(1, 4), weil::hermite(1)) < 1e-10);
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> coef(-3, 3), den(1, 8), csc(1, 3);
    for (int rep = 0; rep < 12; ++rep) {
        weil::VarPoly p(1);
        for (int dd = 0; dd <= 3; ++dd)
            p.add_term({static_cast<uint8_t>(dd)}, Scalar::integer(coef(rng)));
        GaussPoly phi(1, 1, p);
        Rational c(csc(rng)), h(coef(rng), den(rng));
        CHECK(poisson_check(c, h, phi) < 1e-10);
    }
}

TEST_CASE("nonvanishing certificates") {
    // phi = x phi_0: h = 1/4 works.
    NonvanishingCertificate cert = nonvanishing_search(xpoly(1, 0));
    CHECK(cert.valid());
    CHECK(cert.h[0] != 0);  // phi(0) = 0 forces the shift to move
    CHECK(cert.N2 <= 8);
    CHECK(reverify_certificate(cert, xpoly(1, 0)));

    // phi = phi_0: h = 0 works immediately.
    NonvanishingCertificate cg = nonvanishing_search(GaussPoly::gaussian(1, 1));
    CHECK(cg.valid());
    CHECK(cg.N1 == 1);
    CHECK(cg.h[0] == Rational(0));

    // Odd in every variable: the shift must move away from 0.
    NonvanishingCertificate codd = nonvanishing_search(xpoly(2, 0) * xpoly(2, 1));
    CHECK(codd.valid());
    bool nonzero_shift = false;
    for (const auto& v : codd.h) nonzero_shift = nonzero_shift || v != 0;
    CHECK(nonzero_shift);
    CHECK(reverify_certificate(codd, xpoly(2, 0) * xpoly(2, 1)));
}

TEST_CASE("closing example value") {
    // sum_{x in Z + 1/4} x e^{-4 pi x^2} via y = 2x: (1/2) sum_{y in 2Z+1/2} y e^{-pi y^2}.
    ThetaValue v = theta_eval({unit_lattice(1, 2, {Rational(1, 2)})}, xpoly(1, 0), 1.0, 9.0);
    double value = 0.5 * v.value.real();
    double tail = 0.5 * v.tail;
    double oracle = direct_sum_1d(1.0, 0.25, [](double x) { return x * std::exp(-4 * M_PI * x * x); });
    CHECK(std::abs(value - oracle) < 1e-14);
    CHECK(std::abs(value) > tail);  // certified nonzero
}
