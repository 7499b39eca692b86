#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specialforms/weil.hpp"

#include <complex>
#include <functional>
#include <random>

using namespace specialforms;
using namespace specialforms::weil;
using ScalarMat = std::vector<std::vector<Scalar>>;
using liegeom::ParabolicData;
using liegeom::QuadSpace;

namespace {

VarPoly monomial(int nvars, int v, int deg, const Scalar& c = Scalar::one()) {
    std::vector<uint8_t> e(nvars, 0);
    e[v] = static_cast<uint8_t>(deg);
    VarPoly p(nvars);
    p.add_term(e, c);
    return p;
}

/// H~_k(s * y) as a one-variable Gauss polynomial.
GaussPoly hermite_scaled_arg(int k, const Scalar& s) {
    return GaussPoly(1, 1, hermite(k).poly().substituted({{s}}, 1));
}

std::complex<double> ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

}  // namespace

TEST_CASE("hermite polynomials") {
    CHECK(hermite(0).poly() == VarPoly::constant(1, Scalar::one()));
    CHECK(hermite(1).poly() == monomial(1, 0, 1, Scalar::integer(2)));
    VarPoly h2 = monomial(1, 0, 2, Scalar::integer(4));
    h2.add_term({0}, -Scalar::pi_pow(-1));
    CHECK(hermite(2).poly() == h2);
    // Recursion H~_{k+1} = 2 y H~_k - (1/2pi) H~_k'.
    for (int k = 0; k <= 7; ++k) {
        VarPoly next = hermite(k).poly().mul_var(0).scaled(Scalar::integer(2)) -
                       hermite(k).poly().ddx(0).scaled(Scalar::rational(Rational(1, 2)) *
                                                       Scalar::pi_pow(-1));
        CHECK(hermite(k + 1).poly() == next);
    }
    // Coefficients lie in Q[1/pi].
    GaussPoly h6 = hermite(6);
    for (const auto& [e, c] : h6.poly().terms())
        for (const auto& [piexp, elem] : c.terms()) {
            CHECK(piexp <= 0);
            CHECK((elem.b == 0));
            CHECK((elem.c == 0));
            CHECK((elem.d == 0));
        }
}

TEST_CASE("raising operators") {
    GaussPoly one = GaussPoly::gaussian(3, 2);
    GaussPoly r11 = raise(one, 1, 1);
    CHECK(r11.poly() == monomial(6, one.var(1, 1), 1, Scalar::integer(2)));
    // Twice in the same slot matches H~_2.
    GaussPoly r2 = raise(r11, 1, 1);
    VarPoly h2 = monomial(6, one.var(1, 1), 2, Scalar::integer(4));
    h2.add_term(std::vector<uint8_t>(6, 0), -Scalar::pi_pow(-1));
    CHECK(r2.poly() == h2);
    // Commutation across slots.
    GaussPoly a = raise(raise(one, 1, 2), 3, 1);
    GaussPoly b = raise(raise(one, 3, 1), 1, 2);
    CHECK(a == b);
}

TEST_CASE("phi_Delta") {
    DeltaMatrix zero(2, 1);
    CHECK(phi_delta(zero) == GaussPoly::gaussian(2, 1));
    DeltaMatrix d1(2, 1);
    d1.at(1, 1) = 1;
    CHECK(phi_delta(d1).poly() == monomial(2, 0, 1, Scalar::integer(2)));
    DeltaMatrix d2(2, 1);
    d2.at(1, 1) = 1;
    d2.at(2, 1) = 1;
    GaussPoly p = phi_delta(d2);
    VarPoly expect(2);
    expect.add_term({1, 1}, Scalar::integer(4));
    CHECK(p.poly() == expect);
}

TEST_CASE("Fourier transform of the Gaussian and key transforms") {
    CHECK(fourier_1d(GaussPoly::gaussian(1, 1)) == GaussPoly::gaussian(1, 1));

    // H~_k(y/sqrt2) e^{-pi y^2} |-> (-sqrt2 i xi)^k e^{-pi xi^2};
    // the parity flip H~_k(-y/sqrt2) transforms to (+sqrt2 i xi)^k.
    Scalar s2i = Scalar::sqrt2() * Scalar::i();
    for (int k = 0; k <= 8; ++k) {
        GaussPoly gk = hermite_scaled_arg(k, Scalar::sqrt2_pow(-1));
        Scalar coef = Scalar::one();
        for (int t = 0; t < k; ++t) coef *= -s2i;
        CHECK(fourier_1d(gk).poly() == monomial(1, 0, k, coef));

        GaussPoly gk_neg = hermite_scaled_arg(k, -Scalar::sqrt2_pow(-1));
        Scalar coef_pos = Scalar::one();
        for (int t = 0; t < k; ++t) coef_pos *= s2i;
        CHECK(fourier_1d(gk_neg).poly() == monomial(1, 0, k, coef_pos));
    }
}

TEST_CASE("Hermite functions are Fourier eigenfunctions") {
    for (int k = 0; k <= 8; ++k) {
        Scalar eig = Scalar::one();
        for (int t = 0; t < k; ++t) eig *= -Scalar::i();
        CHECK(fourier_1d(hermite(k)) == hermite(k).scaled(eig));
    }
}

TEST_CASE("Fourier involution up to reflection") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int rep = 0; rep < 10; ++rep) {
        VarPoly p(1);
        for (int d = 0; d <= 6; ++d) p.add_term({static_cast<uint8_t>(d)}, Scalar::integer(coef(rng)));
        GaussPoly f(1, 1, p);
        GaussPoly ft2 = fourier_1d(fourier_1d(f));
        GaussPoly reflected(1, 1, p.substituted({{Scalar::integer(-1)}}, 1));
        CHECK(ft2 == reflected);
    }
}

TEST_CASE("local Weil restriction on phi_Delta") {
    QuadSpace V{2, 2};
    ParabolicData P(V, 1);

    // Gaussian restricts to the W Gaussian.
    CHECK(weil_restrict(GaussPoly::gaussian(4, 1), P) == GaussPoly::gaussian(2, 1));

    // A nonzero entry in the primed-out rows kills the restriction.
    DeltaMatrix d(4, 1);
    d.at(1, 1) = 1;
    CHECK(weil_restrict(phi_delta(d), P).is_zero());
    DeltaMatrix d4(4, 1);
    d4.at(4, 1) = 2;
    CHECK(weil_restrict(phi_delta(d4), P).is_zero());

    // Entries in the middle rows restrict to phi^W_{Delta'}.
    DeltaMatrix dm(4, 1);
    dm.at(2, 1) = 2;
    dm.at(3, 1) = 1;
    DeltaMatrix dw(2, 1);
    dw.at(1, 1) = 2;
    dw.at(2, 1) = 1;
    CHECK(weil_restrict(phi_delta(dm), P) == phi_delta(dw));
}

TEST_CASE("Fock intertwiner") {
    QuadSpace V{2, 1};
    CHECK(to_fock(V, GaussPoly::gaussian(3, 1)) == FockPoly::one(3, 1, 2));

    DeltaMatrix d(3, 1);
    d.at(1, 1) = 1;
    FockPoly f = to_fock(V, phi_delta(d));
    FockPoly expect(3, 1, 2);
    expect.poly().add_term({1, 0, 0}, Scalar::two_pi_i_pow(-1));
    CHECK(f == expect);

    DeltaMatrix dneg(3, 1);
    dneg.at(3, 1) = 1;
    FockPoly fneg = to_fock(V, phi_delta(dneg));
    FockPoly expect_neg(3, 1, 2);
    expect_neg.poly().add_term({0, 0, 1}, -Scalar::two_pi_i_pow(-1));
    CHECK(fneg == expect_neg);
}

TEST_CASE("raising corresponds to multiplication by +-z/(2 pi i)") {
    QuadSpace V{2, 1};
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> d(0, 2);
    for (int rep = 0; rep < 6; ++rep) {
        DeltaMatrix delta(3, 2);
        for (int r = 1; r <= 3; ++r)
            for (int j = 1; j <= 2; ++j) delta.at(r, j) = d(rng);
        GaussPoly phi = phi_delta(delta);
        for (int r = 1; r <= 3; ++r)
            for (int j = 1; j <= 2; ++j) {
                FockPoly lhs = to_fock(V, raise(phi, r, j));
                Scalar sgn = Scalar::integer(r <= V.p ? 1 : -1);
                FockPoly z(3, 2, 2);
                std::vector<uint8_t> e(6, 0);
                e[z.var(r, j)] = 1;
                z.poly().add_term(e, sgn * Scalar::two_pi_i_pow(-1));
                CHECK(lhs == z * to_fock(V, phi));
            }
    }
}

TEST_CASE("Fock restriction") {
    QuadSpace V31{3, 1};
    ParabolicData P(V31, 1);
    // z_{11} -> 0.
    FockPoly z11(4, 1, 3);
    z11.poly().add_term({1, 0, 0, 0}, Scalar::one());
    CHECK(fock_restrict(z11, P).is_zero());
    // z_{21} z_{31} survives with relabeled rows.
    FockPoly z23(4, 1, 3);
    z23.poly().add_term({0, 1, 1, 0}, Scalar::one());
    FockPoly expect(2, 1, 2);
    expect.poly().add_term({1, 1}, Scalar::one());
    CHECK(fock_restrict(z23, P) == expect);
    // Constants survive.
    CHECK(fock_restrict(FockPoly::one(4, 1, 3), P) == FockPoly::one(2, 1, 2));
    // Negative-index variable in the discarded range is out of computed scope.
    FockPoly z41(4, 1, 3);
    z41.poly().add_term({0, 0, 0, 1}, Scalar::one());
    CHECK_THROWS_AS(fock_restrict(z41, P), std::domain_error);
}

TEST_CASE("restriction commutes with the Fock intertwiner") {
    for (auto [p, q, ell] : std::vector<std::tuple<int, int, int>>{
             {2, 2, 1}, {3, 1, 1}, {2, 2, 2}, {3, 2, 2}}) {
        QuadSpace V{p, q};
        ParabolicData P(V, ell);
        std::mt19937_64 rng(100 + p * 10 + q + ell);
        std::uniform_int_distribution<int> d(0, 2);
        for (int rep = 0; rep < 4; ++rep) {
            DeltaMatrix delta(V.m(), 2);
            for (int r = 1; r <= V.p; ++r)
                for (int j = 1; j <= 2; ++j) delta.at(r, j) = d(rng);  // Delta_- = 0
            GaussPoly phi = phi_delta(delta);
            FockPoly lhs = to_fock(P.W(), weil_restrict(phi, P));
            FockPoly rhs = fock_restrict(to_fock(V, phi), P);
            CHECK(lhs == rhs);
        }
    }
}

namespace {

// Numerical check of the mixed-model action formulas against direct partial
// Fourier integrals, for n = 1 and ell = 1.
struct NumericMixedCheck {
    QuadSpace V;
    ParabolicData P;
    GaussPoly phi;

    NumericMixedCheck(QuadSpace V_, GaussPoly phi_) : V(V_), P(V_, 1), phi(std::move(phi_)) {}

    // Standard coordinates of the point with Witt coordinates (yu, xw, yup).
    std::vector<std::complex<double>> standard_coords(double yu, const std::vector<double>& xw,
                                                      double yup) const {
        int m = V.m();
        std::vector<std::complex<double>> x(m, 0.0);
        auto add_vec = [&](const liegeom::Vec& v, double c) {
            for (const auto& [idx, s] : v.terms())
                x[multitensor::idx_get(idx, 0) - 1] += c * s.eval();
        };
        add_vec(P.u(1), yu);
        add_vec(P.uprime(1), yup);
        for (int a = 1; a <= P.wdim(); ++a) x[P.w_to_v(a) - 1] += xw[a - 1];
        return x;
    }

    // phi evaluated with an optional V-isometry g^{-1} applied to the argument
    // and an optional phase.
    std::complex<double> phi_value(const std::vector<std::complex<double>>& x,
                                   const std::vector<std::vector<double>>& ginv,
                                   double phase_quad) const {
        std::vector<std::complex<double>> y(x.size(), 0.0);
        if (ginv.empty())
            y = x;
        else
            for (size_t r = 0; r < x.size(); ++r)
                for (size_t s = 0; s < x.size(); ++s) y[r] += ginv[r][s] * x[s];
        std::complex<double> norm2 = 0.0;
        for (auto& v : y) norm2 += v * v;
        const double kPi = 3.14159265358979323846;
        return phi.poly().eval(y) * std::exp(-kPi * norm2) *
               std::exp(std::complex<double>(0, 2 * kPi * phase_quad));
    }

    // Partial Fourier transform of (g phi) at (xi, xw, yup) by Simpson quadrature.
    std::complex<double> direct_ft(double xi, const std::vector<double>& xw, double yup,
                                   const std::vector<std::vector<double>>& ginv,
                                   std::function<double(double, const std::vector<double>&, double)>
                                       phase) const {
        const double L = 8.0;
        const int N = 16000;  // even
        const double h = 2 * L / N;
        std::complex<double> sum = 0.0;
        const double kPi = 3.14159265358979323846;
        for (int k = 0; k <= N; ++k) {
            double yu = -L + k * h;
            double w = (k == 0 || k == N) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            auto x = standard_coords(yu, xw, yup);
            double ph = phase ? phase(yu, xw, yup) : 0.0;
            sum += w * phi_value(x, ginv, ph) * std::exp(std::complex<double>(0, -2 * kPi * yu * xi));
        }
        return sum * (h / 3.0);
    }
};

}  // namespace

TEST_CASE("mixed model matches direct partial Fourier integrals") {
    QuadSpace V{2, 2};
    DeltaMatrix delta(4, 1);
    delta.at(2, 1) = 1;
    delta.at(1, 1) = 1;
    NumericMixedCheck chk(V, phi_delta(delta));
    MixedGaussPoly mx = to_mixed(chk.phi, chk.P);

    auto eval_mixed = [&](const MixedGaussPoly& m, double xi, std::vector<double> xw, double up) {
        std::vector<std::complex<double>> x;
        x.push_back(xi);
        for (double v : xw) x.push_back(v);
        x.push_back(up);
        return m.eval(x);
    };

    // The plain transform.
    std::complex<double> direct = chk.direct_ft(0.3, {-0.4, 0.7}, 0.2, {}, nullptr);
    std::complex<double> model = eval_mixed(mx, 0.3, {-0.4, 0.7}, 0.2);
    CHECK(std::abs(direct - model) < 1e-8);

    // Torus action a(t): |t| phi^(t xi, x_W, t u').
    {
        Rational t(3, 2);
        MixedGaussPoly acted = mixed_action(MixedGroupElement::torus({t}), mx, chk.P);
        // g^{-1} on V: u -> (2/3) u, u' -> (3/2) u', identity on W.
        double td = 1.5;
        std::vector<std::vector<double>> ginv(4, std::vector<double>(4, 0.0));
        // Build from u, u' numerically: g^{-1} = sum of projections.
        // g^{-1} v = (1/t)(v,u')u + t (v,u)u' + v_W.
        // Use exact vectors.
        auto uvec = chk.P.u(1);
        auto upvec = chk.P.uprime(1);
        std::vector<double> u(4, 0.0), up(4, 0.0);
        for (const auto& [idx, s] : uvec.terms()) u[multitensor::idx_get(idx, 0) - 1] = s.eval().real();
        for (const auto& [idx, s] : upvec.terms()) up[multitensor::idx_get(idx, 0) - 1] = s.eval().real();
        // metric signs for (2,2): (+,+,-,-)
        std::vector<double> eps{1, 1, -1, -1};
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) {
                double proj_w = (r == s) ? 1.0 : 0.0;
                proj_w -= u[r] * up[s] * eps[s] + up[r] * u[s] * eps[s];
                ginv[r][s] = proj_w + (1.0 / td) * u[r] * (eps[s] * up[s]) + td * up[r] * (eps[s] * u[s]);
            }
        std::complex<double> lhs = chk.direct_ft(0.3, {-0.4, 0.7}, 0.2, ginv, nullptr);
        std::complex<double> rhs = eval_mixed(acted, 0.3, {-0.4, 0.7}, 0.2);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }

    // n'(b): phase e^{pi i b (x,x)} before the transform.
    {
        double b = 0.5;
        MixedGaussPoly acted = mixed_action(
            MixedGroupElement::nprime({{Scalar::rational(Rational(1, 2))}}), mx, chk.P);
        auto phase = [&](double yu, const std::vector<double>& xw, double yup) {
            // (x,x)/2 with x = yu u + xw + yup u': (x,x) = 2 yu yup + (xw,xw)_W.
            double xx = 2 * yu * yup + xw[0] * xw[0] - xw[1] * xw[1];
            return b * xx / 2.0;
        };
        std::complex<double> lhs = chk.direct_ft(0.3, {-0.4, 0.7}, 0.2, {}, phase);
        std::complex<double> rhs = eval_mixed(acted, 0.3, {-0.4, 0.7}, 0.2);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }

    // h in SO(W): rotation in the W block (here signature (1,1), use a boost).
    {
        // Hyperbolic rotation preserving x_1^2 - x_2^2 on W coordinates (c, s; s, c).
        double c = 1.25, s = 0.75;  // c^2 - s^2 = 1
        ScalarMat h{{Scalar::rational(Rational(5, 4)), Scalar::rational(Rational(3, 4))},
                    {Scalar::rational(Rational(3, 4)), Scalar::rational(Rational(5, 4))}};
        MixedGaussPoly acted = mixed_action(MixedGroupElement::sow(h), mx, chk.P);
        std::vector<std::vector<double>> ginv(4, std::vector<double>(4, 0.0));
        ginv[0][0] = ginv[3][3] = 1.0;
        // W block is rows/cols 2,3 (0-based 1,2); inverse boost has -s.
        ginv[1][1] = c;
        ginv[1][2] = -s;
        ginv[2][1] = -s;
        ginv[2][2] = c;
        std::complex<double> lhs = chk.direct_ft(0.3, {-0.4, 0.7}, 0.2, ginv, nullptr);
        std::complex<double> rhs = eval_mixed(acted, 0.3, {-0.4, 0.7}, 0.2);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }

    // n(w) in N_Q.
    {
        std::vector<Scalar> w{Scalar::one(), Scalar::rational(Rational(1, 2))};
        MixedGaussPoly acted = mixed_action(MixedGroupElement::nq({w}), mx, chk.P);
        // Numerical matrix of n(w)^{-1} = n applied with -w.
        liegeom::Vec wv(V.tensor_space(), 1);
        wv.add_term(multitensor::idx_of({2}), -Scalar::one());
        wv.add_term(multitensor::idx_of({3}), -Scalar::rational(Rational(1, 2)));
        liegeom::LieElement X = liegeom::LieElement::wedge(V, wv, chk.P.u(1));
        std::vector<std::vector<double>> A(4, std::vector<double>(4, 0.0));
        for (int sc = 1; sc <= 4; ++sc) {
            auto img = X.act(liegeom::basis_vec(V, sc));
            for (const auto& [idx, cf] : img.terms())
                A[multitensor::idx_get(idx, 0) - 1][sc - 1] = cf.eval().real();
        }
        std::vector<std::vector<double>> ginv(4, std::vector<double>(4, 0.0));
        for (int r = 0; r < 4; ++r) ginv[r][r] = 1.0;
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) {
                double a2 = 0;
                for (int t2 = 0; t2 < 4; ++t2) a2 += A[r][t2] * A[t2][s];
                ginv[r][s] += A[r][s] + a2 / 2.0;
            }
        std::complex<double> lhs = chk.direct_ft(0.3, {-0.4, 0.7}, 0.2, ginv, nullptr);
        std::complex<double> rhs = eval_mixed(acted, 0.3, {-0.4, 0.7}, 0.2);
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("mixed action group laws") {
    QuadSpace V{2, 2};
    ParabolicData P(V, 1);
    DeltaMatrix delta(4, 1);
    delta.at(2, 1) = 1;
    MixedGaussPoly mx = to_mixed(phi_delta(delta), P);

    MixedGaussPoly t6 = mixed_action(MixedGroupElement::torus({Rational(6)}), mx, P);
    MixedGaussPoly t23 = mixed_action(
        MixedGroupElement::torus({Rational(2)}),
        mixed_action(MixedGroupElement::torus({Rational(3)}), mx, P), P);
    CHECK(t6 == t23);

    ScalarMat b1{{Scalar::rational(Rational(1, 3))}};
    ScalarMat b2{{Scalar::rational(Rational(1, 4))}};
    ScalarMat b12{{Scalar::rational(Rational(7, 12))}};
    MixedGaussPoly nb = mixed_action(MixedGroupElement::nprime(b1),
                                     mixed_action(MixedGroupElement::nprime(b2), mx, P), P);
    CHECK(nb == mixed_action(MixedGroupElement::nprime(b12), mx, P));
}
