#pragma once

#include "specialforms/liegeom.hpp"
#include "specialforms/weil.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace specialforms::theta {

using liegeom::ParabolicData;
using weil::GaussPoly;

/// Coset of a full-rank lattice in Q^d with the standard Euclidean metric,
/// carrying a rational weight (for weighted boundary families).
struct LatticeCoset {
    std::vector<std::vector<Rational>> basis;  // basis[i] = i-th basis vector
    std::vector<Rational> shift;
    Rational weight = 1;

    int dim() const { return static_cast<int>(shift.size()); }
};

struct ThetaValue {
    std::complex<double> value{0.0, 0.0};
    double tail = 0.0;       // certified bound for the truncation error
    long long terms = 0;     // lattice points summed
};

/// sum_{x in L+h} p(x) e^{-pi t (x,x)} over the cosets (weighted), summing all
/// points within the given Euclidean radius. The tail bound compares the
/// remainder with Gaussian integrals outside the ball; it requires
/// radius >= sqrt(deg p / (pi t)) and radius >= 2 * packing radius, and throws
/// std::domain_error otherwise (radius too small to certify).
/// If tolerance is set, throws when the certified tail exceeds it.
ThetaValue theta_eval(const std::vector<LatticeCoset>& cosets, const GaussPoly& phi, double t,
                      double radius, std::optional<double> tolerance = std::nullopt);

/// Serial reference implementation (same contract, no OpenMP).
ThetaValue theta_eval_serial(const std::vector<LatticeCoset>& cosets, const GaussPoly& phi,
                             double t, double radius,
                             std::optional<double> tolerance = std::nullopt);

/// The boundary lattice family: decomposes (L+h) meet E^perp into product
/// cosets (L_E + h_E) (+) (L_W + h_W) and returns the W-cosets weighted by
/// |det L_E|^{-n}, the determinant taken in the basis u_1..u_ell of E.
/// The lattice is given by basis vectors in the standard coordinates of V.
std::vector<LatticeCoset> hat_LW(const LatticeCoset& L, const ParabolicData& P, int n);

/// Certificate for theta nonvanishing at a positive definite space:
/// a shift h in (1/N1) Z^d with phi(h) != 0 and a scaling N2 such that the
/// certified sum over the other points of (N1 N2 Z)^d + h stays below |phi(h)|.
struct NonvanishingCertificate {
    std::vector<Rational> h;
    int N1 = 0;
    int N2 = 0;
    double phi_at_h = 0.0;        // |phi(h)|
    double rest_bound = 0.0;      // certified bound for sum_{y != h} |phi(y)|
    double lattice_abs_sum = 0.0; // certified bound for sum_{x in L^d} |phi(x)|
    bool valid() const { return rest_bound < phi_at_h; }
    std::string str() const;
};

/// Searches h and N2 as in the positive-definite nonvanishing argument.
/// Throws std::runtime_error when the search budget is exceeded.
NonvanishingCertificate nonvanishing_search(const GaussPoly& phi, int max_n1 = 8,
                                            int max_n2 = 64);

/// Re-checks the certificate inequality in extended precision.
bool reverify_certificate(const NonvanishingCertificate& cert, const GaussPoly& phi);

/// |sum_{x in L+h} phi(x) - covol^{-1} sum_{xi in L#} e(xi h) phi^(xi)| for a
/// one-dimensional lattice L = c Z; the transform comes from the exact
/// one-variable Fourier rules.
double poisson_check(const Rational& c, const Rational& h, const GaussPoly& phi);

}  // namespace specialforms::theta
