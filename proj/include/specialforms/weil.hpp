#pragma once

#include "specialforms/liegeom.hpp"
#include "specialforms/scalar.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace specialforms::weil {

using liegeom::LieElement;
using liegeom::ParabolicData;
using liegeom::QuadSpace;

/// Sparse multivariate polynomial over Scalar; exponent vectors are dense.
class VarPoly {
  public:
    explicit VarPoly(int nvars) : nvars_(nvars) {}
    static VarPoly constant(int nvars, const Scalar& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::vector<uint8_t>, Scalar>& terms() const { return terms_; }

    void add_term(const std::vector<uint8_t>& exp, const Scalar& c);
    VarPoly operator+(const VarPoly& o) const;
    VarPoly operator-(const VarPoly& o) const;
    VarPoly operator*(const VarPoly& o) const;
    VarPoly scaled(const Scalar& c) const;
    bool operator==(const VarPoly& o) const { return terms_ == o.terms_; }

    VarPoly mul_var(int v, int power = 1) const;
    VarPoly ddx(int v) const;
    /// Substitute x_v -> sum_u S[v][u] y_u simultaneously; the result has
    /// new_nvars variables (S has nvars rows of length new_nvars).
    VarPoly substituted(const std::vector<std::vector<Scalar>>& S, int new_nvars) const;
    int total_degree() const;

    std::complex<double> eval(const std::vector<std::complex<double>>& x) const;
    /// sum_terms |coeff| * r^{deg term}; an upper bound for |poly| on ||x||_inf <= r >= 1.
    double coeff_bound(double r) const;

    std::string str(const std::vector<std::string>& var_names) const;

  private:
    int nvars_;
    std::map<std::vector<uint8_t>, Scalar> terms_;
};

/// Polynomial p(x) in the mn variables x_{rj} (r = 1..m row, j = 1..n column),
/// implicitly multiplied by the standard Gaussian exp(-pi sum x_{rj}^2).
class GaussPoly {
  public:
    GaussPoly(int rows, int cols) : rows_(rows), cols_(cols), poly_(rows * cols) {}
    GaussPoly(int rows, int cols, VarPoly p) : rows_(rows), cols_(cols), poly_(std::move(p)) {}

    /// The Gaussian itself (polynomial part 1).
    static GaussPoly gaussian(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int var(int r, int j) const { return (r - 1) * cols_ + (j - 1); }
    const VarPoly& poly() const { return poly_; }
    VarPoly& poly() { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }

    GaussPoly operator+(const GaussPoly& o) const;
    GaussPoly operator-(const GaussPoly& o) const;
    GaussPoly operator*(const GaussPoly& o) const;  // polynomial parts multiply
    GaussPoly scaled(const Scalar& c) const;
    bool operator==(const GaussPoly& o) const;

    std::string str() const;

  private:
    int rows_, cols_;
    VarPoly poly_;
};

/// H_{rj} = x_{rj} - (1/2pi) d/dx_{rj}, applied through the Gaussian.
GaussPoly raise(const GaussPoly& phi, int r, int j);

/// One-variable polynomial H~_k with H_{rj}^k phi_0 = H~_k(x_{rj}) phi_0;
/// coefficients lie in Q[1/pi].
GaussPoly hermite(int k);

/// Integral matrix of raising exponents with split accessors.
struct DeltaMatrix {
    int rows, cols;
    std::vector<int> d;

    DeltaMatrix(int rows_, int cols_) : rows(rows_), cols(cols_), d(rows_ * cols_, 0) {}
    int& at(int r, int j) { return d[(r - 1) * cols + (j - 1)]; }
    int at(int r, int j) const { return d[(r - 1) * cols + (j - 1)]; }
    int total() const;
    /// Entries in rows 1..ell or m-ell+1..m (the "primed-out" rows).
    bool double_primed_zero(int ell) const;
};

/// phi_Delta = prod_{r,j} H~_{delta_rj}(x_{rj}) * phi_0.
GaussPoly phi_delta(const DeltaMatrix& delta);

/// Exact Fourier transform f(y) e^{-pi y^2} |-> f^(xi) e^{-pi xi^2} on
/// one-variable Gaussian polynomials, FT(f)(xi) = int f(y) e^{-2 pi i y xi} dy.
GaussPoly fourier_1d(const GaussPoly& f);

/// Infinitesimal geometric action (X phi)(x) = -sum (X x)_r d phi/d x_r.
GaussPoly lie_act(const QuadSpace& V, const LieElement& X, const GaussPoly& phi);

/// Polynomial in the Fock variables z_{rj}; rows <= p are the "positive" ones.
class FockPoly {
  public:
    FockPoly(int rows, int cols, int p) : rows_(rows), cols_(cols), p_(p), poly_(rows * cols) {}
    FockPoly(int rows, int cols, int p, VarPoly poly)
        : rows_(rows), cols_(cols), p_(p), poly_(std::move(poly)) {}

    static FockPoly one(int rows, int cols, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int p() const { return p_; }
    int var(int r, int j) const { return (r - 1) * cols_ + (j - 1); }
    const VarPoly& poly() const { return poly_; }
    VarPoly& poly() { return poly_; }
    bool is_zero() const { return poly_.is_zero(); }

    FockPoly operator+(const FockPoly& o) const;
    FockPoly operator*(const FockPoly& o) const;
    FockPoly scaled(const Scalar& c) const;
    bool operator==(const FockPoly& o) const;
    std::string str() const;

  private:
    int rows_, cols_, p_;
    VarPoly poly_;
};

/// Intertwiner to the Fock model: phi_0 -> 1,
/// phi_Delta -> prod (z_{alpha j}/2 pi i)^{delta} * prod (-z_{mu j}/2 pi i)^{delta}.
/// The input is expanded in the phi_Delta basis internally.
FockPoly to_fock(const QuadSpace& V, const GaussPoly& phi);

/// Face restriction in the Fock model: monomials containing z_{alpha j} with
/// alpha <= ell are dropped; surviving variables are relabeled over W.
/// Throws on a negative-index variable in the discarded range (not computed
/// in scope).
FockPoly fock_restrict(const FockPoly& phi, const ParabolicData& P);

/// Element of the mixed model: polynomial in (xi, x_W, u') times
/// exp(-pi x^T G x) times a phase e(x^T F x), with e(t) = exp(2 pi i t).
class MixedGaussPoly {
  public:
    MixedGaussPoly(int ell, int wdim, int cols);

    int ell() const { return ell_; }
    int wdim() const { return wdim_; }
    int cols() const { return cols_; }
    int nvars() const { return (2 * ell_ + wdim_) * cols_; }
    int var_xi(int i, int j) const { return (i - 1) * cols_ + (j - 1); }
    int var_w(int a, int j) const { return (ell_ + a - 1) * cols_ + (j - 1); }
    int var_up(int i, int j) const { return (ell_ + wdim_ + i - 1) * cols_ + (j - 1); }

    const VarPoly& poly() const { return poly_; }
    VarPoly& poly() { return poly_; }
    const std::vector<std::vector<Scalar>>& gauss() const { return gauss_; }
    std::vector<std::vector<Scalar>>& gauss() { return gauss_; }
    const std::vector<std::vector<Scalar>>& phase() const { return phase_; }
    std::vector<std::vector<Scalar>>& phase() { return phase_; }

    bool operator==(const MixedGaussPoly& o) const;
    /// Linear substitution x -> S x applied to polynomial, Gaussian and phase.
    MixedGaussPoly substituted(const std::vector<std::vector<Scalar>>& S) const;
    MixedGaussPoly scaled(const Scalar& c) const;

    std::complex<double> eval(const std::vector<std::complex<double>>& x) const;
    std::string str() const;

  private:
    int ell_, wdim_, cols_;
    VarPoly poly_;
    std::vector<std::vector<Scalar>> gauss_;  // symmetric, exp(-pi x^T G x)
    std::vector<std::vector<Scalar>> phase_;  // symmetric, e(x^T F x)
};

/// Partial Fourier transform to the mixed model: rewrite in Witt coordinates
/// and transform each E-coordinate, with the self-dual measure.
MixedGaussPoly to_mixed(const GaussPoly& phi, const ParabolicData& P);

/// Evaluation at xi = 0, u' = 0; requires a standard Gaussian and no residual
/// phase on the W block.
GaussPoly mixed_restrict(const MixedGaussPoly& m);

/// r_P^W: partial Fourier transform followed by evaluation on W^n.
GaussPoly weil_restrict(const GaussPoly& phi, const ParabolicData& P);

/// Group element acting on the mixed model, one of the six families.
struct MixedGroupElement {
    enum class Kind { NQ, SLE, Torus, SOW, MPrime, NPrime };
    Kind kind;
    // NQ: w_columns[i] = coordinates of w_i over the W basis (i = 1..ell).
    std::vector<std::vector<Scalar>> wvecs;
    // SLE / SOW / MPrime / NPrime: square Scalar matrix (dim ell / wdim / n / n).
    std::vector<std::vector<Scalar>> mat;
    // Torus: diag entries t_1..t_ell.
    std::vector<Rational> t;

    static MixedGroupElement nq(std::vector<std::vector<Scalar>> w);
    static MixedGroupElement sle(std::vector<std::vector<Scalar>> g);
    static MixedGroupElement torus(std::vector<Rational> t);
    static MixedGroupElement sow(std::vector<std::vector<Scalar>> h);
    static MixedGroupElement mprime(std::vector<std::vector<Scalar>> a);
    static MixedGroupElement nprime(std::vector<std::vector<Scalar>> b);
};

/// The action of omega in the mixed model.
MixedGaussPoly mixed_action(const MixedGroupElement& g, const MixedGaussPoly& phi,
                            const ParabolicData& P);

}  // namespace specialforms::weil
