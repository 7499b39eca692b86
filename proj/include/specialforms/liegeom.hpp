#pragma once

#include "specialforms/multitensor.hpp"
#include "specialforms/scalar.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace specialforms::liegeom {

using multitensor::SparseTensor;
using multitensor::TensorSpace;

/// Rational quadratic space of signature (p,q) with the standard orthogonal
/// basis e_1..e_m, (e_a,e_a) = +1 for a <= p and -1 otherwise.
struct QuadSpace {
    int p = 0;
    int q = 0;

    int m() const { return p + q; }
    int eps(int a) const { return a <= p ? 1 : -1; }
    TensorSpace tensor_space(char tag = 'V') const { return TensorSpace::quad(tag, p, q); }
    bool operator==(const QuadSpace& o) const { return p == o.p && q == o.q; }
};

/// Vector in V_R as a degree-1 sparse tensor over the standard basis.
using Vec = SparseTensor;

Vec basis_vec(const QuadSpace& V, int a);
/// (v, w) with respect to the bilinear form of signature (p,q).
Scalar form_pair(const QuadSpace& V, const Vec& v, const Vec& w);

/// Element of so(V) identified with Lambda^2 V_R; w ^ w' acts by
/// (w ^ w')(v) = (w,v) w' - (w',v) w.
class LieElement {
  public:
    explicit LieElement(QuadSpace V) : V_(V) {}
    static LieElement wedge(const QuadSpace& V, const Vec& w, const Vec& wp);

    const QuadSpace& space() const { return V_; }
    bool is_zero() const { return terms_.empty(); }
    /// Coefficient map {a < b} -> coefficient of e_a ^ e_b.
    const std::map<std::pair<int, int>, Scalar>& terms() const { return terms_; }
    void add_term(int a, int b, const Scalar& c);

    LieElement operator+(const LieElement& o) const;
    LieElement scaled(const Scalar& c) const;
    bool operator==(const LieElement& o) const { return terms_ == o.terms_; }

    /// Action on a vector.
    Vec act(const Vec& v) const;
    /// Derivation action on a tensor over V.
    SparseTensor act_tensor(const SparseTensor& t) const;

    std::string str() const;

  private:
    QuadSpace V_;
    std::map<std::pair<int, int>, Scalar> terms_;
};

/// Commutator, re-expressed in Lambda^2 V.
LieElement bracket(const LieElement& X, const LieElement& Y);

/// Pairing on Lambda^2 V induced by the form: <a^b, c^d> = (a,c)(b,d) - (a,d)(b,c).
Scalar lambda2_pairing(const LieElement& X, const LieElement& Y);

/// The pq elements X_{alpha mu} = e_alpha ^ e_mu in lexicographic order.
std::vector<LieElement> p_basis(const QuadSpace& V);
/// Basis of k = so(p) + so(q): e_a ^ e_b within the positive and negative blocks.
std::vector<LieElement> k_basis(const QuadSpace& V);

/// Standard maximal-parabolic data: the totally isotropic subspace E = E_ell
/// spanned by u_1..u_ell with u_i = (e_i + e_{m+1-i})/sqrt2,
/// u'_i = theta_0(u_i) = (e_i - e_{m+1-i})/sqrt2 (so (u_i, u'_j) = delta_ij),
/// and W = (E + E')^perp of signature (p-ell, q-ell) spanned by
/// e_{ell+1}..e_{m-ell}.
struct ParabolicData {
    QuadSpace V;
    int ell;

    ParabolicData(QuadSpace V_, int ell_);

    QuadSpace W() const { return {V.p - ell, V.q - ell}; }
    int wdim() const { return V.m() - 2 * ell; }
    Vec u(int i) const;       // 1 <= i <= ell
    Vec uprime(int i) const;  // 1 <= i <= ell
    /// W basis index (1..m-2l) -> V index (ell+1..m-ell).
    int w_to_v(int a) const { return a + ell; }
    int v_to_w(int a) const { return a - ell; }
};

/// Basis of the nilpotent radical n of the maximal parabolic:
/// X_{alpha i} = e_alpha ^ u_i, X_{mu i} = e_mu ^ u_i (n_W part, lex order),
/// then U_{ij} = u_i ^ u_j, i < j (the center z_Q = Lambda^2 E).
std::vector<LieElement> n_basis(const ParabolicData& P);
/// n_W part only.
std::vector<LieElement> nW_basis(const ParabolicData& P);

/// Cotangent labels: omega_{alpha mu} in p*; nu_{r i} in n_W* (r is the V-row
/// in [ell+1, m-ell], i in [1, ell]); zq_{ij} dual to u_i ^ u_j; the a* line;
/// and an opaque gl tag for the n_{P'}* + p_E* directions.
struct CotangentLabel {
    enum class Kind : uint8_t { Omega = 0, Nu = 1, ZQ = 2, AStar = 3, GL = 4 };
    Kind kind;
    int a = 0;
    int b = 0;

    static CotangentLabel omega(int alpha, int mu) { return {Kind::Omega, alpha, mu}; }
    static CotangentLabel nu(int row, int i) { return {Kind::Nu, row, i}; }
    static CotangentLabel zq(int i, int j) { return {Kind::ZQ, i, j}; }
    static CotangentLabel astar() { return {Kind::AStar, 0, 0}; }
    static CotangentLabel gl() { return {Kind::GL, 0, 0}; }

    auto operator<=>(const CotangentLabel&) const = default;
    std::string str() const;
};

/// Dual basis element of n* (or of p* for omega labels) as a Lambda^2 element:
/// nu_{alpha i} = e_alpha ^ u'_i, nu_{mu i} = -e_mu ^ u'_i, zq_{ij} = u'_i ^ u'_j.
LieElement dual_element(const CotangentLabel& label, const ParabolicData& P);

/// Dual labels matching n_basis(P) in order.
std::vector<CotangentLabel> n_dual_labels(const ParabolicData& P);

/// The pullback sigma* on a p*-basis vector, as a formal combination of
/// cotangent labels. Labels in the a*/gl directions are returned tagged so the
/// face restriction can drop them. Throws on omega_{i, m+1-ell} with i <= ell,
/// where the stated index ranges collide.
std::vector<std::pair<CotangentLabel, Scalar>> sigma_pullback(const CotangentLabel& omega,
                                                              const ParabolicData& P);

}  // namespace specialforms::liegeom
