#pragma once

#include "specialforms/liegeom.hpp"
#include "specialforms/multitensor.hpp"
#include "specialforms/tableaux.hpp"
#include "specialforms/weil.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace specialforms::cochain {

using liegeom::CotangentLabel;
using liegeom::LieElement;
using liegeom::ParabolicData;
using liegeom::QuadSpace;
using multitensor::PackedIdx;
using multitensor::SparseTensor;
using tableaux::Filling;

enum class WeilModel { Schrodinger, Fock };

/// Which complex a cochain lives in. CV is the relative Lie algebra complex
/// for the given quadratic space (this also covers the boundary space W by
/// instantiating it with W); AP is the face complex for a maximal parabolic
/// (Weil slot over W, coefficients still over the ambient V); Nil is the
/// nilpotent complex Lambda^* n_P^* (x) T^*(V_C), with no Weil slot.
struct ComplexInfo {
    enum class Kind { CV, AP, Nil };
    Kind kind;
    QuadSpace V;  // the ambient quadratic space
    int n;        // symplectic columns (0 for Nil)
    int ell;      // parabolic parameter (AP/Nil)
    WeilModel model = WeilModel::Fock;

    static ComplexInfo cv(QuadSpace V, int n, WeilModel model) {
        return {Kind::CV, V, n, 0, model};
    }
    static ComplexInfo ap(QuadSpace V, int n, int ell, WeilModel model) {
        return {Kind::AP, V, n, ell, model};
    }
    static ComplexInfo nil(QuadSpace V, int ell) {
        return {Kind::Nil, V, 0, ell, WeilModel::Fock};
    }

    /// Space carrying the Weil variables (V for CV, W for AP).
    QuadSpace weil_space() const;
    int weil_vars() const { return kind == Kind::Nil ? 0 : weil_space().m() * n; }
    int weil_var(int r, int j) const { return (r - 1) * n + (j - 1); }
    bool operator==(const ComplexInfo& o) const;
};

struct CochainKey {
    std::vector<uint8_t> weil;             // Weil monomial exponents
    std::vector<CotangentLabel> wedge;     // strictly increasing labels
    PackedIdx coeff = 0;                   // coefficient tensor multi-index

    auto operator<=>(const CochainKey&) const = default;
};

/// Sparse sum of (Weil monomial, wedge monomial, coefficient multi-index)
/// triples; the U-power j is a pure grading.
class Cochain {
  public:
    Cochain(ComplexInfo info, int j, int r, int k)
        : info_(info), j_(j), r_(r), k_(k) {}

    const ComplexInfo& info() const { return info_; }
    int j() const { return j_; }
    int r() const { return r_; }
    int k() const { return k_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<CochainKey, Scalar>& terms() const { return terms_; }

    /// Adds a term; the wedge labels may arrive unsorted and are normalized
    /// with the sorting sign (repeated labels annihilate the term).
    void add_term(std::vector<uint8_t> weil, std::vector<CotangentLabel> wedge, PackedIdx coeff,
                  const Scalar& c);
    void add_key(const CochainKey& key, const Scalar& c);

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain scaled(const Scalar& c) const;
    bool operator==(const Cochain& o) const;

    /// First differing key between two cochains, rendered (for reports).
    static std::string first_difference(const Cochain& a, const Cochain& b);

    std::string str() const;

  private:
    ComplexInfo info_;
    int j_, r_, k_;
    std::map<CochainKey, Scalar> terms_;
};

/// The Hom picture: values of a K'-finite form on the basis tensors eps_I of
/// T^k(C^n).
class CochainHom {
  public:
    CochainHom(ComplexInfo info, int j, int r, int k)
        : info_(info), j_(j), r_(r), k_(k) {}

    const ComplexInfo& info() const { return info_; }
    int j() const { return j_; }
    int r() const { return r_; }
    int k() const { return k_; }
    bool is_zero() const;

    /// All index vectors I in [1..n]^k in lexicographic order.
    std::vector<PackedIdx> index_set() const;
    const Cochain& value(PackedIdx I) const;
    Cochain& value_mut(PackedIdx I);
    void set_value(PackedIdx I, Cochain c);

    CochainHom operator+(const CochainHom& o) const;
    CochainHom operator-(const CochainHom& o) const;
    CochainHom scaled(const Scalar& c) const;
    bool operator==(const CochainHom& o) const;
    static std::string first_difference(const CochainHom& a, const CochainHom& b);

  private:
    ComplexInfo info_;
    int j_, r_, k_;
    mutable std::map<PackedIdx, Cochain> values_;
};

/// Graded product: Weil slots multiply (Fock model), wedge slots wedge,
/// coefficient slots concatenate; on Homs the argument splits at position k1.
Cochain dga_mul(const Cochain& a, const Cochain& b);
CochainHom dga_mul(const CochainHom& a, const CochainHom& b);

/// The special form phi_{nq,l'} from the explicit summation formulas.
CochainHom phi_nq(const QuadSpace& V, int n, int ellp, WeilModel model);

/// phi_{0,k} (Fock model only).
CochainHom phi_0k(const QuadSpace& V, int n, int k);

/// Operator route: D applied to the Gaussian (Schrodinger model).
Cochain op_D_phi0(const QuadSpace& V, int n);
/// Operator route: T_{l'}(eps_I) applied to phi_{nq,0} (Schrodinger model).
CochainHom op_T_phi(const QuadSpace& V, int n, int ellp);

/// pi_{t(lambda)}: post-compose the coefficient slot with s(A), or
/// (equivalently on equivariant Homs) precompose the argument with s(A).
CochainHom project_schur(const CochainHom& h, const Filling& A, bool precompose = false);
/// pi_{[t(lambda)]}: harmonic projection of the coefficient slot after s(A).
CochainHom project_harmonic(const CochainHom& h, const Filling& A);

/// Relative Lie algebra differential on C_V in the Schrodinger model.
Cochain rel_differential(const Cochain& c);
CochainHom rel_differential(const CochainHom& h);

/// Combined action of X in k on (Weil slot, wedge slot, coefficient slot);
/// vanishes on K-invariant cochains.
Cochain k_action(const LieElement& X, const Cochain& c);

/// tau_{n ell, l'}: wedge of (w_s (x) u'_{*}) factors with E'-slots u'_1..u'_ell
/// repeating per block, coefficients w-bar embedded into T^{l'}(V_C).
/// w and wbar are tensors over the W space (labels 1..m-2 ell).
Cochain tau(const ParabolicData& P, int n, const SparseTensor& w, const SparseTensor& wbar);

/// Lie algebra cohomology differential of n_P on Lambda^* n_P^* (x) T^k(V_C).
Cochain nilpotent_differential(const Cochain& c);

/// iota_P: C_W^{j,r,k} -> A_P^{j+ell, r+n ell, k-n ell} with the sign
/// (-1)^{n ell ((q-ell)(n-1)/2 + 1)}; zero if k < n ell.
CochainHom iota_P(const CochainHom& h, const ParabolicData& P);

/// phi_{P,n ell}: the n ell-form on the face with nu-blocks per column.
Cochain phi_P_nl(const ParabolicData& P, int n);

/// Local restriction r_P = 1 (x) 1 (x) r_P^W (x) iota* sigma* (x) 1 (Fock model).
CochainHom restrict_rP(const CochainHom& h, const ParabolicData& P);

/// Transport of a C_W cochain into A_P (W-indices shift into V-indices).
Cochain embed_cw_in_ap(const Cochain& c, const ParabolicData& P);
CochainHom embed_cw_in_ap(const CochainHom& h, const ParabolicData& P);

/// Report record for the restriction-theorem verification.
struct RestrictionRecord {
    int p, q, n, ell;
    std::vector<int> lambda;
    bool skipped = false;       // out-of-range parameters
    std::string skip_reason;
    bool level_ellp_equal = false;   // r_P(phi_{nq,l'}) = iota_P(phi^W)
    bool level_A_equal = false;      // the projected identity
    bool level_harmonic_ok = false;  // difference is nilpotent-exact
    bool both_sides_zero = false;
    std::string witness;
};

/// Verifies the local restriction identities at the given parameters:
/// exact equality at the l'-level and A-level, and nilpotent-exactness of the
/// harmonic-level difference (cohomology-level statement).
RestrictionRecord verify_restriction_theorem(int p, int q, int n, int ell,
                                             const std::vector<int>& lambda);

}  // namespace specialforms::cochain
