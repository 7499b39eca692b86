#pragma once

#include "specialforms/scalar.hpp"
#include "specialforms/tableaux.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace specialforms::multitensor {

/// A labeled basis: 'V'/'W' quadratic spaces carry a signature (p,q) with
/// basis pairings (e_a,e_a) = +1 for a <= p and -1 otherwise; 'C' is C^n with
/// the Kronecker pairing against its dual; 'E'/'F' are the isotropic spaces E
/// and E' (no pairing of their own).
struct TensorSpace {
    char tag;  // 'V', 'W', 'C', 'E', 'F'
    int dim;
    int p;  // number of positive basis directions (quad spaces); = dim for 'C'

    static TensorSpace quad(char tag, int p, int q) { return {tag, p + q, p}; }
    static TensorSpace cn(int n) { return {'C', n, n}; }

    int eps(int a) const { return a <= p ? 1 : -1; }  // a is 1-based
    bool operator==(const TensorSpace& o) const {
        return tag == o.tag && dim == o.dim && p == o.p;
    }
    bool operator!=(const TensorSpace& o) const { return !(*this == o); }
};

/// Multi-indices are packed 8 bits per slot (1-based index values, degree <= 8).
using PackedIdx = std::uint64_t;

inline int idx_get(PackedIdx m, int slot) { return static_cast<int>((m >> (8 * slot)) & 0xff); }
inline PackedIdx idx_set(PackedIdx m, int slot, int v) {
    return (m & ~(PackedIdx(0xff) << (8 * slot))) | (PackedIdx(v) << (8 * slot));
}
PackedIdx idx_of(const std::vector<int>& labels);
std::vector<int> idx_vec(PackedIdx m, int degree);
std::string idx_str(PackedIdx m, int degree);

/// Finitely supported map from degree-k multi-indices to Scalars.
class SparseTensor {
  public:
    SparseTensor(TensorSpace space, int degree) : space_(space), degree_(degree) {}

    static SparseTensor basis(TensorSpace space, const std::vector<int>& labels);
    static SparseTensor scalar_one(TensorSpace space) { return basis(space, {}); }

    const TensorSpace& space() const { return space_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<PackedIdx, Scalar>& terms() const { return terms_; }

    void add_term(PackedIdx idx, const Scalar& c);
    Scalar coeff(PackedIdx idx) const;

    SparseTensor operator+(const SparseTensor& o) const;
    SparseTensor operator-(const SparseTensor& o) const;
    SparseTensor scaled(const Scalar& c) const;
    bool operator==(const SparseTensor& o) const;

    /// Tensor concatenation (degrees add).
    SparseTensor tensor(const SparseTensor& o) const;

    /// Position action of a permutation: slot j moves to slot sigma(j).
    SparseTensor permuted(const tableaux::Permutation& sigma) const;

    std::string str() const;

  private:
    TensorSpace space_;
    int degree_;
    std::map<PackedIdx, Scalar> terms_;
};

/// Tensor extension of the bilinear form: diagonal +-1 for quad spaces,
/// Kronecker for 'C'.
Scalar pair(const SparseTensor& s, const SparseTensor& t);

/// Contraction with the form at positions i < j (1-based); degree drops by 2.
SparseTensor contract(const SparseTensor& t, int i, int j);

/// Insertion of the dual metric g* = sum_a eps_a e_a (x) e_a at positions i < j
/// of the result; degree grows by 2.
SparseTensor insert_metric(const SparseTensor& t, int i, int j);

/// Linear extension of the position action of a group algebra element.
SparseTensor apply_group_element(const tableaux::GroupAlgebraElement& g, const SparseTensor& t);

/// Echelonized span of sparse tensors with coordinate tracking.
class TensorSpan {
  public:
    /// Returns true if the vector enlarged the span.
    bool add(const SparseTensor& t);
    bool contains(const SparseTensor& t) const;
    /// Coefficients over the generators previously passed to add() (in call
    /// order, including dependent ones) expressing t, if t lies in the span.
    std::optional<std::vector<Scalar>> coordinates(const SparseTensor& t) const;
    int rank() const { return static_cast<int>(rows_.size()); }
    std::vector<SparseTensor> basis() const;

  private:
    struct Row {
        SparseTensor vec;
        std::map<int, Scalar> expr;  // vec = sum expr[g] * generator_g
        Row(SparseTensor v) : vec(std::move(v)) {}
    };
    std::map<PackedIdx, Row> rows_;  // pivot index -> row, pivot coefficient 1
    int n_generators_ = 0;
};

/// Projection onto the harmonic tensors (joint kernel of all contractions)
/// along the span of the metric insertions E_ij(g*)(T^{k-2}).
/// Throws std::domain_error if T^k != harmonic (+) insertion-span.
SparseTensor harmonic_project(const SparseTensor& t);

/// Reduced basis of s(A)(T^k(space)).
std::vector<SparseTensor> schur_image(const tableaux::Filling& filling, TensorSpace space);

/// Reduced basis of H(s(A)(T^k(space))) for a quadratic space.
std::vector<SparseTensor> harmonic_schur_image(const tableaux::Filling& filling,
                                               TensorSpace space);

}  // namespace specialforms::multitensor
