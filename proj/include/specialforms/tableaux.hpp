#pragma once

#include "specialforms/scalar.hpp"

#include <map>
#include <vector>

namespace specialforms::tableaux {

/// Weakly decreasing sequence of positive integers.
class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    int size() const { return size_; }
    int rows() const { return static_cast<int>(parts_.size()); }
    int part(int r) const { return (r >= 0 && r < rows()) ? parts_[r] : 0; }
    const std::vector<int>& parts() const { return parts_; }
    Partition conjugate() const;

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    std::string str() const;

  private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Standard filling of a Young diagram: entries 1..k, strictly increasing
/// along rows and columns. Invalid fillings are rejected at construction.
class Filling {
  public:
    Filling(Partition shape, std::vector<std::vector<int>> entries);

    /// The canonical filling: rows filled in order beginning at the top.
    static Filling standard(const Partition& shape);
    /// The rectangular tableau B_{n,ell} (n rows, ell columns), filled row-wise.
    static Filling rectangle(int n, int ell);

    const Partition& shape() const { return shape_; }
    int size() const { return shape_.size(); }
    int rows() const { return shape_.rows(); }
    int entry(int r, int c) const { return entries_[r][c]; }

    /// Row-major bracket rendering, e.g. "[[1,2,3],[4,5]]".
    std::string str() const;

    bool operator==(const Filling& o) const { return entries_ == o.entries_; }

  private:
    Partition shape_;
    std::vector<std::vector<int>> entries_;
};

/// Bijection of {1..k}, stored 0-based.
class Permutation {
  public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int k);
    static Permutation transposition(int k, int a, int b);  // 1-based a, b

    int degree() const { return static_cast<int>(img_.size()); }
    /// Image of x under the permutation (1-based).
    int map(int x) const { return img_[x - 1] + 1; }
    Permutation inverse() const;
    /// (this * o)(x) = this(o(x)).
    Permutation operator*(const Permutation& o) const;
    int sign() const;

    bool operator<(const Permutation& o) const { return img_ < o.img_; }
    bool operator==(const Permutation& o) const { return img_ == o.img_; }

  private:
    std::vector<int> img_;
};

/// Sparse element of the group algebra of S_k over Scalar.
class GroupAlgebraElement {
  public:
    explicit GroupAlgebraElement(int degree) : degree_(degree) {}

    int degree() const { return degree_; }
    void add(const Permutation& p, const Scalar& c);
    const std::map<Permutation, Scalar>& terms() const { return terms_; }

    GroupAlgebraElement operator*(const GroupAlgebraElement& o) const;  // convolution
    GroupAlgebraElement operator+(const GroupAlgebraElement& o) const;
    GroupAlgebraElement scaled(const Scalar& c) const;
    bool operator==(const GroupAlgebraElement& o) const { return terms_ == o.terms_; }

  private:
    int degree_;
    std::map<Permutation, Scalar> terms_;
};

/// Product of the hook lengths of the shape.
long long hook_product(const Partition& shape);
/// |R(A)| = product of factorials of the row lengths.
long long row_group_order(const Filling& f);
long long column_group_order(const Filling& f);

std::vector<Permutation> row_group(const Filling& f);
std::vector<Permutation> column_group(const Filling& f);

/// Young symmetrizer s(A) = c(A) r(A) / h(A); with dual set, s(A)* = r(A) c(A) / h(A).
GroupAlgebraElement symmetrizer(const Filling& f, bool dual = false);
GroupAlgebraElement row_sum(const Filling& f);          // r(A)
GroupAlgebraElement column_sum(const Filling& f);       // c(A), signed

/// B|A: the rectangle B = B_{n,ell} with the shape of A abutted on the right,
/// B filled 1..n*ell row-wise, A refilled n*ell+1 .. n*ell+|A| row-wise.
Filling abut(const Filling& B, const Filling& A);

/// c(A,B) = h(B|A) |R(B)| |R(A)| / (h(B) h(A) |R(B|A)|), a positive rational.
Scalar abut_constant(const Filling& A, const Filling& B);

/// All partitions of k with at most max_rows rows.
std::vector<Partition> partitions_of(int k, int max_rows);
/// All standard fillings of the shape.
std::vector<Filling> standard_fillings(const Partition& shape);

/// dim S_lambda(C^n) by the hook content formula (test oracle).
long long hook_content_dimension(const Partition& shape, int n);

}  // namespace specialforms::tableaux
