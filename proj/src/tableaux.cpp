#include "specialforms/tableaux.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace specialforms::tableaux {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("Partition: parts must be weakly decreasing");
        size_ += parts_[i];
    }
}

Partition Partition::conjugate() const {
    std::vector<int> c;
    for (int col = 0; col < part(0); ++col) {
        int len = 0;
        for (int r = 0; r < rows(); ++r)
            if (parts_[r] > col) ++len;
        c.push_back(len);
    }
    return Partition(c);
}

std::string Partition::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ")";
    return os.str();
}

Filling::Filling(Partition shape, std::vector<std::vector<int>> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (static_cast<int>(entries_.size()) != shape_.rows())
        throw std::invalid_argument("Filling: row count mismatch");
    std::vector<bool> seen(shape_.size() + 1, false);
    for (int r = 0; r < shape_.rows(); ++r) {
        if (static_cast<int>(entries_[r].size()) != shape_.part(r))
            throw std::invalid_argument("Filling: row length mismatch");
        for (int c = 0; c < shape_.part(r); ++c) {
            int e = entries_[r][c];
            if (e < 1 || e > shape_.size() || seen[e])
                throw std::invalid_argument("Filling: entries must be a bijection onto 1..k");
            seen[e] = true;
            if (c > 0 && entries_[r][c - 1] >= e)
                throw std::invalid_argument("Filling: rows must strictly increase");
            if (r > 0 && entries_[r - 1][c] >= e)
                throw std::invalid_argument("Filling: columns must strictly increase");
        }
    }
}

Filling Filling::standard(const Partition& shape) {
    std::vector<std::vector<int>> rows;
    int next = 1;
    for (int r = 0; r < shape.rows(); ++r) {
        std::vector<int> row(shape.part(r));
        std::iota(row.begin(), row.end(), next);
        next += shape.part(r);
        rows.push_back(std::move(row));
    }
    return Filling(shape, std::move(rows));
}

Filling Filling::rectangle(int n, int ell) {
    std::vector<int> parts(n, ell);
    return standard(Partition(parts));
}

std::string Filling::str() const {
    std::ostringstream os;
    os << "[";
    for (int r = 0; r < rows(); ++r) {
        os << (r ? ",[" : "[");
        for (size_t c = 0; c < entries_[r].size(); ++c) os << (c ? "," : "") << entries_[r][c];
        os << "]";
    }
    os << "]";
    return os.str();
}

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (int v : img_) {
        if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
            throw std::invalid_argument("Permutation: not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(int k) {
    std::vector<int> v(k);
    std::iota(v.begin(), v.end(), 0);
    return Permutation(std::move(v));
}

Permutation Permutation::transposition(int k, int a, int b) {
    std::vector<int> v(k);
    std::iota(v.begin(), v.end(), 0);
    std::swap(v[a - 1], v[b - 1]);
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
    std::vector<int> v(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) v[img_[i]] = static_cast<int>(i);
    return Permutation(std::move(v));
}

Permutation Permutation::operator*(const Permutation& o) const {
    std::vector<int> v(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) v[i] = img_[o.img_[i]];
    return Permutation(std::move(v));
}

int Permutation::sign() const {
    std::vector<bool> seen(img_.size(), false);
    int s = 1;
    for (size_t i = 0; i < img_.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (size_t j = i; !seen[j]; j = img_[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) s = -s;
    }
    return s;
}

void GroupAlgebraElement::add(const Permutation& p, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(p);
    if (it == terms_.end()) {
        terms_.emplace(p, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GroupAlgebraElement GroupAlgebraElement::operator*(const GroupAlgebraElement& o) const {
    GroupAlgebraElement r(degree_);
    for (const auto& [p, c] : terms_)
        for (const auto& [q, d] : o.terms_) r.add(p * q, c * d);
    return r;
}

GroupAlgebraElement GroupAlgebraElement::operator+(const GroupAlgebraElement& o) const {
    GroupAlgebraElement r = *this;
    for (const auto& [p, c] : o.terms_) r.add(p, c);
    return r;
}

GroupAlgebraElement GroupAlgebraElement::scaled(const Scalar& c) const {
    GroupAlgebraElement r(degree_);
    for (const auto& [p, d] : terms_) r.add(p, c * d);
    return r;
}

long long hook_product(const Partition& shape) {
    Partition conj = shape.conjugate();
    long long h = 1;
    for (int r = 0; r < shape.rows(); ++r)
        for (int c = 0; c < shape.part(r); ++c)
            h *= (shape.part(r) - c) + (conj.part(c) - r) - 1;
    return h;
}

namespace {

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Permutations of {1..k} preserving the given blocks, as images on positions.
std::vector<Permutation> block_group(int k, const std::vector<std::vector<int>>& blocks) {
    std::vector<Permutation> result{Permutation::identity(k)};
    for (const auto& block : blocks) {
        std::vector<int> perm(block.begin(), block.end());
        std::sort(perm.begin(), perm.end());
        std::vector<Permutation> next;
        do {
            std::vector<int> img(k);
            std::iota(img.begin(), img.end(), 0);
            for (size_t i = 0; i < block.size(); ++i) img[block[i] - 1] = perm[i] - 1;
            Permutation blockperm((std::move(img)));
            for (const auto& base : result) next.push_back(blockperm * base);
        } while (std::next_permutation(perm.begin(), perm.end()));
        result = std::move(next);
    }
    return result;
}

std::vector<std::vector<int>> row_blocks(const Filling& f) {
    std::vector<std::vector<int>> blocks;
    for (int r = 0; r < f.rows(); ++r) {
        std::vector<int> b;
        for (int c = 0; c < f.shape().part(r); ++c) b.push_back(f.entry(r, c));
        blocks.push_back(std::move(b));
    }
    return blocks;
}

std::vector<std::vector<int>> column_blocks(const Filling& f) {
    std::vector<std::vector<int>> blocks;
    Partition conj = f.shape().conjugate();
    for (int c = 0; c < f.shape().part(0); ++c) {
        std::vector<int> b;
        for (int r = 0; r < conj.part(c); ++r) b.push_back(f.entry(r, c));
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace

long long row_group_order(const Filling& f) {
    long long o = 1;
    for (int r = 0; r < f.rows(); ++r) o *= factorial(f.shape().part(r));
    return o;
}

long long column_group_order(const Filling& f) {
    Partition conj = f.shape().conjugate();
    long long o = 1;
    for (int c = 0; c < conj.rows(); ++c) o *= factorial(conj.part(c));
    return o;
}

std::vector<Permutation> row_group(const Filling& f) { return block_group(f.size(), row_blocks(f)); }
std::vector<Permutation> column_group(const Filling& f) {
    return block_group(f.size(), column_blocks(f));
}

GroupAlgebraElement row_sum(const Filling& f) {
    GroupAlgebraElement r(f.size());
    for (const auto& p : row_group(f)) r.add(p, Scalar::one());
    return r;
}

GroupAlgebraElement column_sum(const Filling& f) {
    GroupAlgebraElement c(f.size());
    for (const auto& p : column_group(f)) c.add(p, Scalar::integer(p.sign()));
    return c;
}

GroupAlgebraElement symmetrizer(const Filling& f, bool dual) {
    Scalar inv_h = Scalar::rational(Rational(1, hook_product(f.shape())));
    GroupAlgebraElement r = row_sum(f), c = column_sum(f);
    return (dual ? r * c : c * r).scaled(inv_h);
}

Filling abut(const Filling& B, const Filling& A) {
    int n = B.rows();
    int ell = B.shape().part(0);
    for (int r = 0; r < n; ++r)
        if (B.shape().part(r) != ell || B.entry(r, 0) != r * ell + 1)
            throw std::invalid_argument("abut: B must be the rectangular tableau B_{n,ell}");
    if (A.rows() > n) throw std::invalid_argument("abut: A has more rows than B");
    std::vector<int> parts;
    for (int r = 0; r < n; ++r) parts.push_back(ell + A.shape().part(r));
    std::vector<std::vector<int>> rows;
    int next = n * ell + 1;
    for (int r = 0; r < n; ++r) {
        std::vector<int> row;
        for (int c = 0; c < ell; ++c) row.push_back(B.entry(r, c));
        for (int c = 0; c < A.shape().part(r); ++c) row.push_back(next++);
        rows.push_back(std::move(row));
    }
    return Filling(Partition(parts), std::move(rows));
}

Scalar abut_constant(const Filling& A, const Filling& B) {
    Filling BA = abut(B, A);
    Rational num = Rational(hook_product(BA.shape())) * row_group_order(B) * row_group_order(A);
    Rational den = Rational(hook_product(B.shape())) * hook_product(A.shape()) * row_group_order(BA);
    return Scalar::rational(num / den);
}

namespace {

void partitions_rec(int k, int max_rows, int max_part, std::vector<int>& acc,
                    std::vector<Partition>& out) {
    if (k == 0) {
        out.emplace_back(acc);
        return;
    }
    if (static_cast<int>(acc.size()) == max_rows) return;
    for (int p = std::min(k, max_part); p >= 1; --p) {
        acc.push_back(p);
        partitions_rec(k - p, max_rows, p, acc, out);
        acc.pop_back();
    }
}

void fillings_rec(const Partition& shape, int next, std::vector<std::vector<int>>& rows,
                  std::vector<int>& fill_len, std::vector<Filling>& out) {
    if (next > shape.size()) {
        out.emplace_back(shape, rows);
        return;
    }
    for (int r = 0; r < shape.rows(); ++r) {
        int c = fill_len[r];
        if (c >= shape.part(r)) continue;
        if (r > 0 && fill_len[r - 1] <= c) continue;  // column would not increase
        rows[r].push_back(next);
        ++fill_len[r];
        fillings_rec(shape, next + 1, rows, fill_len, out);
        --fill_len[r];
        rows[r].pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(int k, int max_rows) {
    std::vector<Partition> out;
    std::vector<int> acc;
    partitions_rec(k, max_rows, k, acc, out);
    return out;
}

std::vector<Filling> standard_fillings(const Partition& shape) {
    std::vector<Filling> out;
    std::vector<std::vector<int>> rows(shape.rows());
    std::vector<int> fill_len(shape.rows(), 0);
    fillings_rec(shape, 1, rows, fill_len, out);
    return out;
}

long long hook_content_dimension(const Partition& shape, int n) {
    Rational dim = 1;
    Partition conj = shape.conjugate();
    for (int r = 0; r < shape.rows(); ++r)
        for (int c = 0; c < shape.part(r); ++c) {
            long long hook = (shape.part(r) - c) + (conj.part(c) - r) - 1;
            dim *= Rational(n + c - r, hook);
        }
    if (denominator(dim) != 1) throw std::logic_error("hook_content_dimension: not integral");
    return static_cast<long long>(numerator(dim));
}

}  // namespace specialforms::tableaux
