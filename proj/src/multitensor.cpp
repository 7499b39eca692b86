#include "specialforms/multitensor.hpp"

#include <mutex>
#include <sstream>

namespace specialforms::multitensor {

PackedIdx idx_of(const std::vector<int>& labels) {
    if (labels.size() > 8) throw std::invalid_argument("multi-index degree > 8");
    PackedIdx m = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1 || labels[i] > 255) throw std::invalid_argument("basis index out of range");
        m = idx_set(m, static_cast<int>(i), labels[i]);
    }
    return m;
}

std::vector<int> idx_vec(PackedIdx m, int degree) {
    std::vector<int> v(degree);
    for (int i = 0; i < degree; ++i) v[i] = idx_get(m, i);
    return v;
}

std::string idx_str(PackedIdx m, int degree) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < degree; ++i) os << (i ? "," : "") << idx_get(m, i);
    os << ")";
    return os.str();
}

SparseTensor SparseTensor::basis(TensorSpace space, const std::vector<int>& labels) {
    SparseTensor t(space, static_cast<int>(labels.size()));
    t.add_term(idx_of(labels), Scalar::one());
    return t;
}

void SparseTensor::add_term(PackedIdx idx, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(idx, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Scalar SparseTensor::coeff(PackedIdx idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Scalar::zero() : it->second;
}

SparseTensor SparseTensor::operator+(const SparseTensor& o) const {
    if (space_ != o.space_ || degree_ != o.degree_)
        throw std::invalid_argument("SparseTensor: space/degree mismatch in +");
    SparseTensor r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

SparseTensor SparseTensor::operator-(const SparseTensor& o) const {
    return *this + o.scaled(Scalar::integer(-1));
}

SparseTensor SparseTensor::scaled(const Scalar& c) const {
    SparseTensor r(space_, degree_);
    if (c.is_zero()) return r;
    for (const auto& [idx, d] : terms_) r.terms_.emplace(idx, c * d);
    return r;
}

bool SparseTensor::operator==(const SparseTensor& o) const {
    return space_ == o.space_ && degree_ == o.degree_ && terms_ == o.terms_;
}

SparseTensor SparseTensor::tensor(const SparseTensor& o) const {
    if (space_ != o.space_) throw std::invalid_argument("SparseTensor: space mismatch in tensor");
    SparseTensor r(space_, degree_ + o.degree_);
    for (const auto& [i1, c1] : terms_)
        for (const auto& [i2, c2] : o.terms_) r.add_term(i1 | (i2 << (8 * degree_)), c1 * c2);
    return r;
}

SparseTensor SparseTensor::permuted(const tableaux::Permutation& sigma) const {
    if (sigma.degree() != degree_)
        throw std::invalid_argument("SparseTensor: permutation degree mismatch");
    SparseTensor r(space_, degree_);
    for (const auto& [idx, c] : terms_) {
        PackedIdx m = 0;
        for (int j = 0; j < degree_; ++j) m = idx_set(m, sigma.map(j + 1) - 1, idx_get(idx, j));
        r.add_term(m, c);
    }
    return r;
}

std::string SparseTensor::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*e" << idx_str(idx, degree_);
    }
    return os.str();
}

Scalar pair(const SparseTensor& s, const SparseTensor& t) {
    if (s.space() != t.space() || s.degree() != t.degree())
        throw std::invalid_argument("pair: space/degree mismatch");
    Scalar total = Scalar::zero();
    const auto& a = s.terms();
    const auto& b = t.terms();
    for (const auto& [idx, c] : a) {
        auto it = b.find(idx);
        if (it == b.end()) continue;
        int sign = 1;
        for (int j = 0; j < s.degree(); ++j) sign *= s.space().eps(idx_get(idx, j));
        total += c * it->second * Scalar::integer(sign);
    }
    return total;
}

SparseTensor contract(const SparseTensor& t, int i, int j) {
    if (!(1 <= i && i < j && j <= t.degree()))
        throw std::invalid_argument("contract: positions out of range");
    SparseTensor r(t.space(), t.degree() - 2);
    for (const auto& [idx, c] : t.terms()) {
        int a = idx_get(idx, i - 1), b = idx_get(idx, j - 1);
        if (a != b) continue;
        PackedIdx m = 0;
        int slot = 0;
        for (int s = 0; s < t.degree(); ++s) {
            if (s == i - 1 || s == j - 1) continue;
            m = idx_set(m, slot++, idx_get(idx, s));
        }
        r.add_term(m, c * Scalar::integer(t.space().eps(a)));
    }
    return r;
}

SparseTensor insert_metric(const SparseTensor& t, int i, int j) {
    int k = t.degree() + 2;
    if (!(1 <= i && i < j && j <= k)) throw std::invalid_argument("insert_metric: positions out of range");
    SparseTensor r(t.space(), k);
    for (const auto& [idx, c] : t.terms()) {
        for (int a = 1; a <= t.space().dim; ++a) {
            PackedIdx m = 0;
            int src = 0;
            for (int s = 0; s < k; ++s) {
                int v;
                if (s == i - 1 || s == j - 1)
                    v = a;
                else
                    v = idx_get(idx, src++);
                m = idx_set(m, s, v);
            }
            r.add_term(m, c * Scalar::integer(t.space().eps(a)));
        }
    }
    return r;
}

SparseTensor apply_group_element(const tableaux::GroupAlgebraElement& g, const SparseTensor& t) {
    if (g.degree() != t.degree())
        throw std::invalid_argument("apply_group_element: degree mismatch");
    SparseTensor r(t.space(), t.degree());
    int k = t.degree();
    std::vector<int> map(k);
    for (const auto& [p, c] : g.terms()) {
        for (int j = 0; j < k; ++j) map[j] = p.map(j + 1) - 1;
        for (const auto& [idx, coef] : t.terms()) {
            PackedIdx m = 0;
            for (int j = 0; j < k; ++j) m = idx_set(m, map[j], idx_get(idx, j));
            r.add_term(m, c * coef);
        }
    }
    return r;
}

namespace {

Scalar field_div(const Scalar& a, const Scalar& b) { return a * b.inv(); }

}  // namespace

bool TensorSpan::add(const SparseTensor& t) {
    int gen = n_generators_++;
    SparseTensor r = t;
    std::map<int, Scalar> expr;
    expr[gen] = Scalar::one();
    while (!r.is_zero()) {
        PackedIdx pivot = r.terms().begin()->first;
        auto it = rows_.find(pivot);
        if (it == rows_.end()) {
            Scalar lead = r.terms().begin()->second;
            Scalar inv = lead.inv();
            Row row(r.scaled(inv));
            for (auto& [g, c] : expr) row.expr[g] = c * inv;
            rows_.emplace(pivot, std::move(row));
            return true;
        }
        Scalar coef = r.terms().begin()->second;
        r = r - it->second.vec.scaled(coef);
        for (const auto& [g, c] : it->second.expr) {
            auto e = expr.find(g);
            if (e == expr.end())
                expr.emplace(g, -(coef * c));
            else {
                e->second -= coef * c;
                if (e->second.is_zero()) expr.erase(e);
            }
        }
    }
    return false;
}

bool TensorSpan::contains(const SparseTensor& t) const { return coordinates(t).has_value(); }

std::optional<std::vector<Scalar>> TensorSpan::coordinates(const SparseTensor& t) const {
    SparseTensor r = t;
    std::vector<Scalar> out(n_generators_, Scalar::zero());
    while (!r.is_zero()) {
        PackedIdx pivot = r.terms().begin()->first;
        auto it = rows_.find(pivot);
        if (it == rows_.end()) return std::nullopt;
        Scalar coef = r.terms().begin()->second;
        r = r - it->second.vec.scaled(coef);
        for (const auto& [g, c] : it->second.expr) out[g] += coef * c;
    }
    return out;
}

std::vector<SparseTensor> TensorSpan::basis() const {
    std::vector<SparseTensor> b;
    for (const auto& [pivot, row] : rows_) b.push_back(row.vec);
    return b;
}

namespace {

/// Stacks all contractions C_ij(t), i<j, into one tensor keyed by
/// (pair id, contracted multi-index); used to solve for the insertion part.
SparseTensor stacked_contractions(const SparseTensor& t) {
    int k = t.degree();
    SparseTensor out(t.space(), k - 2 + 1);  // extra slot carries the pair id
    int pair_id = 1;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j, ++pair_id) {
            SparseTensor c = contract(t, i, j);
            for (const auto& [idx, co] : c.terms())
                out.add_term(idx_set(idx, k - 2, pair_id), co);
        }
    return out;
}

struct HarmonicContext {
    std::vector<SparseTensor> insertion_basis;  // reduced basis of E^k
    TensorSpan contraction_span;                // span of their stacked contractions
};

const HarmonicContext& harmonic_context(const TensorSpace& space, int k) {
    static std::map<std::tuple<char, int, int, int>, HarmonicContext> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(space.tag, space.dim, space.p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    HarmonicContext ctx;
    // Reduced basis of the insertion span E^k(V).
    TensorSpan espan;
    std::vector<PackedIdx> lower;
    int lower_count = 1;
    for (int s = 0; s < k - 2; ++s) lower_count *= space.dim;
    for (int flat = 0; flat < lower_count; ++flat) {
        PackedIdx m = 0;
        int rest = flat;
        for (int s = 0; s < k - 2; ++s) {
            m = idx_set(m, s, rest % space.dim + 1);
            rest /= space.dim;
        }
        lower.push_back(m);
    }
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            for (PackedIdx m : lower) {
                SparseTensor base(space, k - 2);
                base.add_term(m, Scalar::one());
                SparseTensor ins = insert_metric(base, i, j);
                if (espan.add(ins)) ctx.insertion_basis.push_back(ins);
            }
    for (size_t i = 0; i < ctx.insertion_basis.size(); ++i) {
        if (!ctx.contraction_span.add(stacked_contractions(ctx.insertion_basis[i])))
            throw std::domain_error("harmonic_project: degenerate decomposition (harmonic tensors meet the insertion span)");
    }
    return cache.emplace(key, std::move(ctx)).first->second;
}

}  // namespace

SparseTensor harmonic_project(const SparseTensor& t) {
    if (t.degree() < 2) return t;
    const HarmonicContext& ctx = harmonic_context(t.space(), t.degree());
    auto coords = ctx.contraction_span.coordinates(stacked_contractions(t));
    if (!coords)
        throw std::domain_error("harmonic_project: degenerate decomposition (contractions not matched by insertions)");
    SparseTensor e(t.space(), t.degree());
    for (size_t i = 0; i < ctx.insertion_basis.size(); ++i)
        e = e + ctx.insertion_basis[i].scaled((*coords)[i]);
    return t - e;
}

std::vector<SparseTensor> schur_image(const tableaux::Filling& filling, TensorSpace space) {
    int k = filling.size();
    tableaux::GroupAlgebraElement s = tableaux::symmetrizer(filling);
    // s(A) is invariant under the row group acting on positions, so basis
    // tensors that differ by a row permutation have equal images: it is
    // enough to sweep indices sorted along each row of the filling.
    std::vector<std::vector<int>> row_slots;
    for (int r = 0; r < filling.rows(); ++r) {
        std::vector<int> slots;
        for (int c = 0; c < filling.shape().part(r); ++c) slots.push_back(filling.entry(r, c) - 1);
        row_slots.push_back(std::move(slots));
    }
    TensorSpan span;
    std::vector<SparseTensor> out;
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= space.dim;
    for (long long flat = 0; flat < count; ++flat) {
        PackedIdx m = 0;
        long long rest = flat;
        for (int s2 = 0; s2 < k; ++s2) {
            m = idx_set(m, s2, static_cast<int>(rest % space.dim) + 1);
            rest /= space.dim;
        }
        bool canonical = true;
        for (const auto& slots : row_slots)
            for (size_t t = 1; t < slots.size() && canonical; ++t)
                if (idx_get(m, slots[t - 1]) > idx_get(m, slots[t])) canonical = false;
        if (!canonical) continue;
        SparseTensor b(space, k);
        b.add_term(m, Scalar::one());
        SparseTensor img = apply_group_element(s, b);
        if (!img.is_zero() && span.add(img)) out.push_back(img);
    }
    return out;
}

std::vector<SparseTensor> harmonic_schur_image(const tableaux::Filling& filling,
                                               TensorSpace space) {
    TensorSpan span;
    std::vector<SparseTensor> out;
    for (const SparseTensor& v : schur_image(filling, space)) {
        SparseTensor h = harmonic_project(v);
        if (!h.is_zero() && span.add(h)) out.push_back(h);
    }
    return out;
}

}  // namespace specialforms::multitensor
