#include "specialforms/liegeom.hpp"

#include <sstream>

namespace specialforms::liegeom {

using multitensor::idx_get;
using multitensor::idx_set;

Vec basis_vec(const QuadSpace& V, int a) { return SparseTensor::basis(V.tensor_space(), {a}); }

Scalar form_pair(const QuadSpace& V, const Vec& v, const Vec& w) {
    Scalar s = Scalar::zero();
    for (const auto& [i1, c1] : v.terms()) {
        auto it = w.terms().find(i1);
        if (it != w.terms().end())
            s += c1 * it->second * Scalar::integer(V.eps(idx_get(i1, 0)));
    }
    return s;
}

void LieElement::add_term(int a, int b, const Scalar& c) {
    if (c.is_zero()) return;
    Scalar v = c;
    if (a == b) return;
    if (a > b) {
        std::swap(a, b);
        v = -v;
    }
    auto key = std::make_pair(a, b);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, v);
    } else {
        it->second += v;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LieElement LieElement::wedge(const QuadSpace& V, const Vec& w, const Vec& wp) {
    LieElement X(V);
    for (const auto& [i1, c1] : w.terms())
        for (const auto& [i2, c2] : wp.terms()) X.add_term(idx_get(i1, 0), idx_get(i2, 0), c1 * c2);
    return X;
}

LieElement LieElement::operator+(const LieElement& o) const {
    LieElement r = *this;
    for (const auto& [ab, c] : o.terms_) r.add_term(ab.first, ab.second, c);
    return r;
}

LieElement LieElement::scaled(const Scalar& c) const {
    LieElement r(V_);
    if (c.is_zero()) return r;
    for (const auto& [ab, d] : terms_) r.terms_.emplace(ab, c * d);
    return r;
}

Vec LieElement::act(const Vec& v) const {
    // (e_a ^ e_b)(v) = eps_a v_a e_b - eps_b v_b e_a.
    Vec out(V_.tensor_space(), 1);
    for (const auto& [ab, c] : terms_) {
        auto [a, b] = ab;
        for (const auto& [idx, vc] : v.terms()) {
            int r = idx_get(idx, 0);
            if (r == a) out.add_term(multitensor::idx_of({b}), c * vc * Scalar::integer(V_.eps(a)));
            if (r == b) out.add_term(multitensor::idx_of({a}), -(c * vc) * Scalar::integer(V_.eps(b)));
        }
    }
    return out;
}

SparseTensor LieElement::act_tensor(const SparseTensor& t) const {
    SparseTensor out(t.space(), t.degree());
    for (const auto& [idx, c] : t.terms()) {
        for (int slot = 0; slot < t.degree(); ++slot) {
            Vec img = act(basis_vec(V_, idx_get(idx, slot)));
            for (const auto& [i1, c1] : img.terms())
                out.add_term(idx_set(idx, slot, idx_get(i1, 0)), c * c1);
        }
    }
    return out;
}

std::string LieElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [ab, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*e" << ab.first << "^e" << ab.second;
    }
    return os.str();
}

LieElement bracket(const LieElement& X, const LieElement& Y) {
    const QuadSpace& V = X.space();
    // Commutator matrix on basis vectors, re-expressed via c_ab = eps_a M[b][a].
    LieElement Z(V);
    std::vector<Vec> columns;
    for (int a = 1; a <= V.m(); ++a) {
        Vec ea = basis_vec(V, a);
        Vec col = X.act(Y.act(ea)) - Y.act(X.act(ea));
        columns.push_back(col);
    }
    for (int a = 1; a <= V.m(); ++a)
        for (int b = a + 1; b <= V.m(); ++b) {
            Scalar m_ba = columns[a - 1].coeff(multitensor::idx_of({b}));
            Z.add_term(a, b, Scalar::integer(V.eps(a)) * m_ba);
        }
    return Z;
}

Scalar lambda2_pairing(const LieElement& X, const LieElement& Y) {
    Scalar s = Scalar::zero();
    const QuadSpace& V = X.space();
    for (const auto& [ab, c] : X.terms()) {
        auto it = Y.terms().find(ab);
        if (it != Y.terms().end())
            s += c * it->second * Scalar::integer(V.eps(ab.first) * V.eps(ab.second));
    }
    return s;
}

std::vector<LieElement> p_basis(const QuadSpace& V) {
    std::vector<LieElement> out;
    for (int a = 1; a <= V.p; ++a)
        for (int mu = V.p + 1; mu <= V.m(); ++mu) {
            LieElement X(V);
            X.add_term(a, mu, Scalar::one());
            out.push_back(X);
        }
    return out;
}

std::vector<LieElement> k_basis(const QuadSpace& V) {
    std::vector<LieElement> out;
    auto block = [&](int lo, int hi) {
        for (int a = lo; a <= hi; ++a)
            for (int b = a + 1; b <= hi; ++b) {
                LieElement X(V);
                X.add_term(a, b, Scalar::one());
                out.push_back(X);
            }
    };
    block(1, V.p);
    block(V.p + 1, V.m());
    return out;
}

ParabolicData::ParabolicData(QuadSpace V_, int ell_) : V(V_), ell(ell_) {
    if (ell < 1 || ell > std::min(V.p, V.q))
        throw std::invalid_argument("ParabolicData: need 1 <= ell <= min(p,q)");
    // (u_i, u'_j) = delta_ij, checked at construction.
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j) {
            Scalar v = form_pair(V, u(i), uprime(j));
            if (v != (i == j ? Scalar::one() : Scalar::zero()))
                throw std::logic_error("ParabolicData: Witt basis pairing failed");
        }
}

Vec ParabolicData::u(int i) const {
    Vec v(V.tensor_space(), 1);
    Scalar h = Scalar::sqrt2_pow(-1);  // 1/sqrt2
    v.add_term(multitensor::idx_of({i}), h);
    v.add_term(multitensor::idx_of({V.m() + 1 - i}), h);
    return v;
}

Vec ParabolicData::uprime(int i) const {
    // u' = theta_0(u), which makes (u_i, u'_j) = delta_ij.
    Vec v(V.tensor_space(), 1);
    Scalar h = Scalar::sqrt2_pow(-1);
    v.add_term(multitensor::idx_of({i}), h);
    v.add_term(multitensor::idx_of({V.m() + 1 - i}), -h);
    return v;
}

std::vector<LieElement> nW_basis(const ParabolicData& P) {
    std::vector<LieElement> out;
    for (int a = P.ell + 1; a <= P.V.p; ++a)
        for (int i = 1; i <= P.ell; ++i)
            out.push_back(LieElement::wedge(P.V, basis_vec(P.V, a), P.u(i)));
    for (int mu = P.V.p + 1; mu <= P.V.m() - P.ell; ++mu)
        for (int i = 1; i <= P.ell; ++i)
            out.push_back(LieElement::wedge(P.V, basis_vec(P.V, mu), P.u(i)));
    return out;
}

std::vector<LieElement> n_basis(const ParabolicData& P) {
    std::vector<LieElement> out = nW_basis(P);
    for (int i = 1; i <= P.ell; ++i)
        for (int j = i + 1; j <= P.ell; ++j)
            out.push_back(LieElement::wedge(P.V, P.u(i), P.u(j)));
    return out;
}

std::vector<CotangentLabel> n_dual_labels(const ParabolicData& P) {
    std::vector<CotangentLabel> out;
    for (int a = P.ell + 1; a <= P.V.p; ++a)
        for (int i = 1; i <= P.ell; ++i) out.push_back(CotangentLabel::nu(a, i));
    for (int mu = P.V.p + 1; mu <= P.V.m() - P.ell; ++mu)
        for (int i = 1; i <= P.ell; ++i) out.push_back(CotangentLabel::nu(mu, i));
    for (int i = 1; i <= P.ell; ++i)
        for (int j = i + 1; j <= P.ell; ++j) out.push_back(CotangentLabel::zq(i, j));
    return out;
}

LieElement dual_element(const CotangentLabel& label, const ParabolicData& P) {
    switch (label.kind) {
        case CotangentLabel::Kind::Nu: {
            Vec e = basis_vec(P.V, label.a);
            LieElement X = LieElement::wedge(P.V, e, P.uprime(label.b));
            return label.a <= P.V.p ? X : X.scaled(Scalar::integer(-1));
        }
        case CotangentLabel::Kind::ZQ:
            return LieElement::wedge(P.V, P.uprime(label.a), P.uprime(label.b));
        default:
            throw std::invalid_argument("dual_element: only nu/zq labels have n-duals");
    }
}

std::string CotangentLabel::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Omega: os << "w[" << a << "," << b << "]"; break;
        case Kind::Nu: os << "nu[" << a << "," << b << "]"; break;
        case Kind::ZQ: os << "zq[" << a << "," << b << "]"; break;
        case Kind::AStar: os << "a*"; break;
        case Kind::GL: os << "gl"; break;
    }
    return os.str();
}

std::vector<std::pair<CotangentLabel, Scalar>> sigma_pullback(const CotangentLabel& omega,
                                                              const ParabolicData& P) {
    if (omega.kind != CotangentLabel::Kind::Omega)
        throw std::invalid_argument("sigma_pullback: expected an omega label");
    int alpha = omega.a, mu = omega.b;
    int m = P.V.m(), p = P.V.p, ell = P.ell;
    if (alpha < 1 || alpha > p || mu <= p || mu > m)
        throw std::invalid_argument("sigma_pullback: omega index out of range");
    Scalar inv_sqrt2 = Scalar::sqrt2_pow(-1);
    if (alpha > ell) {
        if (mu <= m - ell) return {{omega, Scalar::one()}};  // p_W part: identity
        int i = m + 1 - mu;
        return {{CotangentLabel::nu(alpha, i), -inv_sqrt2}};
    }
    // alpha <= ell
    if (mu <= m - ell) return {{CotangentLabel::nu(mu, alpha), inv_sqrt2}};
    if (mu == m + 1 - ell)
        throw std::domain_error("sigma_pullback: omega_{i," + std::to_string(mu) +
                                "} falls in two stated index ranges");
    return {{CotangentLabel::gl(), Scalar::one()}};
}

}  // namespace specialforms::liegeom
