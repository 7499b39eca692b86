#include "specialforms/cochain.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace specialforms::cochain {

using multitensor::idx_get;
using multitensor::idx_of;
using multitensor::idx_set;
using multitensor::TensorSpace;

namespace {

/// Sorts wedge labels in place; returns the sign, or 0 on a repeated label.
int wedge_normalize(std::vector<CotangentLabel>& labels) {
    int sign = 1;
    for (size_t i = 1; i < labels.size(); ++i)
        for (size_t j = i; j > 0 && labels[j] < labels[j - 1]; --j) {
            std::swap(labels[j], labels[j - 1]);
            sign = -sign;
        }
    for (size_t i = 1; i < labels.size(); ++i)
        if (labels[i] == labels[i - 1]) return 0;
    return sign;
}

PackedIdx idx_concat(PackedIdx a, int ka, PackedIdx b) { return a | (b << (8 * ka)); }

PackedIdx idx_slice(PackedIdx m, int from, int len) {
    PackedIdx r = 0;
    for (int s = 0; s < len; ++s) r = idx_set(r, s, idx_get(m, from + s));
    return r;
}

std::vector<PackedIdx> all_indices(int n, int k) {
    std::vector<PackedIdx> out;
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= n;
    out.reserve(count);
    for (long long flat = 0; flat < count; ++flat) {
        PackedIdx m = 0;
        long long rest = flat;
        for (int s = 0; s < k; ++s) {
            m = idx_set(m, s, static_cast<int>(rest % n) + 1);
            rest /= n;
        }
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Multi-indices of length len with values in [lo, hi].
void for_range_tuples(int len, int lo, int hi,
                      const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> t(len, lo);
    if (len == 0) {
        f(t);
        return;
    }
    if (hi < lo) return;
    while (true) {
        f(t);
        int s = len - 1;
        while (s >= 0 && t[s] == hi) {
            t[s] = lo;
            --s;
        }
        if (s < 0) break;
        ++t[s];
    }
}

}  // namespace

QuadSpace ComplexInfo::weil_space() const {
    if (kind == Kind::AP) return {V.p - ell, V.q - ell};
    return V;
}

bool ComplexInfo::operator==(const ComplexInfo& o) const {
    return kind == o.kind && V == o.V && n == o.n && ell == o.ell && model == o.model;
}

void Cochain::add_key(const CochainKey& key, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Cochain::add_term(std::vector<uint8_t> weil, std::vector<CotangentLabel> wedge,
                       PackedIdx coeff, const Scalar& c) {
    if (c.is_zero()) return;
    int sign = wedge_normalize(wedge);
    if (sign == 0) return;
    CochainKey key{std::move(weil), std::move(wedge), coeff};
    add_key(key, sign > 0 ? c : -c);
}

Cochain Cochain::operator+(const Cochain& o) const {
    Cochain r = *this;
    for (const auto& [k, c] : o.terms_) r.add_key(k, c);
    return r;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + o.scaled(Scalar::integer(-1)); }

Cochain Cochain::scaled(const Scalar& c) const {
    Cochain r(info_, j_, r_, k_);
    if (c.is_zero()) return r;
    for (const auto& [k, d] : terms_) r.terms_.emplace(k, c * d);
    return r;
}

bool Cochain::operator==(const Cochain& o) const {
    return j_ == o.j_ && r_ == o.r_ && k_ == o.k_ && terms_ == o.terms_;
}

std::string Cochain::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*[";
        for (size_t v = 0; v < key.weil.size(); ++v)
            if (key.weil[v])
                os << (info_.model == WeilModel::Fock ? "z" : "x") << v << "^"
                   << static_cast<int>(key.weil[v]);
        os << "|";
        for (size_t i = 0; i < key.wedge.size(); ++i) os << (i ? "^" : "") << key.wedge[i].str();
        os << "|e" << multitensor::idx_str(key.coeff, k_) << "]";
    }
    return os.str();
}

std::string Cochain::first_difference(const Cochain& a, const Cochain& b) {
    Cochain d = a - b;
    if (d.is_zero()) return "";
    const auto& [key, c] = *d.terms().begin();
    std::ostringstream os;
    os << "first differing coefficient " << c.str() << " at [weil(";
    for (size_t v = 0; v < key.weil.size(); ++v)
        if (key.weil[v]) os << v << "^" << static_cast<int>(key.weil[v]) << " ";
    os << ")|";
    for (size_t i = 0; i < key.wedge.size(); ++i) os << (i ? "^" : "") << key.wedge[i].str();
    os << "|e" << multitensor::idx_str(key.coeff, d.k()) << "]";
    return os.str();
}

bool CochainHom::is_zero() const {
    for (const auto& [i, c] : values_)
        if (!c.is_zero()) return false;
    return true;
}

std::vector<PackedIdx> CochainHom::index_set() const { return all_indices(info_.n, k_); }

const Cochain& CochainHom::value(PackedIdx I) const {
    auto it = values_.find(I);
    if (it == values_.end()) it = values_.emplace(I, Cochain(info_, j_, r_, k_)).first;
    return it->second;
}

Cochain& CochainHom::value_mut(PackedIdx I) {
    auto it = values_.find(I);
    if (it == values_.end()) it = values_.emplace(I, Cochain(info_, j_, r_, k_)).first;
    return it->second;
}

void CochainHom::set_value(PackedIdx I, Cochain c) { values_.insert_or_assign(I, std::move(c)); }

CochainHom CochainHom::operator+(const CochainHom& o) const {
    CochainHom r = *this;
    for (PackedIdx I : index_set()) r.set_value(I, value(I) + o.value(I));
    return r;
}

CochainHom CochainHom::operator-(const CochainHom& o) const {
    return *this + o.scaled(Scalar::integer(-1));
}

CochainHom CochainHom::scaled(const Scalar& c) const {
    CochainHom r(info_, j_, r_, k_);
    for (PackedIdx I : index_set()) r.set_value(I, value(I).scaled(c));
    return r;
}

bool CochainHom::operator==(const CochainHom& o) const {
    if (!(info_ == o.info_) || j_ != o.j_ || r_ != o.r_ || k_ != o.k_) return false;
    for (PackedIdx I : index_set())
        if (!(value(I) == o.value(I))) return false;
    return true;
}

std::string CochainHom::first_difference(const CochainHom& a, const CochainHom& b) {
    for (PackedIdx I : a.index_set()) {
        if (!(a.value(I) == b.value(I)))
            return "at eps" + multitensor::idx_str(I, a.k()) + ": " +
                   Cochain::first_difference(a.value(I), b.value(I));
    }
    return "";
}

Cochain dga_mul(const Cochain& a, const Cochain& b) {
    if (!(a.info() == b.info())) throw std::invalid_argument("dga_mul: complex mismatch");
    if (a.info().model != WeilModel::Fock)
        throw std::invalid_argument("dga_mul: products live in the Fock model");
    Cochain r(a.info(), a.j() + b.j(), a.r() + b.r(), a.k() + b.k());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            std::vector<uint8_t> weil(ka.weil.size());
            for (size_t v = 0; v < weil.size(); ++v)
                weil[v] = static_cast<uint8_t>(ka.weil[v] + kb.weil[v]);
            std::vector<CotangentLabel> wedge = ka.wedge;
            wedge.insert(wedge.end(), kb.wedge.begin(), kb.wedge.end());
            PackedIdx coeff = idx_concat(ka.coeff, a.k(), kb.coeff);
            r.add_term(std::move(weil), std::move(wedge), coeff, ca * cb);
        }
    return r;
}

CochainHom dga_mul(const CochainHom& a, const CochainHom& b) {
    CochainHom r(a.info(), a.j() + b.j(), a.r() + b.r(), a.k() + b.k());
    for (PackedIdx I : r.index_set()) {
        PackedIdx i1 = idx_slice(I, 0, a.k());
        PackedIdx i2 = idx_slice(I, a.k(), b.k());
        r.set_value(I, dga_mul(a.value(i1), b.value(i2)));
    }
    return r;
}

CochainHom phi_nq(const QuadSpace& V, int n, int ellp, WeilModel model) {
    if (n > V.p) throw std::invalid_argument("phi_nq: requires n <= p");
    int q = V.q, p = V.p, nq = n * q;
    ComplexInfo info = ComplexInfo::cv(V, n, model);
    CochainHom h(info, q, nq, ellp);
    Scalar pref = Scalar::sqrt2_pow(-nq - 2 * ellp);  // 2^{-(nq/2 + l')}
    if (model == WeilModel::Fock) pref *= Scalar::two_pi_i_pow(-(nq + ellp));

    for (PackedIdx I : h.index_set()) {
        Cochain val(info, q, nq, ellp);
        for_range_tuples(nq, 1, p, [&](const std::vector<int>& alpha) {
            std::vector<CotangentLabel> wedge;
            wedge.reserve(nq);
            for (int i = 0; i < n; ++i)
                for (int s = 0; s < q; ++s)
                    wedge.push_back(CotangentLabel::omega(alpha[i * q + s], p + 1 + s));
            for_range_tuples(ellp, 1, p, [&](const std::vector<int>& beta) {
                PackedIdx coeff = 0;
                for (int t = 0; t < ellp; ++t) coeff = idx_set(coeff, t, beta[t]);
                if (model == WeilModel::Fock) {
                    std::vector<uint8_t> weil(V.m() * n, 0);
                    for (int i = 0; i < n; ++i)
                        for (int s = 0; s < q; ++s) ++weil[info.weil_var(alpha[i * q + s], i + 1)];
                    for (int t = 0; t < ellp; ++t) ++weil[info.weil_var(beta[t], idx_get(I, t))];
                    val.add_term(std::move(weil), wedge, coeff, pref);
                } else {
                    weil::DeltaMatrix delta(V.m(), n);
                    for (int i = 0; i < n; ++i)
                        for (int s = 0; s < q; ++s) ++delta.at(alpha[i * q + s], i + 1);
                    for (int t = 0; t < ellp; ++t) ++delta.at(beta[t], idx_get(I, t));
                    weil::GaussPoly phi = weil::phi_delta(delta);
                    for (const auto& [e, c] : phi.poly().terms())
                        val.add_term(e, wedge, coeff, pref * c);
                }
            });
        });
        h.set_value(I, std::move(val));
    }
    return h;
}

CochainHom phi_0k(const QuadSpace& V, int n, int k) {
    ComplexInfo info = ComplexInfo::cv(V, n, WeilModel::Fock);
    CochainHom h(info, 0, 0, k);
    Scalar pref = Scalar::sqrt2_pow(-2 * k) * Scalar::two_pi_i_pow(-k);  // 2^{-k} (2 pi i)^{-k}
    for (PackedIdx I : h.index_set()) {
        Cochain val(info, 0, 0, k);
        for_range_tuples(k, 1, V.p, [&](const std::vector<int>& beta) {
            std::vector<uint8_t> weil(V.m() * n, 0);
            PackedIdx coeff = 0;
            for (int t = 0; t < k; ++t) {
                ++weil[info.weil_var(beta[t], idx_get(I, t))];
                coeff = idx_set(coeff, t, beta[t]);
            }
            val.add_term(std::move(weil), {}, coeff, pref);
        });
        h.set_value(I, std::move(val));
    }
    return h;
}

Cochain op_D_phi0(const QuadSpace& V, int n) {
    ComplexInfo info = ComplexInfo::cv(V, n, WeilModel::Schrodinger);
    Cochain cur(info, 0, 0, 0);
    cur.add_term(std::vector<uint8_t>(V.m() * n, 0), {}, 0, Scalar::one());
    // Factors applied right-to-left; each left-multiplies its omega label.
    for (int i = n; i >= 1; --i)
        for (int mu = V.m(); mu >= V.p + 1; --mu) {
            Cochain next(info, 0, cur.r() + 1, 0);
            for (int alpha = 1; alpha <= V.p; ++alpha) {
                for (const auto& [key, coef] : cur.terms()) {
                    weil::GaussPoly g(V.m(), n);
                    g.poly().add_term(key.weil, coef);
                    weil::GaussPoly raised = weil::raise(g, alpha, i);
                    std::vector<CotangentLabel> wedge;
                    wedge.push_back(CotangentLabel::omega(alpha, mu));
                    wedge.insert(wedge.end(), key.wedge.begin(), key.wedge.end());
                    for (const auto& [e, d] : raised.poly().terms())
                        next.add_term(e, wedge, key.coeff, d);
                }
            }
            cur = std::move(next);
        }
    Cochain out(info, V.q, n * V.q, 0);
    for (const auto& [key, coef] : cur.terms())
        out.add_key(key, coef * Scalar::sqrt2_pow(-n * V.q));
    return out;
}

CochainHom op_T_phi(const QuadSpace& V, int n, int ellp) {
    ComplexInfo info = ComplexInfo::cv(V, n, WeilModel::Schrodinger);
    Cochain base = op_D_phi0(V, n);
    CochainHom h(info, V.q, n * V.q, ellp);
    Scalar half = Scalar::rational(Rational(1, 2));
    for (PackedIdx I : h.index_set()) {
        Cochain cur = base;
        // T(eps_I) = D'_{i_1} o ... o D'_{i_{l'}}, applied right-to-left.
        for (int t = ellp - 1; t >= 0; --t) {
            int col = idx_get(I, t);
            Cochain next(info, cur.j(), cur.r(), cur.k() + 1);
            for (int alpha = 1; alpha <= V.p; ++alpha) {
                for (const auto& [key, coef] : cur.terms()) {
                    weil::GaussPoly g(V.m(), n);
                    g.poly().add_term(key.weil, coef * half);
                    weil::GaussPoly raised = weil::raise(g, alpha, col);
                    PackedIdx coeff = idx_concat(idx_of({alpha}), 1, key.coeff);
                    for (const auto& [e, d] : raised.poly().terms())
                        next.add_term(e, key.wedge, coeff, d);
                }
            }
            cur = std::move(next);
        }
        h.set_value(I, std::move(cur));
    }
    return h;
}

CochainHom project_schur(const CochainHom& h, const Filling& A, bool precompose) {
    if (A.size() != h.k()) throw std::invalid_argument("project_schur: size mismatch");
    tableaux::GroupAlgebraElement s = tableaux::symmetrizer(A);
    CochainHom out(h.info(), h.j(), h.r(), h.k());
    if (precompose) {
        // h(s(A) eps_I): sigma . eps_I = eps_J with J[sigma(t)] = I[t].
        for (PackedIdx I : h.index_set()) {
            Cochain val(h.info(), h.j(), h.r(), h.k());
            for (const auto& [perm, c] : s.terms()) {
                PackedIdx J = 0;
                for (int t = 0; t < h.k(); ++t) J = idx_set(J, perm.map(t + 1) - 1, idx_get(I, t));
                for (const auto& [key, coef] : h.value(J).terms()) val.add_key(key, c * coef);
            }
            out.set_value(I, std::move(val));
        }
        return out;
    }
    for (PackedIdx I : h.index_set()) {
        Cochain val(h.info(), h.j(), h.r(), h.k());
        for (const auto& [key, coef] : h.value(I).terms()) {
            for (const auto& [perm, c] : s.terms()) {
                PackedIdx m = 0;
                for (int t = 0; t < h.k(); ++t)
                    m = idx_set(m, perm.map(t + 1) - 1, idx_get(key.coeff, t));
                val.add_key({key.weil, key.wedge, m}, coef * c);
            }
        }
        out.set_value(I, std::move(val));
    }
    return out;
}

CochainHom project_harmonic(const CochainHom& h, const Filling& A) {
    CochainHom mid = project_schur(h, A);
    TensorSpace space = h.info().V.tensor_space();
    CochainHom out(h.info(), h.j(), h.r(), h.k());
    for (PackedIdx I : mid.index_set()) {
        Cochain val(h.info(), h.j(), h.r(), h.k());
        for (const auto& [key, coef] : mid.value(I).terms()) {
            SparseTensor basis(space, h.k());
            basis.add_term(key.coeff, Scalar::one());
            SparseTensor ht = multitensor::harmonic_project(basis);
            for (const auto& [idx, c] : ht.terms())
                val.add_key({key.weil, key.wedge, idx}, coef * c);
        }
        out.set_value(I, std::move(val));
    }
    return out;
}

Cochain rel_differential(const Cochain& c) {
    if (c.info().kind != ComplexInfo::Kind::CV || c.info().model != WeilModel::Schrodinger)
        throw std::invalid_argument("rel_differential: Schrodinger-model C_V cochains only");
    const QuadSpace& V = c.info().V;
    Cochain out(c.info(), c.j(), c.r() + 1, c.k());
    for (int alpha = 1; alpha <= V.p; ++alpha)
        for (int mu = V.p + 1; mu <= V.m(); ++mu) {
            LieElement X(V);
            X.add_term(alpha, mu, Scalar::one());
            CotangentLabel w = CotangentLabel::omega(alpha, mu);
            for (const auto& [key, coef] : c.terms()) {
                std::vector<CotangentLabel> wedge;
                wedge.push_back(w);
                wedge.insert(wedge.end(), key.wedge.begin(), key.wedge.end());
                // Weil-slot action.
                weil::GaussPoly g(V.m(), c.info().n);
                g.poly().add_term(key.weil, coef);
                weil::GaussPoly acted = weil::lie_act(V, X, g);
                for (const auto& [e, d] : acted.poly().terms()) out.add_term(e, wedge, key.coeff, d);
                // Coefficient-slot action.
                SparseTensor basis(V.tensor_space(), c.k());
                basis.add_term(key.coeff, coef);
                SparseTensor acted_t = X.act_tensor(basis);
                for (const auto& [idx, d] : acted_t.terms()) out.add_term(key.weil, wedge, idx, d);
            }
        }
    return out;
}

CochainHom rel_differential(const CochainHom& h) {
    CochainHom out(h.info(), h.j(), h.r() + 1, h.k());
    for (PackedIdx I : h.index_set()) out.set_value(I, rel_differential(h.value(I)));
    return out;
}

Cochain k_action(const LieElement& X, const Cochain& c) {
    const QuadSpace& V = c.info().V;
    Cochain out(c.info(), c.j(), c.r(), c.k());
    std::vector<LieElement> pb = liegeom::p_basis(V);
    for (const auto& [key, coef] : c.terms()) {
        // Weil slot.
        weil::GaussPoly g(V.m(), c.info().n);
        g.poly().add_term(key.weil, coef);
        weil::GaussPoly acted = weil::lie_act(V, X, g);
        for (const auto& [e, d] : acted.poly().terms()) out.add_term(e, key.wedge, key.coeff, d);
        // Coefficient slot.
        SparseTensor basis(V.tensor_space(), c.k());
        basis.add_term(key.coeff, coef);
        SparseTensor acted_t = X.act_tensor(basis);
        for (const auto& [idx, d] : acted_t.terms()) out.add_term(key.weil, key.wedge, idx, d);
        // Wedge slot: ad*(X) omega^c = sum_b omega^c([X_b, X]) omega^b, per slot.
        for (size_t s = 0; s < key.wedge.size(); ++s) {
            const CotangentLabel& lab = key.wedge[s];
            if (lab.kind != CotangentLabel::Kind::Omega)
                throw std::invalid_argument("k_action: p*-labels expected");
            for (const auto& Xb : pb) {
                LieElement br = liegeom::bracket(Xb, X);
                auto it = br.terms().find(std::make_pair(lab.a, lab.b));
                if (it == br.terms().end()) continue;
                auto [ba, bmu] = Xb.terms().begin()->first;
                std::vector<CotangentLabel> wedge = key.wedge;
                wedge[s] = CotangentLabel::omega(ba, bmu);
                out.add_term(key.weil, std::move(wedge), key.coeff, coef * it->second);
            }
        }
    }
    return out;
}

Cochain tau(const ParabolicData& P, int n, const SparseTensor& w, const SparseTensor& wbar) {
    int ell = P.ell;
    int r = n * ell;
    if (w.degree() != r) throw std::invalid_argument("tau: w must have degree n*ell");
    QuadSpace W = P.W();
    ComplexInfo info = ComplexInfo::nil(P.V, ell);
    Cochain out(info, 0, r, wbar.degree());
    for (const auto& [widx, wc] : w.terms()) {
        std::vector<CotangentLabel> wedge;
        wedge.reserve(r);
        for (int s = 0; s < r; ++s) {
            int eprime = (s % ell) + 1;  // u'_1 .. u'_ell repeating per block
            wedge.push_back(CotangentLabel::nu(P.w_to_v(idx_get(widx, s)), eprime));
        }
        for (const auto& [bidx, bc] : wbar.terms()) {
            PackedIdx coeff = 0;
            int sgn = 1;
            // The coefficient slot is embedded through the bilinear form
            // (e_b is lowered to eps_b e_b); the cocycle property needs this.
            for (int t = 0; t < wbar.degree(); ++t) {
                int b = idx_get(bidx, t);
                sgn *= W.eps(b);
                coeff = idx_set(coeff, t, P.w_to_v(b));
            }
            out.add_term({}, wedge, coeff, wc * bc * Scalar::integer(sgn));
        }
    }
    return out;
}

namespace {

struct NilContext {
    std::vector<LieElement> basis;
    std::vector<CotangentLabel> duals;
    std::vector<LieElement> dual_elems;
    // bracket_pair[c][b][i] = <dual_c, [X_b, X_i]>.
    std::vector<std::vector<std::vector<Scalar>>> bracket_pair;
};

NilContext make_nil_context(const ParabolicData& P) {
    NilContext ctx;
    ctx.basis = liegeom::n_basis(P);
    ctx.duals = liegeom::n_dual_labels(P);
    for (const auto& lab : ctx.duals) ctx.dual_elems.push_back(liegeom::dual_element(lab, P));
    size_t N = ctx.basis.size();
    ctx.bracket_pair.assign(
        N, std::vector<std::vector<Scalar>>(N, std::vector<Scalar>(N, Scalar::zero())));
    for (size_t b = 0; b < N; ++b)
        for (size_t i = 0; i < N; ++i) {
            LieElement br = liegeom::bracket(ctx.basis[b], ctx.basis[i]);
            for (size_t c = 0; c < N; ++c)
                ctx.bracket_pair[c][b][i] = liegeom::lambda2_pairing(ctx.dual_elems[c], br);
        }
    return ctx;
}

int dual_index(const NilContext& ctx, const CotangentLabel& lab) {
    for (size_t i = 0; i < ctx.duals.size(); ++i)
        if (ctx.duals[i] == lab) return static_cast<int>(i);
    throw std::invalid_argument("nilpotent complex: unknown label " + lab.str());
}

}  // namespace

Cochain nilpotent_differential(const Cochain& c) {
    if (c.info().kind != ComplexInfo::Kind::Nil)
        throw std::invalid_argument("nilpotent_differential: nilpotent-complex cochains only");
    ParabolicData P(c.info().V, c.info().ell);
    NilContext ctx = make_nil_context(P);
    const QuadSpace& V = P.V;
    Cochain out(c.info(), 0, c.r() + 1, c.k());
    size_t N = ctx.basis.size();
    for (size_t i = 0; i < N; ++i) {
        const CotangentLabel& li = ctx.duals[i];
        for (const auto& [key, coef] : c.terms()) {
            // A(xi^i) (x) pi(X_i) on the coefficients.
            SparseTensor basis_t(V.tensor_space(), c.k());
            basis_t.add_term(key.coeff, coef);
            SparseTensor acted = ctx.basis[i].act_tensor(basis_t);
            std::vector<CotangentLabel> wedge;
            wedge.push_back(li);
            wedge.insert(wedge.end(), key.wedge.begin(), key.wedge.end());
            for (const auto& [idx, d] : acted.terms()) out.add_term({}, wedge, idx, d);
            // (1/2) A(xi^i) ad*(X_i) on the wedge slot.
            for (size_t s = 0; s < key.wedge.size(); ++s) {
                int cidx = dual_index(ctx, key.wedge[s]);
                for (size_t b = 0; b < N; ++b) {
                    const Scalar& pairv = ctx.bracket_pair[cidx][b][i];
                    if (pairv.is_zero()) continue;
                    std::vector<CotangentLabel> w2 = wedge;
                    w2[1 + s] = ctx.duals[b];
                    out.add_term({}, std::move(w2), key.coeff,
                                 coef * pairv * Scalar::rational(Rational(1, 2)));
                }
            }
        }
    }
    return out;
}

namespace {

/// Descending per-block E'-order used by the face forms.
std::vector<CotangentLabel> nu_block_labels_desc(const ParabolicData& P, PackedIdx widx, int n) {
    int ell = P.ell;
    std::vector<CotangentLabel> wedge;
    wedge.reserve(n * ell);
    for (int s = 0; s < n * ell; ++s) {
        int eprime = ell - (s % ell);  // u'_ell .. u'_1 per block
        wedge.push_back(CotangentLabel::nu(P.w_to_v(idx_get(widx, s)), eprime));
    }
    return wedge;
}

CotangentLabel omega_w_to_v(const CotangentLabel& lab, const ParabolicData& P) {
    if (lab.kind != CotangentLabel::Kind::Omega)
        throw std::invalid_argument("omega_w_to_v: omega labels expected");
    return CotangentLabel::omega(lab.a + P.ell, lab.b + P.ell);
}

}  // namespace

Cochain embed_cw_in_ap(const Cochain& c, const ParabolicData& P) {
    QuadSpace W = P.W();
    if (!(c.info().kind == ComplexInfo::Kind::CV && c.info().V == W))
        throw std::invalid_argument("embed_cw_in_ap: expected a C_W cochain");
    ComplexInfo info = ComplexInfo::ap(P.V, c.info().n, P.ell, c.info().model);
    Cochain out(info, c.j(), c.r(), c.k());
    for (const auto& [key, coef] : c.terms()) {
        std::vector<CotangentLabel> wedge;
        for (const auto& lab : key.wedge) wedge.push_back(omega_w_to_v(lab, P));
        PackedIdx coeff = 0;
        for (int t = 0; t < c.k(); ++t) coeff = idx_set(coeff, t, P.w_to_v(idx_get(key.coeff, t)));
        out.add_term(key.weil, std::move(wedge), coeff, coef);
    }
    return out;
}

CochainHom embed_cw_in_ap(const CochainHom& h, const ParabolicData& P) {
    ComplexInfo info = ComplexInfo::ap(P.V, h.info().n, P.ell, h.info().model);
    CochainHom out(info, h.j(), h.r(), h.k());
    for (PackedIdx I : h.index_set()) out.set_value(I, embed_cw_in_ap(h.value(I), P));
    return out;
}

CochainHom iota_P(const CochainHom& h, const ParabolicData& P) {
    QuadSpace W = P.W();
    if (!(h.info().kind == ComplexInfo::Kind::CV && h.info().V == W))
        throw std::invalid_argument("iota_P: expected a C_W cochain");
    int n = h.info().n;
    int nl = n * P.ell;
    ComplexInfo out_info = ComplexInfo::ap(P.V, n, P.ell, h.info().model);
    if (h.k() < nl) return CochainHom(out_info, h.j() + P.ell, h.r() + nl, 0);
    int kout = h.k() - nl;
    CochainHom out(out_info, h.j() + P.ell, h.r() + nl, kout);
    // Sign (-1)^{n ell ((q - ell)(n - 1)/2 + 1)}: the half applies to the whole
    // product n ell (q - ell)(n - 1), which is always even.
    long long expo =
        (static_cast<long long>(nl) * W.q * (n - 1)) / 2 + nl;
    Scalar sign = Scalar::integer(expo % 2 == 0 ? 1 : -1);
    tableaux::Filling B = tableaux::Filling::rectangle(n, P.ell);
    std::vector<int> labels;
    for (int row = 1; row <= n; ++row)
        for (int t = 0; t < P.ell; ++t) labels.push_back(row);
    SparseTensor sBepsB = multitensor::apply_group_element(
        tableaux::symmetrizer(B), SparseTensor::basis(TensorSpace::cn(n), labels));

    for (PackedIdx I2 : out.index_set()) {
        Cochain val(out_info, out.j(), out.r(), kout);
        for (const auto& [I1, c1] : sBepsB.terms()) {
            const Cochain& v = h.value(idx_concat(I1, nl, I2));
            for (const auto& [key, coef] : v.terms()) {
                PackedIdx w1 = idx_slice(key.coeff, 0, nl);
                PackedIdx w2 = idx_slice(key.coeff, nl, kout);
                std::vector<CotangentLabel> wedge;
                for (const auto& lab : key.wedge) wedge.push_back(omega_w_to_v(lab, P));
                std::vector<CotangentLabel> nus = nu_block_labels_desc(P, w1, n);
                wedge.insert(wedge.end(), nus.begin(), nus.end());
                PackedIdx coeff = 0;
                for (int t = 0; t < kout; ++t) coeff = idx_set(coeff, t, P.w_to_v(idx_get(w2, t)));
                val.add_term(key.weil, std::move(wedge), coeff, sign * c1 * coef);
            }
        }
        out.set_value(I2, std::move(val));
    }
    return out;
}

Cochain phi_P_nl(const ParabolicData& P, int n) {
    int ell = P.ell, p = P.V.p;
    int nl = n * ell;
    ComplexInfo info = ComplexInfo::ap(P.V, n, ell, WeilModel::Fock);
    Cochain out(info, ell, nl, 0);
    Scalar pref = Scalar::sqrt2_pow(-2 * nl) * Scalar::two_pi_i_pow(-nl);
    for_range_tuples(nl, ell + 1, p, [&](const std::vector<int>& gamma) {
        std::vector<uint8_t> weil(P.wdim() * n, 0);
        std::vector<CotangentLabel> wedge;
        wedge.reserve(nl);
        for (int j = 0; j < n; ++j)
            for (int t = 0; t < ell; ++t) {
                int g = gamma[j * ell + t];
                ++weil[info.weil_var(P.v_to_w(g), j + 1)];
                wedge.push_back(CotangentLabel::nu(g, ell - t));
            }
        out.add_term(std::move(weil), std::move(wedge), 0, pref);
    });
    return out;
}

CochainHom restrict_rP(const CochainHom& h, const ParabolicData& P) {
    if (h.info().model != WeilModel::Fock)
        throw std::invalid_argument("restrict_rP: Fock model only");
    if (!(h.info().kind == ComplexInfo::Kind::CV && h.info().V == P.V))
        throw std::invalid_argument("restrict_rP: C_V cochains over the ambient space only");
    int n = h.info().n, m = P.V.m(), ell = P.ell;
    ComplexInfo out_info = ComplexInfo::ap(P.V, n, ell, WeilModel::Fock);
    CochainHom out(out_info, h.j(), h.r(), h.k());
    for (PackedIdx I : h.index_set()) {
        Cochain val(out_info, h.j(), h.r(), h.k());
        for (const auto& [key, coef] : h.value(I).terms()) {
            // Weil slot: drop z-rows <= ell, relabel the middle rows over W.
            bool drop = false;
            for (int r = 1; r <= ell && !drop; ++r)
                for (int j = 1; j <= n; ++j)
                    if (key.weil[h.info().weil_var(r, j)] != 0) drop = true;
            if (drop) continue;
            for (int r = m - ell + 1; r <= m; ++r)
                for (int j = 1; j <= n; ++j)
                    if (key.weil[h.info().weil_var(r, j)] != 0)
                        throw std::domain_error(
                            "restrict_rP: negative-index Fock variable in the discarded range");
            std::vector<uint8_t> weil(P.wdim() * n, 0);
            for (int r = ell + 1; r <= m - ell; ++r)
                for (int j = 1; j <= n; ++j)
                    weil[out_info.weil_var(P.v_to_w(r), j)] = key.weil[h.info().weil_var(r, j)];
            // Wedge slot: sigma* labelwise, iota* drops the a*/gl directions.
            std::vector<std::pair<std::vector<CotangentLabel>, Scalar>> expanded{{{}, coef}};
            for (const auto& lab : key.wedge) {
                auto imgs = liegeom::sigma_pullback(lab, P);
                std::vector<std::pair<std::vector<CotangentLabel>, Scalar>> next;
                for (auto& [labs, c] : expanded)
                    for (const auto& [ilab, ic] : imgs) {
                        if (ilab.kind == CotangentLabel::Kind::GL ||
                            ilab.kind == CotangentLabel::Kind::AStar)
                            continue;
                        auto labs2 = labs;
                        labs2.push_back(ilab);
                        next.emplace_back(std::move(labs2), c * ic);
                    }
                expanded = std::move(next);
                if (expanded.empty()) break;
            }
            for (auto& [labs, c] : expanded) val.add_term(weil, std::move(labs), key.coeff, c);
        }
        out.set_value(I, std::move(val));
    }
    return out;
}

namespace {

/// Echelonized span over uint64-keyed sparse vectors with coordinates.
class LinSpan {
  public:
    bool add(const std::map<uint64_t, Scalar>& v) {
        int gen = n_++;
        std::map<uint64_t, Scalar> r = v;
        std::map<int, Scalar> expr{{gen, Scalar::one()}};
        while (!r.empty()) {
            uint64_t pivot = r.begin()->first;
            auto it = rows_.find(pivot);
            if (it == rows_.end()) {
                Scalar inv = r.begin()->second.inv();
                Row row;
                for (auto& [k, c] : r) row.vec[k] = c * inv;
                for (auto& [g, c] : expr) row.expr[g] = c * inv;
                rows_.emplace(pivot, std::move(row));
                return true;
            }
            reduce(r, expr, it->second);
        }
        return false;
    }

    std::optional<std::vector<Scalar>> coordinates(const std::map<uint64_t, Scalar>& v) const {
        std::map<uint64_t, Scalar> r = v;
        std::map<int, Scalar> expr;
        std::vector<Scalar> out(n_, Scalar::zero());
        while (!r.empty()) {
            auto it = rows_.find(r.begin()->first);
            if (it == rows_.end()) return std::nullopt;
            Scalar coef = r.begin()->second;
            for (const auto& [k, c] : it->second.vec) {
                auto e = r.find(k);
                Scalar nv = (e == r.end() ? Scalar::zero() : e->second) - coef * c;
                if (nv.is_zero()) {
                    if (e != r.end()) r.erase(e);
                } else {
                    r[k] = nv;
                }
            }
            for (const auto& [g, c] : it->second.expr) out[g] += coef * c;
        }
        return out;
    }

  private:
    struct Row {
        std::map<uint64_t, Scalar> vec;
        std::map<int, Scalar> expr;
    };

    static void reduce(std::map<uint64_t, Scalar>& r, std::map<int, Scalar>& expr, const Row& row) {
        Scalar coef = r.begin()->second;
        for (const auto& [k, c] : row.vec) {
            auto e = r.find(k);
            Scalar nv = (e == r.end() ? Scalar::zero() : e->second) - coef * c;
            if (nv.is_zero()) {
                if (e != r.end()) r.erase(e);
            } else {
                r[k] = nv;
            }
        }
        for (const auto& [g, c] : row.expr) {
            auto e = expr.find(g);
            Scalar nv = (e == expr.end() ? Scalar::zero() : e->second) - coef * c;
            if (nv.is_zero()) {
                if (e != expr.end()) expr.erase(e);
            } else {
                expr[g] = nv;
            }
        }
    }

    std::map<uint64_t, Row> rows_;
    int n_ = 0;
};

uint64_t nil_key(const NilContext& ctx, const CochainKey& key) {
    uint64_t mask = 0;
    for (const auto& lab : key.wedge) mask |= uint64_t(1) << dual_index(ctx, lab);
    return (mask << 48) | key.coeff;
}

std::map<uint64_t, Scalar> nil_encode(const NilContext& ctx, const Cochain& c) {
    std::map<uint64_t, Scalar> out;
    for (const auto& [key, coef] : c.terms()) out[nil_key(ctx, key)] = coef;
    return out;
}

/// Coefficient-slot conjugation by the bilinear form (e_a -> eps_a e_a); the
/// tau-classes live in the form-twisted picture of the nilpotent complex.
Cochain flat_twist(const Cochain& c) {
    Cochain out(c.info(), c.j(), c.r(), c.k());
    const QuadSpace& V = c.info().V;
    for (const auto& [key, coef] : c.terms()) {
        int sgn = 1;
        for (int t = 0; t < c.k(); ++t) sgn *= V.eps(idx_get(key.coeff, t));
        out.add_key(key, coef * Scalar::integer(sgn));
    }
    return out;
}

/// Exactness of a nilpotent-complex element, by solving d x = c over the full
/// (r-1)-cochain space.
bool nilpotent_exact(const ParabolicData& P, const Cochain& c) {
    if (c.is_zero()) return true;
    NilContext ctx = make_nil_context(P);
    int r = c.r(), k = c.k();
    if (r == 0) return false;
    LinSpan span;
    int nd = static_cast<int>(ctx.duals.size());
    std::vector<int> subset;
    std::function<void(int, int)> rec = [&](int start, int remaining) {
        if (remaining == 0) {
            for (PackedIdx coeff : all_indices(P.V.m(), k)) {
                Cochain x(ComplexInfo::nil(P.V, P.ell), 0, r - 1, k);
                std::vector<CotangentLabel> wedge;
                for (int s : subset) wedge.push_back(ctx.duals[s]);
                x.add_term({}, wedge, coeff, Scalar::one());
                span.add(nil_encode(ctx, nilpotent_differential(x)));
            }
            return;
        }
        for (int s = start; s <= nd - remaining; ++s) {
            subset.push_back(s);
            rec(s + 1, remaining - 1);
            subset.pop_back();
        }
    };
    rec(0, r - 1);
    return span.coordinates(nil_encode(ctx, c)).has_value();
}

/// Splits an A_P cochain into blocks by (argument, Weil monomial, omega-part)
/// and checks each (nu/zq-part (x) coefficient) block for nilpotent exactness.
bool ap_difference_nilpotent_exact(const ParabolicData& P, const CochainHom& diff) {
    std::map<std::pair<std::vector<uint8_t>, std::vector<CotangentLabel>>, Cochain> blocks;
    ComplexInfo nil_info = ComplexInfo::nil(P.V, P.ell);
    for (PackedIdx I : diff.index_set()) {
        for (const auto& [key, coef] : diff.value(I).terms()) {
            std::vector<CotangentLabel> omega_part, nu_part;
            for (const auto& lab : key.wedge)
                (lab.kind == CotangentLabel::Kind::Omega ? omega_part : nu_part).push_back(lab);
            // Canonical label order keeps omega labels first, so the split
            // carries no sorting sign.
            std::vector<uint8_t> wk = key.weil;
            for (int t = 0; t < 8; ++t) wk.push_back(static_cast<uint8_t>((I >> (8 * t)) & 0xff));
            auto bk = std::make_pair(std::move(wk), std::move(omega_part));
            auto it = blocks.find(bk);
            if (it == blocks.end())
                it = blocks
                         .emplace(bk, Cochain(nil_info, 0, static_cast<int>(nu_part.size()),
                                              diff.k()))
                         .first;
            it->second.add_term({}, nu_part, key.coeff, coef);
        }
    }
    for (auto& [bk, block] : blocks)
        if (!nilpotent_exact(P, flat_twist(block))) return false;
    return true;
}

}  // namespace

RestrictionRecord verify_restriction_theorem(int p, int q, int n, int ell,
                                             const std::vector<int>& lambda) {
    RestrictionRecord rec;
    rec.p = p;
    rec.q = q;
    rec.n = n;
    rec.ell = ell;
    rec.lambda = lambda;
    tableaux::Partition shape(lambda);
    int ellp = shape.size();
    if (ell < 1 || ell > std::min(p, q) || n > p || n < 1 || shape.rows() > n) {
        rec.skipped = true;
        rec.skip_reason = "parameters out of range";
        return rec;
    }
    QuadSpace V{p, q};
    ParabolicData P(V, ell);
    QuadSpace W = P.W();
    int nl = n * ell;

    CochainHom phiV = phi_nq(V, n, ellp, WeilModel::Fock);
    CochainHom lhs = restrict_rP(phiV, P);

    bool w_form_defined = (n <= W.p);
    ComplexInfo ap_info = ComplexInfo::ap(V, n, ell, WeilModel::Fock);
    CochainHom rhs(ap_info, q, n * q, ellp);
    CochainHom phiW(ComplexInfo::cv(W, n, WeilModel::Fock), 0, 0, 0);
    if (w_form_defined) {
        phiW = phi_nq(W, n, nl + ellp, WeilModel::Fock);
        rhs = iota_P(phiW, P);
    }
    rec.level_ellp_equal = (lhs == rhs);
    rec.both_sides_zero = lhs.is_zero() && rhs.is_zero();
    if (!rec.level_ellp_equal) rec.witness = CochainHom::first_difference(lhs, rhs);

    if (ellp > 0) {
        tableaux::Filling A = tableaux::Filling::standard(shape);
        CochainHom lhsA = restrict_rP(project_schur(phiV, A), P);
        if (w_form_defined) {
            tableaux::Filling BA = tableaux::abut(tableaux::Filling::rectangle(n, ell), A);
            CochainHom rhsA = iota_P(project_schur(phiW, BA), P);
            rec.level_A_equal = (lhsA == rhsA);
            if (!rec.level_A_equal && rec.witness.empty())
                rec.witness = "A-level: " + CochainHom::first_difference(lhsA, rhsA);
        } else {
            rec.level_A_equal = lhsA.is_zero();
        }
    } else {
        rec.level_A_equal = rec.level_ellp_equal;
    }

    {
        tableaux::Filling A = tableaux::Filling::standard(shape);
        CochainHom lhsH = restrict_rP(ellp > 0 ? project_harmonic(phiV, A) : phiV, P);
        CochainHom diff = lhsH;
        if (w_form_defined) {
            tableaux::Filling BA = tableaux::abut(tableaux::Filling::rectangle(n, ell), A);
            CochainHom rhsH = iota_P(project_harmonic(phiW, BA), P);
            diff = lhsH - rhsH;
        }
        rec.level_harmonic_ok = ap_difference_nilpotent_exact(P, diff);
        if (!rec.level_harmonic_ok && rec.witness.empty())
            rec.witness = "harmonic-level difference is not nilpotent-exact";
    }
    return rec;
}

}  // namespace specialforms::cochain
