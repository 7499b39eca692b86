#include "specialforms/weil.hpp"

#include <algorithm>
#include <sstream>

namespace specialforms::weil {

namespace {

using ScalarMat = std::vector<std::vector<Scalar>>;

ScalarMat identity_mat(int n) {
    ScalarMat m(n, std::vector<Scalar>(n, Scalar::zero()));
    for (int i = 0; i < n; ++i) m[i][i] = Scalar::one();
    return m;
}

ScalarMat zero_mat(int n) { return ScalarMat(n, std::vector<Scalar>(n, Scalar::zero())); }

ScalarMat mat_mul(const ScalarMat& a, const ScalarMat& b) {
    size_t n = a.size(), k = b.size(), m = b[0].size();
    ScalarMat r(n, std::vector<Scalar>(m, Scalar::zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

ScalarMat mat_inverse(ScalarMat a) {
    int n = static_cast<int>(a.size());
    ScalarMat inv = identity_mat(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::domain_error("mat_inverse: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Scalar d = a[col][col].inv();
        for (int j = 0; j < n; ++j) {
            a[col][j] *= d;
            inv[col][j] *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Scalar f = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Scalar mat_det(ScalarMat a) {
    int n = static_cast<int>(a.size());
    Scalar det = Scalar::one();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return Scalar::zero();
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        Scalar d = a[col][col].inv();
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            Scalar f = a[r][col] * d;
            for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

}  // namespace

VarPoly VarPoly::constant(int nvars, const Scalar& c) {
    VarPoly p(nvars);
    p.add_term(std::vector<uint8_t>(nvars, 0), c);
    return p;
}

void VarPoly::add_term(const std::vector<uint8_t>& exp, const Scalar& c) {
    if (static_cast<int>(exp.size()) != nvars_)
        throw std::invalid_argument("VarPoly: exponent size mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
        terms_.emplace(exp, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

VarPoly VarPoly::operator+(const VarPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("VarPoly: nvars mismatch");
    VarPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

VarPoly VarPoly::operator-(const VarPoly& o) const { return *this + o.scaled(Scalar::integer(-1)); }

VarPoly VarPoly::operator*(const VarPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("VarPoly: nvars mismatch");
    VarPoly r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            std::vector<uint8_t> e(nvars_);
            for (int v = 0; v < nvars_; ++v) e[v] = static_cast<uint8_t>(e1[v] + e2[v]);
            r.add_term(e, c1 * c2);
        }
    return r;
}

VarPoly VarPoly::scaled(const Scalar& c) const {
    VarPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, d] : terms_) r.terms_.emplace(e, c * d);
    return r;
}

VarPoly VarPoly::mul_var(int v, int power) const {
    VarPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        std::vector<uint8_t> e2 = e;
        e2[v] = static_cast<uint8_t>(e2[v] + power);
        r.terms_.emplace(e2, c);
    }
    return r;
}

VarPoly VarPoly::ddx(int v) const {
    VarPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[v] == 0) continue;
        std::vector<uint8_t> e2 = e;
        e2[v] -= 1;
        r.add_term(e2, c * Scalar::integer(e[v]));
    }
    return r;
}

VarPoly VarPoly::substituted(const std::vector<std::vector<Scalar>>& S, int new_nvars) const {
    if (static_cast<int>(S.size()) != nvars_)
        throw std::invalid_argument("VarPoly::substituted: matrix shape mismatch");
    std::vector<VarPoly> forms;
    forms.reserve(nvars_);
    for (int v = 0; v < nvars_; ++v) {
        VarPoly f(new_nvars);
        for (int u = 0; u < new_nvars; ++u) {
            if (S[v][u].is_zero()) continue;
            std::vector<uint8_t> e(new_nvars, 0);
            e[u] = 1;
            f.add_term(e, S[v][u]);
        }
        forms.push_back(std::move(f));
    }
    VarPoly out(new_nvars);
    for (const auto& [e, c] : terms_) {
        VarPoly t = VarPoly::constant(new_nvars, c);
        for (int v = 0; v < nvars_; ++v)
            for (int rep = 0; rep < e[v]; ++rep) t = t * forms[v];
        out = out + t;
    }
    return out;
}

int VarPoly::total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (uint8_t v : e) t += v;
        d = std::max(d, t);
    }
    return d;
}

std::complex<double> VarPoly::eval(const std::vector<std::complex<double>>& x) const {
    std::complex<double> s(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = c.eval();
        for (int v = 0; v < nvars_; ++v)
            for (int rep = 0; rep < e[v]; ++rep) t *= x[v];
        s += t;
    }
    return s;
}

double VarPoly::coeff_bound(double r) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        int deg = 0;
        for (uint8_t v : e) deg += v;
        s += std::abs(c.eval()) * std::pow(std::max(r, 1.0), deg);
    }
    return s;
}

std::string VarPoly::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (int v = 0; v < nvars_; ++v) {
            if (e[v] == 0) continue;
            os << "*" << var_names[v];
            if (e[v] > 1) os << "^" << static_cast<int>(e[v]);
        }
    }
    return os.str();
}

GaussPoly GaussPoly::gaussian(int rows, int cols) {
    return GaussPoly(rows, cols, VarPoly::constant(rows * cols, Scalar::one()));
}

GaussPoly GaussPoly::operator+(const GaussPoly& o) const {
    return GaussPoly(rows_, cols_, poly_ + o.poly_);
}
GaussPoly GaussPoly::operator-(const GaussPoly& o) const {
    return GaussPoly(rows_, cols_, poly_ - o.poly_);
}
GaussPoly GaussPoly::operator*(const GaussPoly& o) const {
    return GaussPoly(rows_, cols_, poly_ * o.poly_);
}
GaussPoly GaussPoly::scaled(const Scalar& c) const {
    return GaussPoly(rows_, cols_, poly_.scaled(c));
}
bool GaussPoly::operator==(const GaussPoly& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && poly_ == o.poly_;
}

std::string GaussPoly::str() const {
    std::vector<std::string> names;
    for (int r = 1; r <= rows_; ++r)
        for (int j = 1; j <= cols_; ++j)
            names.push_back("x[" + std::to_string(r) + "," + std::to_string(j) + "]");
    return poly_.str(names) + " * gauss";
}

GaussPoly raise(const GaussPoly& phi, int r, int j) {
    // H_{rj}(p phi_0) = (2 x_{rj} p - (1/2pi) dp/dx_{rj}) phi_0.
    int v = phi.var(r, j);
    VarPoly out = phi.poly().mul_var(v).scaled(Scalar::integer(2)) -
                  phi.poly().ddx(v).scaled(Scalar::rational(Rational(1, 2)) * Scalar::pi_pow(-1));
    return GaussPoly(phi.rows(), phi.cols(), std::move(out));
}

GaussPoly hermite(int k) {
    GaussPoly h = GaussPoly::gaussian(1, 1);
    for (int i = 0; i < k; ++i) h = raise(h, 1, 1);
    return h;
}

int DeltaMatrix::total() const {
    int t = 0;
    for (int v : d) t += v;
    return t;
}

bool DeltaMatrix::double_primed_zero(int ell) const {
    for (int r = 1; r <= rows; ++r) {
        if (r > ell && r <= rows - ell) continue;
        for (int j = 1; j <= cols; ++j)
            if (at(r, j) != 0) return false;
    }
    return true;
}

GaussPoly phi_delta(const DeltaMatrix& delta) {
    GaussPoly out = GaussPoly::gaussian(delta.rows, delta.cols);
    for (int r = 1; r <= delta.rows; ++r)
        for (int j = 1; j <= delta.cols; ++j)
            for (int rep = 0; rep < delta.at(r, j); ++rep) out = raise(out, r, j);
    return out;
}

namespace {

/// FT in one designated variable against the standard Gaussian in that
/// variable: y^k -> T_k with T_0 = 1, T_k = (i/2pi)(d/dxi - 2 pi xi) T_{k-1}.
VarPoly ft_one_var(const VarPoly& p, int v) {
    int maxdeg = 0;
    for (const auto& [e, c] : p.terms()) maxdeg = std::max<int>(maxdeg, e[v]);
    std::vector<VarPoly> T;
    T.push_back(VarPoly::constant(p.nvars(), Scalar::one()));
    Scalar i_over_2pi = Scalar::i() * Scalar::rational(Rational(1, 2)) * Scalar::pi_pow(-1);
    for (int k = 1; k <= maxdeg; ++k) {
        const VarPoly& prev = T.back();
        T.push_back((prev.ddx(v) - prev.mul_var(v).scaled(Scalar::integer(2) * Scalar::pi_pow(1)))
                        .scaled(i_over_2pi));
    }
    VarPoly out(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        std::vector<uint8_t> rest = e;
        int k = rest[v];
        rest[v] = 0;
        VarPoly base(p.nvars());
        base.add_term(rest, c);
        out = out + base * T[k];
    }
    return out;
}

}  // namespace

GaussPoly fourier_1d(const GaussPoly& f) {
    if (f.rows() != 1 || f.cols() != 1)
        throw std::invalid_argument("fourier_1d: expected a one-variable Gauss polynomial");
    return GaussPoly(1, 1, ft_one_var(f.poly(), 0));
}

GaussPoly lie_act(const QuadSpace& V, const LieElement& X, const GaussPoly& phi) {
    if (phi.rows() != V.m()) throw std::invalid_argument("lie_act: row count != dim V");
    // (X phi)(x) = -sum_{r,j} (X x_j)_r d/dx_{rj}, applied through the Gaussian.
    VarPoly out(phi.rows() * phi.cols());
    Scalar two_pi = Scalar::integer(2) * Scalar::pi_pow(1);
    for (int s = 1; s <= V.m(); ++s) {
        liegeom::Vec img = X.act(liegeom::basis_vec(V, s));
        for (const auto& [idx, m_rs] : img.terms()) {
            int r = multitensor::idx_get(idx, 0);
            for (int j = 1; j <= phi.cols(); ++j) {
                int vr = phi.var(r, j), vs = phi.var(s, j);
                out = out + phi.poly().ddx(vr).mul_var(vs).scaled(-m_rs);
                out = out + phi.poly().mul_var(vr).mul_var(vs).scaled(two_pi * m_rs);
            }
        }
    }
    return GaussPoly(phi.rows(), phi.cols(), std::move(out));
}

FockPoly FockPoly::one(int rows, int cols, int p) {
    return FockPoly(rows, cols, p, VarPoly::constant(rows * cols, Scalar::one()));
}

FockPoly FockPoly::operator+(const FockPoly& o) const {
    return FockPoly(rows_, cols_, p_, poly_ + o.poly_);
}
FockPoly FockPoly::operator*(const FockPoly& o) const {
    return FockPoly(rows_, cols_, p_, poly_ * o.poly_);
}
FockPoly FockPoly::scaled(const Scalar& c) const {
    return FockPoly(rows_, cols_, p_, poly_.scaled(c));
}
bool FockPoly::operator==(const FockPoly& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_ && poly_ == o.poly_;
}

std::string FockPoly::str() const {
    std::vector<std::string> names;
    for (int r = 1; r <= rows_; ++r)
        for (int j = 1; j <= cols_; ++j)
            names.push_back("z[" + std::to_string(r) + "," + std::to_string(j) + "]");
    return poly_.str(names);
}

FockPoly to_fock(const QuadSpace& V, const GaussPoly& phi) {
    if (phi.rows() != V.m()) throw std::invalid_argument("to_fock: row count != dim V");
    // Expand in the phi_Delta basis: the graded-lex leading term of phi_Delta
    // is 2^{|Delta|} x^Delta, so peeling leading terms terminates.
    VarPoly rest = phi.poly();
    FockPoly out(phi.rows(), phi.cols(), V.p);
    while (!rest.is_zero()) {
        auto lead = rest.terms().begin();
        int lead_deg = -1;
        for (auto it = rest.terms().begin(); it != rest.terms().end(); ++it) {
            int deg = 0;
            for (uint8_t v : it->first) deg += v;
            if (deg > lead_deg || (deg == lead_deg && it->first > lead->first)) {
                lead = it;
                lead_deg = deg;
            }
        }
        DeltaMatrix delta(phi.rows(), phi.cols());
        for (int r = 1; r <= phi.rows(); ++r)
            for (int j = 1; j <= phi.cols(); ++j) delta.at(r, j) = lead->first[phi.var(r, j)];
        Scalar coef = lead->second * Scalar::sqrt2_pow(-2 * delta.total());  // / 2^{|Delta|}
        rest = rest - phi_delta(delta).poly().scaled(coef);
        int neg = 0;
        for (int r = V.p + 1; r <= phi.rows(); ++r)
            for (int j = 1; j <= phi.cols(); ++j) neg += delta.at(r, j);
        std::vector<uint8_t> exp(phi.rows() * phi.cols(), 0);
        for (int r = 1; r <= phi.rows(); ++r)
            for (int j = 1; j <= phi.cols(); ++j)
                exp[phi.var(r, j)] = static_cast<uint8_t>(delta.at(r, j));
        Scalar c = coef * Scalar::two_pi_i_pow(-delta.total()) *
                   Scalar::integer(neg % 2 == 0 ? 1 : -1);
        out.poly().add_term(exp, c);
    }
    return out;
}

FockPoly fock_restrict(const FockPoly& phi, const ParabolicData& P) {
    int m = phi.rows(), n = phi.cols(), ell = P.ell;
    if (m != P.V.m() || phi.p() != P.V.p)
        throw std::invalid_argument("fock_restrict: space mismatch");
    FockPoly out(P.wdim(), n, P.W().p);
    for (const auto& [e, c] : phi.poly().terms()) {
        bool drop = false;
        for (int r = 1; r <= ell && !drop; ++r)
            for (int j = 1; j <= n; ++j)
                if (e[phi.var(r, j)] != 0) drop = true;
        if (drop) continue;
        for (int r = m - ell + 1; r <= m; ++r)
            for (int j = 1; j <= n; ++j)
                if (e[phi.var(r, j)] != 0)
                    throw std::domain_error(
                        "fock_restrict: negative-index variable in the discarded range");
        std::vector<uint8_t> e2(P.wdim() * n, 0);
        for (int r = ell + 1; r <= m - ell; ++r)
            for (int j = 1; j <= n; ++j) e2[out.var(P.v_to_w(r), j)] = e[phi.var(r, j)];
        out.poly().add_term(e2, c);
    }
    return out;
}

MixedGaussPoly::MixedGaussPoly(int ell, int wdim, int cols)
    : ell_(ell), wdim_(wdim), cols_(cols), poly_((2 * ell + wdim) * cols) {
    gauss_ = identity_mat(nvars());
    phase_ = zero_mat(nvars());
}

bool MixedGaussPoly::operator==(const MixedGaussPoly& o) const {
    return ell_ == o.ell_ && wdim_ == o.wdim_ && cols_ == o.cols_ && poly_ == o.poly_ &&
           gauss_ == o.gauss_ && phase_ == o.phase_;
}

MixedGaussPoly MixedGaussPoly::substituted(const std::vector<std::vector<Scalar>>& S) const {
    MixedGaussPoly r(ell_, wdim_, cols_);
    r.poly_ = poly_.substituted(S, nvars());
    int n = nvars();
    ScalarMat st(n, std::vector<Scalar>(n, Scalar::zero()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) st[i][j] = S[j][i];
    r.gauss_ = mat_mul(mat_mul(st, gauss_), S);
    r.phase_ = mat_mul(mat_mul(st, phase_), S);
    return r;
}

MixedGaussPoly MixedGaussPoly::scaled(const Scalar& c) const {
    MixedGaussPoly r = *this;
    r.poly_ = poly_.scaled(c);
    return r;
}

std::complex<double> MixedGaussPoly::eval(const std::vector<std::complex<double>>& x) const {
    std::complex<double> quad(0, 0), ph(0, 0);
    int n = nvars();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!gauss_[i][j].is_zero()) quad += gauss_[i][j].eval() * x[i] * x[j];
            if (!phase_[i][j].is_zero()) ph += phase_[i][j].eval() * x[i] * x[j];
        }
    static const double kPi = 3.14159265358979323846;
    std::complex<double> e = std::exp(-kPi * quad + std::complex<double>(0, 2 * kPi) * ph);
    return poly_.eval(x) * e;
}

std::string MixedGaussPoly::str() const {
    std::vector<std::string> names;
    for (int i = 1; i <= ell_; ++i)
        for (int j = 1; j <= cols_; ++j)
            names.push_back("xi[" + std::to_string(i) + "," + std::to_string(j) + "]");
    for (int a = 1; a <= wdim_; ++a)
        for (int j = 1; j <= cols_; ++j)
            names.push_back("w[" + std::to_string(a) + "," + std::to_string(j) + "]");
    for (int i = 1; i <= ell_; ++i)
        for (int j = 1; j <= cols_; ++j)
            names.push_back("u'[" + std::to_string(i) + "," + std::to_string(j) + "]");
    return poly_.str(names);
}

MixedGaussPoly to_mixed(const GaussPoly& phi, const ParabolicData& P) {
    int m = P.V.m(), n = phi.cols(), ell = P.ell;
    if (phi.rows() != m) throw std::invalid_argument("to_mixed: row count != dim V");
    MixedGaussPoly out(ell, P.wdim(), n);
    // Witt coordinates: x_r = (yu_r + yu'_r)/sqrt2, x_{m+1-r} = (yu_r - yu'_r)/sqrt2
    // for r <= ell; the yu block sits where xi lives after the transform.
    std::vector<std::vector<Scalar>> S(m * n, std::vector<Scalar>(out.nvars(), Scalar::zero()));
    Scalar h = Scalar::sqrt2_pow(-1);
    for (int j = 1; j <= n; ++j) {
        for (int r = 1; r <= ell; ++r) {
            S[phi.var(r, j)][out.var_xi(r, j)] = h;
            S[phi.var(r, j)][out.var_up(r, j)] = h;
            S[phi.var(m + 1 - r, j)][out.var_xi(r, j)] = h;
            S[phi.var(m + 1 - r, j)][out.var_up(r, j)] = -h;
        }
        for (int r = ell + 1; r <= m - ell; ++r)
            S[phi.var(r, j)][out.var_w(P.v_to_w(r), j)] = Scalar::one();
    }
    VarPoly p = phi.poly().substituted(S, out.nvars());
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= n; ++j) p = ft_one_var(p, out.var_xi(i, j));
    out.poly() = std::move(p);
    return out;
}

GaussPoly mixed_restrict(const MixedGaussPoly& mx) {
    int n = mx.cols(), wdim = mx.wdim();
    for (int i = 0; i < mx.nvars(); ++i)
        for (int j = 0; j < mx.nvars(); ++j) {
            Scalar expect = (i == j) ? Scalar::one() : Scalar::zero();
            if (mx.gauss()[i][j] != expect)
                throw std::domain_error("mixed_restrict: non-standard Gaussian");
            if (!mx.phase()[i][j].is_zero())
                throw std::domain_error("mixed_restrict: residual phase");
        }
    GaussPoly out(wdim, n);
    for (const auto& [e, c] : mx.poly().terms()) {
        bool keep = true;
        for (int i = 1; i <= mx.ell() && keep; ++i)
            for (int j = 1; j <= n; ++j)
                if (e[mx.var_xi(i, j)] != 0 || e[mx.var_up(i, j)] != 0) keep = false;
        if (!keep) continue;
        std::vector<uint8_t> e2(wdim * n, 0);
        for (int a = 1; a <= wdim; ++a)
            for (int j = 1; j <= n; ++j) e2[out.var(a, j)] = e[mx.var_w(a, j)];
        out.poly().add_term(e2, c);
    }
    return out;
}

GaussPoly weil_restrict(const GaussPoly& phi, const ParabolicData& P) {
    return mixed_restrict(to_mixed(phi, P));
}

MixedGroupElement MixedGroupElement::nq(std::vector<std::vector<Scalar>> w) {
    return {Kind::NQ, std::move(w), {}, {}};
}
MixedGroupElement MixedGroupElement::sle(std::vector<std::vector<Scalar>> g) {
    return {Kind::SLE, {}, std::move(g), {}};
}
MixedGroupElement MixedGroupElement::torus(std::vector<Rational> t) {
    return {Kind::Torus, {}, {}, std::move(t)};
}
MixedGroupElement MixedGroupElement::sow(std::vector<std::vector<Scalar>> h) {
    return {Kind::SOW, {}, std::move(h), {}};
}
MixedGroupElement MixedGroupElement::mprime(std::vector<std::vector<Scalar>> a) {
    return {Kind::MPrime, {}, std::move(a), {}};
}
MixedGroupElement MixedGroupElement::nprime(std::vector<std::vector<Scalar>> b) {
    return {Kind::NPrime, {}, std::move(b), {}};
}

MixedGaussPoly mixed_action(const MixedGroupElement& g, const MixedGaussPoly& phi,
                            const ParabolicData& P) {
    int n = phi.cols(), ell = phi.ell(), wdim = phi.wdim();
    const QuadSpace W = P.W();
    switch (g.kind) {
        case MixedGroupElement::Kind::Torus: {
            if (static_cast<int>(g.t.size()) != ell)
                throw std::invalid_argument("mixed_action: torus size mismatch");
            ScalarMat S = identity_mat(phi.nvars());
            Rational absdet = 1;
            for (int i = 1; i <= ell; ++i) {
                Scalar ti = Scalar::rational(g.t[i - 1]);
                for (int j = 1; j <= n; ++j) {
                    S[phi.var_xi(i, j)][phi.var_xi(i, j)] = ti;
                    S[phi.var_up(i, j)][phi.var_up(i, j)] = ti;
                }
                absdet *= g.t[i - 1] < 0 ? -g.t[i - 1] : g.t[i - 1];
            }
            Rational pref = 1;
            for (int j = 0; j < n; ++j) pref *= absdet;
            return phi.substituted(S).scaled(Scalar::rational(pref));
        }
        case MixedGroupElement::Kind::SOW: {
            ScalarMat hinv = mat_inverse(g.mat);
            ScalarMat S = identity_mat(phi.nvars());
            for (int a = 1; a <= wdim; ++a)
                for (int b = 1; b <= wdim; ++b)
                    for (int j = 1; j <= n; ++j)
                        S[phi.var_w(a, j)][phi.var_w(b, j)] = hinv[a - 1][b - 1];
            return phi.substituted(S);
        }
        case MixedGroupElement::Kind::SLE: {
            // The embedded g acts on the u'-coordinates by (g^T)^{-1}.
            ScalarMat ginv = mat_inverse(g.mat);
            ScalarMat S = identity_mat(phi.nvars());
            for (int k = 1; k <= ell; ++k)
                for (int i = 1; i <= ell; ++i)
                    for (int j = 1; j <= n; ++j) {
                        S[phi.var_xi(k, j)][phi.var_xi(i, j)] = ginv[i - 1][k - 1];
                        S[phi.var_up(k, j)][phi.var_up(i, j)] = ginv[i - 1][k - 1];
                    }
            return phi.substituted(S);
        }
        case MixedGroupElement::Kind::MPrime: {
            Scalar det = mat_det(g.mat);
            int expo2 = P.V.m() - 2 * ell;  // exponent of sqrt(det a) in (det a)^{m/2-ell}
            Scalar pref = Scalar::one();
            if (expo2 % 2 == 0) {
                for (int i = 0; i < expo2 / 2; ++i) pref *= det;
            } else {
                Rational d = det.pi_free_part().a;
                BigInt num = numerator(d), den = denominator(d);
                BigInt sn = sqrt(num), sd = sqrt(den);
                if (sn * sn != num || sd * sd != den)
                    throw std::invalid_argument("mixed_action: m'(a) needs a square determinant");
                Scalar sqrt_det = Scalar::rational(Rational(sn, sd));
                for (int i = 0; i < expo2; ++i) pref *= sqrt_det;
            }
            ScalarMat ainv = mat_inverse(g.mat);
            ScalarMat S = identity_mat(phi.nvars());
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) {
                    // (xi a*)_{ij} = sum_k (a^{-1})_{jk} xi_{ik}; rows/columns mix over j.
                    for (int i = 1; i <= ell; ++i)
                        S[phi.var_xi(i, j)][phi.var_xi(i, k)] = ainv[j - 1][k - 1];
                    for (int a2 = 1; a2 <= wdim; ++a2)
                        S[phi.var_w(a2, j)][phi.var_w(a2, k)] = g.mat[k - 1][j - 1];
                    for (int i = 1; i <= ell; ++i)
                        S[phi.var_up(i, j)][phi.var_up(i, k)] = g.mat[k - 1][j - 1];
                }
            return phi.substituted(S).scaled(pref);
        }
        case MixedGroupElement::Kind::NPrime: {
            ScalarMat S = identity_mat(phi.nvars());
            for (int i = 1; i <= ell; ++i)
                for (int j = 1; j <= n; ++j)
                    for (int k = 1; k <= n; ++k)
                        S[phi.var_xi(i, j)][phi.var_up(i, k)] = -g.mat[k - 1][j - 1];
            MixedGaussPoly out = phi.substituted(S);
            // Phase e(tr(b (x_W,x_W))/2) with (x_W,x_W)_{jk} = sum_a eps^W_a w_aj w_ak.
            Scalar half = Scalar::rational(Rational(1, 2));
            for (int a = 1; a <= wdim; ++a) {
                Scalar eps = Scalar::integer(W.eps(a));
                for (int j = 1; j <= n; ++j)
                    for (int k = 1; k <= n; ++k)
                        out.phase()[out.var_w(a, j)][out.var_w(a, k)] +=
                            half * eps * g.mat[j - 1][k - 1];
            }
            return out;
        }
        case MixedGroupElement::Kind::NQ: {
            if (static_cast<int>(g.wvecs.size()) != ell)
                throw std::invalid_argument("mixed_action: N_Q needs ell W-vectors");
            const QuadSpace& V = P.V;
            auto vec_of = [&](const std::vector<Scalar>& coords) {
                liegeom::Vec v(V.tensor_space(), 1);
                for (int a = 1; a <= wdim; ++a)
                    v.add_term(multitensor::idx_of({P.w_to_v(a)}), coords[a - 1]);
                return v;
            };
            // n(w) = prod_i exp(n_{u_i}(w_i)); each factor is 1 + A + A^2/2 exactly.
            // The transform of omega(n) phi = phi(n^{-1} .) shifts the argument and
            // phase by the E/W parts of n^{-1}, so the inverse matrix is taken here.
            ScalarMat N = identity_mat(V.m());
            for (int i = ell; i >= 1; --i) {
                liegeom::LieElement X =
                    liegeom::LieElement::wedge(V, vec_of(g.wvecs[i - 1]), P.u(i));
                ScalarMat A = zero_mat(V.m());
                for (int s = 1; s <= V.m(); ++s) {
                    liegeom::Vec img = X.act(liegeom::basis_vec(V, s));
                    for (const auto& [idx, c] : img.terms())
                        A[multitensor::idx_get(idx, 0) - 1][s - 1] = -c;
                }
                ScalarMat A2 = mat_mul(A, A);
                ScalarMat E = identity_mat(V.m());
                Scalar half = Scalar::rational(Rational(1, 2));
                for (int r = 0; r < V.m(); ++r)
                    for (int s = 0; s < V.m(); ++s) E[r][s] += A[r][s] + half * A2[r][s];
                N = mat_mul(N, E);
            }
            auto apply_N = [&](const liegeom::Vec& v) {
                liegeom::Vec outv(V.tensor_space(), 1);
                for (const auto& [idx, c] : v.terms()) {
                    int s = multitensor::idx_get(idx, 0);
                    for (int r = 1; r <= V.m(); ++r)
                        if (!N[r - 1][s - 1].is_zero())
                            outv.add_term(multitensor::idx_of({r}), c * N[r - 1][s - 1]);
                }
                return outv;
            };
            std::vector<liegeom::Vec> Nup;
            for (int k = 1; k <= ell; ++k) Nup.push_back(apply_N(P.uprime(k)));
            // Argument shift x_W -> x_W + n(u')_W.
            ScalarMat S = identity_mat(phi.nvars());
            for (int a = 1; a <= wdim; ++a)
                for (int k = 1; k <= ell; ++k) {
                    Scalar c = Nup[k - 1].coeff(multitensor::idx_of({P.w_to_v(a)}));
                    if (c.is_zero()) continue;
                    for (int j = 1; j <= n; ++j) S[phi.var_w(a, j)][phi.var_up(k, j)] = c;
                }
            MixedGaussPoly out = phi.substituted(S);
            // Phase e(tr(n(x_W + u'), xi)): u_i-components pair with xi.
            Scalar half = Scalar::rational(Rational(1, 2));
            for (int i = 1; i <= ell; ++i) {
                for (int a = 1; a <= wdim; ++a) {
                    liegeom::Vec img = apply_N(liegeom::basis_vec(V, P.w_to_v(a)));
                    Scalar c = liegeom::form_pair(V, img, P.uprime(i));
                    if (c.is_zero()) continue;
                    for (int j = 1; j <= n; ++j) {
                        out.phase()[out.var_xi(i, j)][out.var_w(a, j)] += half * c;
                        out.phase()[out.var_w(a, j)][out.var_xi(i, j)] += half * c;
                    }
                }
                for (int k = 1; k <= ell; ++k) {
                    Scalar c = liegeom::form_pair(V, Nup[k - 1], P.uprime(i));
                    if (c.is_zero()) continue;
                    for (int j = 1; j <= n; ++j) {
                        out.phase()[out.var_xi(i, j)][out.var_up(k, j)] += half * c;
                        out.phase()[out.var_up(k, j)][out.var_xi(i, j)] += half * c;
                    }
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("mixed_action: unsupported group element");
}

}  // namespace specialforms::weil
