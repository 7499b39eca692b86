#include "specialforms/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specialforms::theta {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rat(const Rational& r) { return static_cast<double>(r); }

/// Gram-Schmidt data for a lattice basis (rows), in doubles.
struct GramSchmidt {
    int d;
    std::vector<std::vector<double>> b;      // basis rows
    std::vector<std::vector<double>> bstar;  // orthogonalized rows
    std::vector<std::vector<double>> mu;     // b_i = sum_{j<=i} mu[i][j] bstar_j
    std::vector<double> norm2;               // |bstar_j|^2

    explicit GramSchmidt(const std::vector<std::vector<Rational>>& basis) {
        d = static_cast<int>(basis.size());
        b.assign(d, std::vector<double>(d, 0.0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b[i][j] = rat(basis[i][j]);
        bstar = b;
        mu.assign(d, std::vector<double>(d, 0.0));
        norm2.assign(d, 0.0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < i; ++j) {
                double dot = 0;
                for (int t = 0; t < d; ++t) dot += b[i][t] * bstar[j][t];
                mu[i][j] = dot / norm2[j];
                for (int t = 0; t < d; ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
            }
            mu[i][i] = 1.0;
            for (int t = 0; t < d; ++t) norm2[i] += bstar[i][t] * bstar[i][t];
            if (norm2[i] <= 0) throw std::invalid_argument("lattice basis is singular");
        }
    }
};

/// Recursive radius enumeration (Fincke-Pohst style) of {k : |B^T k + h| <= R},
/// visiting integer coordinate vectors from the last level down.
/// The visit callback receives the point x = sum k_i b_i + h.
template <typename Visit>
void enumerate_level(const GramSchmidt& gs, const std::vector<double>& hstar, double R2, int level,
                     std::vector<long long>& k, double used, const Visit& visit) {
    if (level < 0) {
        visit(k);
        return;
    }
    // Center of the allowed k_level interval given the higher levels.
    double proj = hstar[level];
    for (int i = level + 1; i < gs.d; ++i) proj += k[i] * gs.mu[i][level];
    double budget = (R2 - used) / gs.norm2[level];
    if (budget < 0) budget = 0;
    double half = std::sqrt(budget) + 1e-9;
    long long lo = static_cast<long long>(std::ceil(-proj - half - 1e-9));
    long long hi = static_cast<long long>(std::floor(-proj + half + 1e-9));
    for (long long v = lo; v <= hi; ++v) {
        k[level] = v;
        double c = v + proj;
        double add = c * c * gs.norm2[level];
        if (add > R2 - used + 1e-9) continue;
        enumerate_level(gs, hstar, R2, level - 1, k, used + add, visit);
    }
    k[level] = 0;
}

std::vector<double> hstar_coords(const GramSchmidt& gs, const std::vector<Rational>& shift) {
    std::vector<double> h(gs.d, 0.0), hstar(gs.d, 0.0);
    for (int i = 0; i < gs.d; ++i) h[i] = rat(shift[i]);
    for (int j = 0; j < gs.d; ++j) {
        double dot = 0;
        for (int t = 0; t < gs.d; ++t) dot += h[t] * gs.bstar[j][t];
        hstar[j] = dot / gs.norm2[j];
    }
    return hstar;
}

std::vector<double> point_of(const GramSchmidt& gs, const std::vector<Rational>& shift,
                             const std::vector<long long>& k) {
    std::vector<double> x(gs.d, 0.0);
    for (int i = 0; i < gs.d; ++i) x[i] = rat(shift[i]);
    for (int i = 0; i < gs.d; ++i)
        for (int t = 0; t < gs.d; ++t) x[t] += k[i] * gs.b[i][t];
    return x;
}

double norm2_of(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

/// Packing radius: half the length of a shortest nonzero lattice vector.
double packing_radius(const std::vector<std::vector<Rational>>& basis) {
    GramSchmidt gs(basis);
    double probe = 1e100;
    for (int i = 0; i < gs.d; ++i) probe = std::min(probe, std::sqrt(norm2_of(gs.b[i])));
    std::vector<Rational> zero(gs.d, Rational(0));
    std::vector<double> hstar(gs.d, 0.0);
    double best2 = probe * probe;
    std::vector<long long> k(gs.d, 0);
    enumerate_level(gs, hstar, probe * probe * (1 + 1e-9), gs.d - 1, k,
                    0.0, [&](const std::vector<long long>& kk) {
                        bool zerok = true;
                        for (long long v : kk) zerok = zerok && v == 0;
                        if (zerok) return;
                        std::vector<double> x = point_of(gs, zero, kk);
                        best2 = std::min(best2, norm2_of(x));
                    });
    return std::sqrt(best2) / 2.0;
}

int poly_degree(const GaussPoly& phi) { return phi.poly().total_degree(); }

/// Certified bound for sum_{x in L+h, |x| > R} |p(x)| e^{-pi t |x|^2}:
/// per point |p| e^{-pi t |x|^2} <= f(|x|) e^{-s|x|^2} with s = pi t / 2 and
/// f(r) = B_p(r) e^{-s r^2} decreasing past sqrt(deg/(pi t)); the point count
/// is compared with the Gaussian integral over |y| >= R - rho using disjoint
/// packing balls.
double tail_bound(const GaussPoly& phi, double t, double R, const LatticeCoset& L, double rho) {
    int d = L.dim();
    if (d == 0) return 0.0;
    double s = kPi * t / 2.0;
    int deg = poly_degree(phi);
    double rmin = std::sqrt(std::max(1.0 * deg, 1.0) / (kPi * t));
    if (R < rmin || R < 2 * rho + 1e-6)
        throw std::domain_error("theta_eval: radius too small to certify the tail");
    double fR = phi.poly().coeff_bound(R) * std::exp(-s * R * R);
    double A = R - 2 * rho;
    // (d / rho^d) sum_j C(d-1,j) rho^{d-1-j} e^{-sA^2/2} (1/2) Gamma((j+1)/2) (2/s)^{(j+1)/2}
    double total = 0.0;
    double choose = 1.0;
    for (int j = 0; j <= d - 1; ++j) {
        if (j > 0) choose = choose * (d - j) / j;
        double gamma_half = std::tgamma((j + 1) / 2.0);
        total += choose * std::pow(rho, d - 1 - j) * 0.5 * gamma_half *
                 std::pow(2.0 / s, (j + 1) / 2.0);
    }
    total *= d / std::pow(rho, d) * std::exp(-s * A * A / 2.0);
    return fR * total * std::abs(rat(L.weight));
}

std::complex<double> eval_phi(const GaussPoly& phi, const std::vector<double>& x, double t) {
    std::vector<std::complex<double>> xc(x.begin(), x.end());
    return phi.poly().eval(xc) * std::exp(-kPi * t * norm2_of(x));
}

ThetaValue theta_eval_one(const LatticeCoset& L, const GaussPoly& phi, double t, double radius,
                          bool parallel) {
    ThetaValue out;
    int d = L.dim();
    double w = rat(L.weight);
    if (d == 0) {
        out.value = w * eval_phi(phi, {}, t);
        out.terms = 1;
        return out;
    }
    if (phi.rows() * phi.cols() != d)
        throw std::invalid_argument("theta_eval: variable count != lattice dimension");
    GramSchmidt gs(L.basis);
    std::vector<double> hstar = hstar_coords(gs, L.shift);
    double R2 = radius * radius * (1 + 3e-9);

    // Split on the outermost coordinate; each slice accumulates serially and
    // slices merge in a fixed order, so the sum is reproducible for any
    // thread count.
    double proj_top = hstar[d - 1];
    double half = radius / std::sqrt(gs.norm2[d - 1]) + 1e-9;
    long long lo = static_cast<long long>(std::ceil(-proj_top - half - 1e-9));
    long long hi = static_cast<long long>(std::floor(-proj_top + half + 1e-9));
    long long slices = hi - lo + 1;
    if (slices <= 0) return out;
    std::vector<std::complex<double>> partial(slices, {0.0, 0.0});
    std::vector<long long> counts(slices, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long long si = 0; si < slices; ++si) {
        long long ktop = lo + si;
        double c = ktop + proj_top;
        double used = c * c * gs.norm2[d - 1];
        if (used > R2 + 1e-9) continue;
        std::vector<long long> k(d, 0);
        k[d - 1] = ktop;
        std::complex<double> acc(0.0, 0.0);
        long long cnt = 0;
        enumerate_level(gs, hstar, R2, d - 2, k, used, [&](const std::vector<long long>& kk) {
            std::vector<double> x = point_of(gs, L.shift, kk);
            if (norm2_of(x) > R2 + 1e-9) return;
            acc += eval_phi(phi, x, t);
            ++cnt;
        });
        partial[si] = acc;
        counts[si] = cnt;
    }
    for (long long si = 0; si < slices; ++si) {
        out.value += partial[si];
        out.terms += counts[si];
    }
    out.value *= w;
    out.tail = tail_bound(phi, t, radius, L, packing_radius(L.basis));
    return out;
}

ThetaValue theta_eval_impl(const std::vector<LatticeCoset>& cosets, const GaussPoly& phi, double t,
                           double radius, std::optional<double> tolerance, bool parallel) {
    ThetaValue out;
    for (const auto& L : cosets) {
        ThetaValue v = theta_eval_one(L, phi, t, radius, parallel);
        out.value += v.value;
        out.tail += v.tail;
        out.terms += v.terms;
    }
    if (tolerance && out.tail > *tolerance)
        throw std::domain_error("theta_eval: radius too small to certify requested tolerance");
    return out;
}

}  // namespace

ThetaValue theta_eval(const std::vector<LatticeCoset>& cosets, const GaussPoly& phi, double t,
                      double radius, std::optional<double> tolerance) {
    return theta_eval_impl(cosets, phi, t, radius, tolerance, true);
}

ThetaValue theta_eval_serial(const std::vector<LatticeCoset>& cosets, const GaussPoly& phi,
                             double t, double radius, std::optional<double> tolerance) {
    // Reference path: plain box enumeration, no slicing.
    ThetaValue out;
    for (const auto& L : cosets) {
        int d = L.dim();
        double w = rat(L.weight);
        if (d == 0) {
            out.value += w * eval_phi(phi, {}, t);
            out.terms += 1;
            continue;
        }
        GramSchmidt gs(L.basis);
        std::vector<double> hstar = hstar_coords(gs, L.shift);
        double R2 = radius * radius * (1 + 3e-9);
        std::vector<long long> k(d, 0);
        std::complex<double> acc(0.0, 0.0);
        long long cnt = 0;
        enumerate_level(gs, hstar, R2, d - 1, k, 0.0, [&](const std::vector<long long>& kk) {
            std::vector<double> x = point_of(gs, L.shift, kk);
            if (norm2_of(x) > R2 + 1e-9) return;
            acc += eval_phi(phi, x, t);
            ++cnt;
        });
        out.value += w * acc;
        out.terms += cnt;
        out.tail += tail_bound(phi, t, radius, L, packing_radius(L.basis));
    }
    if (tolerance && out.tail > *tolerance)
        throw std::domain_error("theta_eval: radius too small to certify requested tolerance");
    return out;
}

namespace {

// ---- exact integer linear algebra (Smith normal form) ----

using IMat = std::vector<std::vector<BigInt>>;

IMat ident(int n) {
    IMat m(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

/// UAV = S with S diagonal (Smith normal form, no divisibility chain needed).
void smith(IMat A, int r, int c, IMat& U, IMat& S, IMat& V) {
    U = ident(r);
    V = ident(c);
    auto row_op = [&](IMat& M, int i, int j, const BigInt& f) {  // row_i -= f row_j
        for (auto t = 0u; t < M[i].size(); ++t) M[i][t] -= f * M[j][t];
    };
    auto col_op = [&](IMat& M, int i, int j, const BigInt& f) {  // col_i -= f col_j
        for (auto& row : M) row[i] -= f * row[j];
    };
    int k = 0;
    while (k < r && k < c) {
        // Find a nonzero pivot.
        int pi = -1, pj = -1;
        for (int i = k; i < r && pi < 0; ++i)
            for (int j = k; j < c; ++j)
                if (A[i][j] != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0) break;
        std::swap(A[pi], A[k]);
        std::swap(U[pi], U[k]);
        for (auto& row : A) std::swap(row[pj], row[k]);
        for (auto& row : V) std::swap(row[pj], row[k]);
        bool again = true;
        while (again) {
            again = false;
            for (int i = k + 1; i < r; ++i) {
                if (A[i][k] == 0) continue;
                BigInt f = A[i][k] / A[k][k];
                row_op(A, i, k, f);
                row_op(U, i, k, f);
                if (A[i][k] != 0) {  // remainder became the smaller pivot
                    std::swap(A[i], A[k]);
                    std::swap(U[i], U[k]);
                    again = true;
                }
            }
            for (int j = k + 1; j < c; ++j) {
                if (A[k][j] == 0) continue;
                BigInt f = A[k][j] / A[k][k];
                col_op(A, j, k, f);
                col_op(V, j, k, f);
                if (A[k][j] != 0) {
                    for (auto& row : A) std::swap(row[j], row[k]);
                    for (auto& row : V) std::swap(row[j], row[k]);
                    again = true;
                }
            }
        }
        ++k;
    }
    S = A;
}

std::vector<Rational> mat_apply(const std::vector<std::vector<Rational>>& rows,
                                const std::vector<Rational>& x) {
    std::vector<Rational> out(rows.size(), Rational(0));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) out[i] += rows[i][j] * x[j];
    return out;
}

Rational rational_det(std::vector<std::vector<Rational>> a) {
    int n = static_cast<int>(a.size());
    Rational det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r2 = col; r2 < n; ++r2)
            if (a[r2][col] != 0) {
                piv = r2;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r2 = col + 1; r2 < n; ++r2) {
            if (a[r2][col] == 0) continue;
            Rational f = a[r2][col] / a[col][col];
            for (int j = col; j < n; ++j) a[r2][j] -= f * a[col][j];
        }
    }
    return det;
}

}  // namespace

std::vector<LatticeCoset> hat_LW(const LatticeCoset& L, const ParabolicData& P, int n) {
    // Lattice data is given in Witt coordinates u_1..u_ell, W, u'_ell..u'_1.
    int m = P.V.m(), ell = P.ell, wdim = P.wdim();
    if (L.dim() != m) throw std::invalid_argument("hat_LW: dimension mismatch");
    int d = m;
    // Conditions (v, u_i) = 0: the u'_i-coordinate (position m-i) vanishes.
    // Solve for integer coefficient vectors k with sum k_j basis_j + shift in E^perp.
    BigInt den = 1;
    auto lcm_in = [&](const Rational& r) { den = lcm(den, BigInt(denominator(r))); };
    for (const auto& row : L.basis)
        for (const auto& v : row) lcm_in(v);
    for (const auto& v : L.shift) lcm_in(v);
    IMat M(ell, std::vector<BigInt>(d, 0));
    std::vector<BigInt> c(ell, 0);
    for (int i = 1; i <= ell; ++i) {
        for (int j = 0; j < d; ++j)
            M[i - 1][j] = numerator(Rational(L.basis[j][m - i] * den));
        c[i - 1] = -numerator(Rational(L.shift[m - i] * den));
    }
    IMat U, S, V;
    smith(M, ell, d, U, S, V);
    // Particular solution of M k = c.
    std::vector<BigInt> uc(ell, 0);
    for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j) uc[i] += U[i][j] * c[j];
    std::vector<BigInt> y(d, 0);
    int rank = 0;
    for (int i = 0; i < std::min(ell, d); ++i)
        if (S[i][i] != 0) ++rank;
    for (int i = 0; i < ell; ++i) {
        if (i < rank) {
            if (uc[i] % S[i][i] != 0) return {};  // empty intersection
            y[i] = uc[i] / S[i][i];
        } else if (uc[i] != 0) {
            return {};
        }
    }
    std::vector<BigInt> k0(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) k0[i] += V[i][j] * (j < static_cast<int>(y.size()) ? y[j] : 0);
    // Kernel basis: columns of V past the rank.
    std::vector<std::vector<BigInt>> kernel;
    for (int j = rank; j < d; ++j) {
        std::vector<BigInt> col(d);
        for (int i = 0; i < d; ++i) col[i] = V[i][j];
        kernel.push_back(col);
    }
    // Lattice vectors of L0 and the shifted base point, in Witt coordinates.
    auto vec_of_k = [&](const std::vector<BigInt>& k) {
        std::vector<Rational> v(d, Rational(0));
        for (int i = 0; i < d; ++i)
            for (int t = 0; t < d; ++t) v[t] += Rational(k[i]) * L.basis[i][t];
        return v;
    };
    std::vector<Rational> v0(L.shift);
    {
        std::vector<Rational> base = vec_of_k(k0);
        for (int t = 0; t < d; ++t) v0[t] += base[t];
    }
    int nk = static_cast<int>(kernel.size());
    std::vector<std::vector<Rational>> gens;  // L0 basis vectors (Witt coords)
    for (const auto& k : kernel) gens.push_back(vec_of_k(k));

    // Split off the E-sublattice: Smith form of the W-component matrix.
    BigInt den2 = 1;
    for (const auto& g : gens)
        for (const auto& v : g) den2 = lcm(den2, BigInt(denominator(v)));
    IMat WA(wdim, std::vector<BigInt>(nk, 0));
    for (int a = 0; a < wdim; ++a)
        for (int j = 0; j < nk; ++j) WA[a][j] = numerator(Rational(gens[j][ell + a] * den2));
    IMat U2, S2, V2;
    smith(WA, wdim, nk, U2, S2, V2);
    int rank2 = 0;
    for (int i = 0; i < std::min(wdim, nk); ++i)
        if (S2[i][i] != 0) ++rank2;
    // New generators: g'_j = sum_i V2[i][j] g_i; the last nk-rank2 span L0 meet E.
    std::vector<std::vector<Rational>> gens2(nk, std::vector<Rational>(d, Rational(0)));
    for (int j = 0; j < nk; ++j)
        for (int i = 0; i < nk; ++i)
            for (int t = 0; t < d; ++t) gens2[j][t] += Rational(V2[i][j]) * gens[i][t];
    int ne = nk - rank2;
    if (ne != ell)
        throw std::invalid_argument("hat_LW: the E-sublattice is not of full rank");
    // E-coordinates (the first ell Witt coordinates) of the E-sublattice.
    std::vector<std::vector<Rational>> LE(ell, std::vector<Rational>(ell, Rational(0)));
    for (int j = 0; j < ell; ++j)
        for (int i = 0; i < ell; ++i) LE[j][i] = gens2[rank2 + j][i];
    Rational detE = rational_det(LE);
    if (detE == 0) throw std::invalid_argument("hat_LW: the E-sublattice is degenerate");
    Rational weight = 1;
    Rational absdet = detE < 0 ? -detE : detE;
    for (int t = 0; t < n; ++t) weight /= absdet;

    // delta: E-parts of the projecting generators, in L_E coordinates modulo 1.
    // Solve LE^T x = (E-part) for each projecting generator.
    auto le_coords = [&](const std::vector<Rational>& epart) {
        // Gaussian elimination on the ell x ell system.
        std::vector<std::vector<Rational>> Abig(ell, std::vector<Rational>(ell + 1, Rational(0)));
        for (int i = 0; i < ell; ++i) {
            for (int j = 0; j < ell; ++j) Abig[i][j] = LE[j][i];
            Abig[i][ell] = epart[i];
        }
        for (int col = 0; col < ell; ++col) {
            int piv = -1;
            for (int r2 = col; r2 < ell; ++r2)
                if (Abig[r2][col] != 0) {
                    piv = r2;
                    break;
                }
            std::swap(Abig[piv], Abig[col]);
            Rational pv = Abig[col][col];
            for (int j = col; j <= ell; ++j) Abig[col][j] /= pv;
            for (int r2 = 0; r2 < ell; ++r2) {
                if (r2 == col || Abig[r2][col] == 0) continue;
                Rational f = Abig[r2][col];
                for (int j = col; j <= ell; ++j) Abig[r2][j] -= f * Abig[col][j];
            }
        }
        std::vector<Rational> x(ell);
        for (int i = 0; i < ell; ++i) x[i] = Abig[i][ell];
        return x;
    };
    std::vector<std::vector<Rational>> delta;  // per projecting generator
    for (int j = 0; j < rank2; ++j) {
        std::vector<Rational> ep(ell);
        for (int i = 0; i < ell; ++i) ep[i] = gens2[j][i];
        delta.push_back(le_coords(ep));
    }
    BigInt D = 1;
    for (const auto& row : delta)
        for (const auto& v : row) D = lcm(D, BigInt(denominator(v)));
    long long Dl = D.convert_to<long long>();

    // Sublattice {m : sum m_j delta_j = 0 mod 1} via the kernel of [D*delta | D I].
    IMat K(ell, std::vector<BigInt>(rank2 + ell, 0));
    for (int i = 0; i < ell; ++i) {
        for (int j = 0; j < rank2; ++j) K[i][j] = numerator(Rational(delta[j][i] * Rational(D)));
        K[i][rank2 + i] = D;
    }
    IMat U3, S3, V3;
    smith(K, ell, rank2 + ell, U3, S3, V3);
    int rank3 = 0;
    for (int i = 0; i < std::min(ell, rank2 + ell); ++i)
        if (S3[i][i] != 0) ++rank3;
    std::vector<std::vector<BigInt>> mker;  // m-parts of the kernel
    for (int j = rank3; j < rank2 + ell; ++j) {
        std::vector<BigInt> mcol(rank2);
        for (int i = 0; i < rank2; ++i) mcol[i] = V3[i][j];
        mker.push_back(mcol);
    }
    // Reduce to a basis of the m-projection (discard dependent columns).
    // Build L'_W basis vectors in W coordinates.
    std::vector<std::vector<Rational>> wproj;  // W-parts of projecting generators
    for (int j = 0; j < rank2; ++j) {
        std::vector<Rational> wp(wdim);
        for (int a = 0; a < wdim; ++a) wp[a] = gens2[j][ell + a];
        wproj.push_back(wp);
    }
    // Select rank2 independent kernel m-vectors by rational elimination.
    std::vector<std::vector<Rational>> sel;
    {
        std::vector<std::vector<Rational>> rows;
        for (const auto& mcol : mker) {
            std::vector<Rational> cand(rank2);
            for (int i = 0; i < rank2; ++i) cand[i] = Rational(mcol[i]);
            // Try to reduce cand by rows; keep if independent.
            std::vector<Rational> r = cand;
            for (const auto& row : rows) {
                int piv = -1;
                for (int t = 0; t < rank2; ++t)
                    if (row[t] != 0) {
                        piv = t;
                        break;
                    }
                if (piv >= 0 && r[piv] != 0) {
                    Rational f = r[piv] / row[piv];
                    for (int t = 0; t < rank2; ++t) r[t] -= f * row[t];
                }
            }
            bool nonzero = false;
            for (const auto& v : r) nonzero = nonzero || v != 0;
            if (nonzero) {
                rows.push_back(r);
                sel.push_back(cand);
            }
            if (static_cast<int>(sel.size()) == rank2) break;
        }
    }
    if (static_cast<int>(sel.size()) != rank2)
        throw std::invalid_argument("hat_LW: kernel sublattice is degenerate");
    std::vector<std::vector<Rational>> LWp(rank2, std::vector<Rational>(wdim, Rational(0)));
    for (int j = 0; j < rank2; ++j)
        for (int i = 0; i < rank2; ++i)
            for (int a = 0; a < wdim; ++a) LWp[j][a] += sel[j][i] * wproj[i][a];

    // Enumerate the coset representatives m in [0,D)^{rank2} by image of delta.
    std::vector<std::vector<Rational>> reps;
    {
        std::vector<std::vector<Rational>> seen;  // delta images mod 1
        std::vector<long long> mvec(rank2, 0);
        bool done = rank2 == 0;
        while (true) {
            std::vector<Rational> img(ell, Rational(0));
            for (int i = 0; i < ell; ++i) {
                for (int j = 0; j < rank2; ++j) img[i] += Rational(mvec[j]) * delta[j][i];
                BigInt flr = BigInt(numerator(img[i])) / BigInt(denominator(img[i]));
                if (img[i] < 0 && flr * BigInt(denominator(img[i])) != BigInt(numerator(img[i])))
                    flr -= 1;
                img[i] -= Rational(flr);
            }
            bool found = false;
            for (const auto& s : seen) found = found || s == img;
            if (!found) {
                seen.push_back(img);
                std::vector<Rational> wshift(wdim, Rational(0));
                for (int j = 0; j < rank2; ++j)
                    for (int a = 0; a < wdim; ++a) wshift[a] += Rational(mvec[j]) * wproj[j][a];
                reps.push_back(wshift);
            }
            if (done) break;
            int t = rank2 - 1;
            while (t >= 0 && mvec[t] == Dl - 1) {
                mvec[t] = 0;
                --t;
            }
            if (t < 0) break;
            ++mvec[t];
        }
        if (rank2 == 0) reps.assign(1, std::vector<Rational>(wdim, Rational(0)));
    }

    std::vector<LatticeCoset> out;
    for (const auto& rep : reps) {
        LatticeCoset cs;
        cs.basis = LWp;
        cs.shift.assign(wdim, Rational(0));
        for (int a = 0; a < wdim; ++a) cs.shift[a] = v0[ell + a] + rep[a];
        cs.weight = L.weight * weight;
        out.push_back(std::move(cs));
    }
    return out;
}

namespace {

GaussPoly abs_coeff_poly(const GaussPoly& phi) {
    // Majorize each coefficient by its absolute value (rounded up slightly).
    GaussPoly out(phi.rows(), phi.cols());
    for (const auto& [e, c] : phi.poly().terms()) {
        double a = std::abs(c.eval()) * (1 + 1e-12) + 1e-300;
        Rational r(a);
        out.poly().add_term(e, Scalar::rational(r));
    }
    return out;
}

long double eval_scalar_ld(const Scalar& s) {
    long double v = 0;
    const long double pi_ld = 3.14159265358979323846264338L;
    const long double s2 = 1.41421356237309504880168872L;
    for (const auto& [k, e] : s.terms()) {
        long double base = e.a.convert_to<long double>() + s2 * e.c.convert_to<long double>();
        v += base * std::pow(pi_ld, static_cast<long double>(k));
    }
    return v;
}

}  // namespace

std::string NonvanishingCertificate::str() const {
    std::string s = "h=(";
    for (size_t i = 0; i < h.size(); ++i)
        s += (i ? "," : "") + numerator(h[i]).str() + "/" + denominator(h[i]).str();
    s += ") N1=" + std::to_string(N1) + " N2=" + std::to_string(N2) +
         " |phi(h)|=" + std::to_string(phi_at_h) + " rest<=" + std::to_string(rest_bound);
    return s;
}

NonvanishingCertificate nonvanishing_search(const GaussPoly& phi, int max_n1, int max_n2) {
    int d = phi.rows() * phi.cols();
    if (phi.is_zero()) throw std::invalid_argument("nonvanishing_search: phi is zero");
    NonvanishingCertificate cert;
    // Find h in (1/N1) Z^d with nonzero polynomial part, exactly.
    for (int n1 = 1; n1 <= max_n1 && cert.N1 == 0; n1 *= 2) {
        std::vector<long long> num(d, 0);
        while (true) {
            // Evaluate the polynomial part at h = num / n1 exactly.
            Scalar val = Scalar::zero();
            for (const auto& [e, c] : phi.poly().terms()) {
                Rational mono = 1;
                for (int v = 0; v < d; ++v)
                    for (int rep = 0; rep < e[v]; ++rep) mono *= Rational(num[v], n1);
                val += c * Scalar::rational(mono);
            }
            if (!val.is_zero()) {
                cert.N1 = n1;
                cert.h.assign(d, Rational(0));
                for (int v = 0; v < d; ++v) cert.h[v] = Rational(num[v], n1);
                break;
            }
            int t = d - 1;
            while (t >= 0 && num[t] == n1 - 1) {
                num[t] = 0;
                --t;
            }
            if (t < 0) break;
            ++num[t];
        }
    }
    if (cert.N1 == 0) throw std::runtime_error("nonvanishing_search: no shift found in budget");

    std::vector<double> hpt(d);
    for (int v = 0; v < d; ++v) hpt[v] = rat(cert.h[v]);
    cert.phi_at_h = std::abs(eval_phi(phi, hpt, 1.0));
    GaussPoly absphi = abs_coeff_poly(phi);

    for (int n2 = 1; n2 <= max_n2; n2 *= 2) {
        long long scale = static_cast<long long>(cert.N1) * n2;
        LatticeCoset L;
        L.basis.assign(d, std::vector<Rational>(d, Rational(0)));
        for (int i = 0; i < d; ++i) L.basis[i][i] = Rational(scale);
        L.shift = cert.h;
        double radius = std::max(3.0 * scale, std::sqrt(poly_degree(phi) / kPi) + 2.0);
        ThetaValue rest = theta_eval_serial({L}, absphi, 1.0, radius);
        // Remove the h-term itself and re-add the absolute values of the others;
        // enumerate once more accumulating |phi|, skipping x = h.
        GramSchmidt gs(L.basis);
        std::vector<double> hstar = hstar_coords(gs, L.shift);
        double R2 = radius * radius * (1 + 3e-9);
        std::vector<long long> k(d, 0);
        double acc = 0;
        enumerate_level(gs, hstar, R2, d - 1, k, 0.0, [&](const std::vector<long long>& kk) {
            bool is_h = true;
            for (long long v : kk) is_h = is_h && v == 0;
            if (is_h) return;
            std::vector<double> x = point_of(gs, L.shift, kk);
            if (norm2_of(x) > R2 + 1e-9) return;
            acc += std::abs(eval_phi(phi, x, 1.0));
        });
        double rest_sum = acc + rest.tail;
        // Certified bound for the lattice-absolute sum (as stated for the search).
        LatticeCoset L0 = L;
        L0.shift.assign(d, Rational(0));
        ThetaValue latabs = theta_eval_serial({L0}, absphi, 1.0, radius);
        double lat_sum = std::abs(latabs.value) + latabs.tail;
        if (rest_sum < cert.phi_at_h * (1 - 1e-9)) {
            cert.N2 = n2;
            cert.rest_bound = rest_sum;
            cert.lattice_abs_sum = lat_sum;
            return cert;
        }
    }
    throw std::runtime_error("nonvanishing_search: no scaling certified in budget");
}

bool reverify_certificate(const NonvanishingCertificate& cert, const GaussPoly& phi) {
    // Extended-precision recomputation of |phi(h)| and of the finite part of
    // the rest sum (the certified tail is reused as-is).
    int d = phi.rows() * phi.cols();
    const long double pi_ld = 3.14159265358979323846264338L;
    auto phi_ld = [&](const std::vector<long double>& x) {
        long double s = 0;
        for (const auto& [e, c] : phi.poly().terms()) {
            long double t = eval_scalar_ld(c);
            for (int v = 0; v < d; ++v)
                for (int rep = 0; rep < e[v]; ++rep) t *= x[v];
            s += t;
        }
        long double n2 = 0;
        for (long double v : x) n2 += v * v;
        return s * std::exp(-pi_ld * n2);
    };
    std::vector<long double> h(d);
    for (int v = 0; v < d; ++v) h[v] = cert.h[v].convert_to<long double>();
    long double at_h = std::fabs(phi_ld(h));
    long long scale = static_cast<long long>(cert.N1) * cert.N2;
    double radius = std::max(3.0 * static_cast<double>(scale),
                             std::sqrt(poly_degree(phi) / kPi) + 2.0);
    long double acc = 0;
    std::vector<long long> k(d, 0);
    std::function<void(int)> rec = [&](int level) {
        if (level < 0) {
            bool is_h = true;
            for (long long v : k) is_h = is_h && v == 0;
            if (is_h) return;
            std::vector<long double> x(d);
            long double n2 = 0;
            for (int v = 0; v < d; ++v) {
                x[v] = h[v] + static_cast<long double>(k[v]) * scale;
                n2 += x[v] * x[v];
            }
            if (n2 <= radius * radius) acc += std::fabs(phi_ld(x));
            return;
        }
        long long bound = static_cast<long long>(radius / scale) + 2;
        for (long long v = -bound; v <= bound; ++v) {
            k[level] = v;
            rec(level - 1);
        }
        k[level] = 0;
    };
    rec(d - 1);
    // The certified Gaussian tail bounds the points outside the radius
    // independently of the working precision of the finite part.
    GaussPoly absphi = abs_coeff_poly(phi);
    LatticeCoset L;
    L.basis.assign(d, std::vector<Rational>(d, Rational(0)));
    for (int i = 0; i < d; ++i) L.basis[i][i] = Rational(scale);
    L.shift = cert.h;
    double tb = tail_bound(absphi, 1.0, radius, L, packing_radius(L.basis));
    return acc + static_cast<long double>(tb) < at_h;
}

double poisson_check(const Rational& c, const Rational& h, const GaussPoly& phi) {
    if (phi.rows() != 1 || phi.cols() != 1)
        throw std::invalid_argument("poisson_check: one-variable Gauss polynomials only");
    double cd = rat(c), hd = rat(h);
    if (cd <= 0) throw std::invalid_argument("poisson_check: lattice scale must be positive");
    // Left side: sum over cZ + h.
    std::complex<double> lhs(0, 0);
    long long N = static_cast<long long>(std::ceil(14.0 / cd)) + 2;
    for (long long k = -N; k <= N; ++k) {
        double x = cd * k + hd;
        lhs += eval_phi(phi, {x}, 1.0);
    }
    // Right side: covol^{-1} sum over the dual lattice (1/c) Z with phases.
    GaussPoly ft = weil::fourier_1d(phi);
    std::complex<double> rhs(0, 0);
    long long M = static_cast<long long>(std::ceil(14.0 * cd)) + 2;
    for (long long k = -M; k <= M; ++k) {
        double xi = k / cd;
        rhs += std::exp(std::complex<double>(0, 2 * kPi * xi * hd)) * eval_phi(ft, {xi}, 1.0);
    }
    rhs /= cd;
    return std::abs(lhs - rhs);
}

}  // namespace specialforms::theta
