#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specialforms/cochain.hpp"

#include <random>

using namespace specialforms;
using namespace specialforms::cochain;
using liegeom::CotangentLabel;
using liegeom::ParabolicData;
using liegeom::QuadSpace;
using multitensor::idx_of;
using multitensor::SparseTensor;
using multitensor::TensorSpace;
using tableaux::Filling;
using tableaux::Partition;

namespace {

Scalar inv_2sqrt2pii() { return Scalar::sqrt2_pow(-1) * Scalar::two_pi_i_pow(-1); }

std::vector<uint8_t> zexp(int nvars, std::initializer_list<std::pair<int, int>> entries) {
    std::vector<uint8_t> e(nvars, 0);
    for (auto [v, d] : entries) e[v] = static_cast<uint8_t>(d);
    return e;
}

}  // namespace

TEST_CASE("phi_nq explicit Fock values") {
    // (p,q,n) = (1,1,1), l' = 0: u_1 (x) (1/(2 sqrt2 pi i)) z_11 (x) omega_12.
    QuadSpace V11{1, 1};
    CochainHom h = phi_nq(V11, 1, 0, WeilModel::Fock);
    Cochain expect(ComplexInfo::cv(V11, 1, WeilModel::Fock), 1, 1, 0);
    expect.add_term(zexp(2, {{0, 1}}), {CotangentLabel::omega(1, 2)}, 0, inv_2sqrt2pii());
    CHECK(h.value(0) == expect);

    // (p,q,n) = (2,1,1), l' = 0: (1/(2 sqrt2 pi i)) (z_11 (x) omega_13 + z_21 (x) omega_23).
    QuadSpace V21{2, 1};
    CochainHom h2 = phi_nq(V21, 1, 0, WeilModel::Fock);
    Cochain expect2(ComplexInfo::cv(V21, 1, WeilModel::Fock), 1, 1, 0);
    expect2.add_term(zexp(3, {{0, 1}}), {CotangentLabel::omega(1, 3)}, 0, inv_2sqrt2pii());
    expect2.add_term(zexp(3, {{1, 1}}), {CotangentLabel::omega(2, 3)}, 0, inv_2sqrt2pii());
    CHECK(h2.value(0) == expect2);

    CHECK_THROWS_AS(phi_nq(V11, 2, 0, WeilModel::Fock), std::invalid_argument);
}

TEST_CASE("phi_0k explicit values and S_k invariance") {
    QuadSpace V21{2, 1};
    CochainHom h0 = phi_0k(V21, 1, 0);
    Cochain one(ComplexInfo::cv(V21, 1, WeilModel::Fock), 0, 0, 0);
    one.add_term(zexp(3, {}), {}, 0, Scalar::one());
    CHECK(h0.value(0) == one);

    // k = 1: (1/(4 pi i)) (z_11 (x) e_1 + z_21 (x) e_2).
    CochainHom h1 = phi_0k(V21, 1, 1);
    Cochain expect(ComplexInfo::cv(V21, 1, WeilModel::Fock), 0, 0, 1);
    Scalar pref = Scalar::rational(Rational(1, 2)) * Scalar::two_pi_i_pow(-1);
    expect.add_term(zexp(3, {{0, 1}}), {}, idx_of({1}), pref);
    expect.add_term(zexp(3, {{1, 1}}), {}, idx_of({2}), pref);
    CHECK(h1.value(idx_of({1})) == expect);

    // S_2-equivariance for k = 2, n = 2.
    QuadSpace V22{2, 2};
    CochainHom h2 = phi_0k(V22, 2, 2);
    tableaux::Permutation swap_pos = tableaux::Permutation::transposition(2, 1, 2);
    for (PackedIdx I : h2.index_set()) {
        PackedIdx J = idx_of({multitensor::idx_get(I, 1), multitensor::idx_get(I, 0)});
        Cochain permuted(h2.info(), 0, 0, 2);
        for (const auto& [key, c] : h2.value(I).terms()) {
            PackedIdx m = idx_of({multitensor::idx_get(key.coeff, 1),
                                  multitensor::idx_get(key.coeff, 0)});
            permuted.add_key({key.weil, key.wedge, m}, c);
        }
        CHECK(h2.value(J) == permuted);
    }
}

TEST_CASE("operator routes match the explicit formulas") {
    // D(phi_0) = phi_{nq,0} in the Schrodinger model.
    for (auto [p, q, n] : std::vector<std::tuple<int, int, int>>{{1, 1, 1}, {2, 1, 1}, {2, 2, 1}}) {
        QuadSpace V{p, q};
        CochainHom formula = phi_nq(V, n, 0, WeilModel::Schrodinger);
        CHECK(op_D_phi0(V, n) == formula.value(0));
    }
    // T_1(eps_1) phi_{1,0} = phi_{1,1}(eps_1) at (2,1,1).
    QuadSpace V21{2, 1};
    CHECK(op_T_phi(V21, 1, 1) == phi_nq(V21, 1, 1, WeilModel::Schrodinger));
    // T_0 is the identity.
    CHECK(op_T_phi(V21, 1, 0) == phi_nq(V21, 1, 0, WeilModel::Schrodinger));
    // Both paths expanded at (2,1,1), l' = 2.
    CHECK(op_T_phi(V21, 1, 2) == phi_nq(V21, 1, 2, WeilModel::Schrodinger));
}

TEST_CASE("Fock and Schrodinger constructions agree under the intertwiner") {
    for (auto [p, q, n, lp] : std::vector<std::tuple<int, int, int, int>>{
             {2, 1, 1, 1}, {1, 1, 1, 2}, {2, 2, 1, 1}}) {
        QuadSpace V{p, q};
        CochainHom schr = phi_nq(V, n, lp, WeilModel::Schrodinger);
        CochainHom fock = phi_nq(V, n, lp, WeilModel::Fock);
        ComplexInfo fock_info = ComplexInfo::cv(V, n, WeilModel::Fock);
        for (PackedIdx I : schr.index_set()) {
            // Regroup the Schrodinger value by (wedge, coeff) and map each
            // Gauss polynomial through the intertwiner.
            std::map<std::pair<std::vector<CotangentLabel>, PackedIdx>, weil::GaussPoly> groups;
            for (const auto& [key, c] : schr.value(I).terms()) {
                auto gk = std::make_pair(key.wedge, key.coeff);
                auto it = groups.find(gk);
                if (it == groups.end()) it = groups.emplace(gk, weil::GaussPoly(V.m(), n)).first;
                it->second.poly().add_term(key.weil, c);
            }
            Cochain mapped(fock_info, q, n * q, lp);
            for (auto& [gk, g] : groups) {
                weil::FockPoly f = weil::to_fock(V, g);
                for (const auto& [e, c] : f.poly().terms()) mapped.add_key({e, gk.first, gk.second}, c);
            }
            CHECK(mapped == fock.value(I));
        }
    }
}

TEST_CASE("dga product rules") {
    QuadSpace V21{2, 1};
    // phi_{0,k1} . phi_{0,k2} = phi_{0,k1+k2}.
    for (int n : {1, 2}) {
        CochainHom a = phi_0k(V21, n, 1);
        CochainHom b = phi_0k(V21, n, 2);
        CHECK(dga_mul(a, b) == phi_0k(V21, n, 3));
    }
    // 1 . a = a.
    CochainHom one(ComplexInfo::cv(V21, 1, WeilModel::Fock), 0, 0, 0);
    Cochain c1(ComplexInfo::cv(V21, 1, WeilModel::Fock), 0, 0, 0);
    c1.add_term(zexp(3, {}), {}, 0, Scalar::one());
    one.set_value(0, c1);
    CochainHom a = phi_nq(V21, 1, 1, WeilModel::Fock);
    CHECK(dga_mul(one, a) == a);
    // phi_{nq,l'} = phi_{nq,0} . phi_{0,l'} in the Fock model.
    for (auto [p, q, n, lp] : std::vector<std::tuple<int, int, int, int>>{
             {2, 1, 1, 1}, {2, 1, 1, 2}, {2, 2, 1, 2}, {2, 1, 2, 1}, {3, 2, 2, 1}}) {
        QuadSpace V{p, q};
        CHECK(dga_mul(phi_nq(V, n, 0, WeilModel::Fock), phi_0k(V, n, lp)) ==
              phi_nq(V, n, lp, WeilModel::Fock));
    }
}

TEST_CASE("wedge anticommutativity in the product") {
    QuadSpace V22{2, 2};
    ComplexInfo info = ComplexInfo::cv(V22, 1, WeilModel::Fock);
    Cochain a(info, 0, 1, 0), b(info, 0, 1, 0);
    a.add_term(zexp(4, {}), {CotangentLabel::omega(1, 3)}, 0, Scalar::one());
    b.add_term(zexp(4, {}), {CotangentLabel::omega(2, 4)}, 0, Scalar::one());
    CHECK(dga_mul(a, b) == dga_mul(b, a).scaled(Scalar::integer(-1)));
    CHECK(dga_mul(a, a).is_zero());
}

TEST_CASE("Schur projections") {
    QuadSpace V21{2, 1};
    // Row-symmetric input is fixed by the single-row projection.
    CochainHom h = phi_nq(V21, 2, 2, WeilModel::Fock);
    Filling row = Filling::standard(Partition({2}));
    CochainHom hrow = project_schur(h, row);
    CHECK(project_schur(hrow, row) == hrow);
    // Postcomposition route equals precomposition route.
    for (const Filling& A : {Filling::standard(Partition({2})), Filling::standard(Partition({1, 1}))})
        CHECK(project_schur(h, A) == project_schur(h, A, true));
    // Idempotency.
    Filling anti = Filling::standard(Partition({1, 1}));
    CochainHom once = project_schur(h, anti);
    CHECK(project_schur(once, anti) == once);
}

TEST_CASE("values of the projected form lie in the Schur subspace") {
    // On S_A(C^n) inputs, coefficient tensors lie in S_A(V_C): (2,1,2,2).
    QuadSpace V{2, 1};
    CochainHom h = phi_nq(V, 2, 2, WeilModel::Fock);
    for (const Filling& A :
         {Filling::standard(Partition({2})), Filling::standard(Partition({1, 1}))}) {
        CochainHom proj = project_schur(h, A);
        auto basis = multitensor::schur_image(A, V.tensor_space());
        multitensor::TensorSpan span;
        for (const auto& b : basis) span.add(b);
        for (PackedIdx I : proj.index_set()) {
            // Collect the coefficient tensor for each (weil, wedge) group.
            std::map<std::pair<std::vector<uint8_t>, std::vector<CotangentLabel>>, SparseTensor>
                groups;
            for (const auto& [key, c] : proj.value(I).terms()) {
                auto gk = std::make_pair(key.weil, key.wedge);
                auto it = groups.find(gk);
                if (it == groups.end())
                    it = groups.emplace(gk, SparseTensor(V.tensor_space(), 2)).first;
                it->second.add_term(key.coeff, c);
            }
            for (const auto& [gk, t] : groups) CHECK(span.contains(t));
        }
    }
}

TEST_CASE("harmonic projection of coefficients") {
    QuadSpace V21{2, 1};
    // k = 1: degree-1 tensors are harmonic.
    CochainHom h1 = phi_nq(V21, 1, 1, WeilModel::Fock);
    Filling A1 = Filling::standard(Partition({1}));
    CHECK(project_harmonic(h1, A1) == project_schur(h1, A1));
    // lambda = (2) at (2,1,1): all coefficient tensors traceless.
    CochainHom h2 = phi_nq(V21, 1, 2, WeilModel::Fock);
    CochainHom hh = project_harmonic(h2, Filling::standard(Partition({2})));
    for (PackedIdx I : hh.index_set()) {
        std::map<std::pair<std::vector<uint8_t>, std::vector<CotangentLabel>>, SparseTensor> groups;
        for (const auto& [key, c] : hh.value(I).terms()) {
            auto gk = std::make_pair(key.weil, key.wedge);
            auto it = groups.find(gk);
            if (it == groups.end()) it = groups.emplace(gk, SparseTensor(V21.tensor_space(), 2)).first;
            it->second.add_term(key.coeff, c);
        }
        for (const auto& [gk, t] : groups) CHECK(multitensor::contract(t, 1, 2).is_zero());
    }
}

TEST_CASE("closedness of the special forms (small cases)") {
    for (auto [p, q, n, lp] : std::vector<std::tuple<int, int, int, int>>{
             {1, 1, 1, 0}, {1, 1, 1, 1}, {2, 1, 1, 0}, {2, 1, 1, 1}, {2, 2, 1, 0}}) {
        QuadSpace V{p, q};
        CochainHom h = phi_nq(V, n, lp, WeilModel::Schrodinger);
        CHECK(rel_differential(h).is_zero());
    }
}

TEST_CASE("phi_{0,k} is not closed") {
    // d phi_{0,1} != 0 at (2,1,1) in the Schrodinger model.
    QuadSpace V{2, 1};
    ComplexInfo info = ComplexInfo::cv(V, 1, WeilModel::Schrodinger);
    // T_1(eps_1) phi_0 = sum_alpha x_{alpha 1} phi_0 (x) e_alpha.
    Cochain c(info, 0, 0, 1);
    for (int alpha = 1; alpha <= 2; ++alpha) {
        std::vector<uint8_t> e(3, 0);
        e[(alpha - 1) * 1] = 1;
        c.add_term(e, {}, idx_of({alpha}), Scalar::one());
    }
    CHECK(!rel_differential(c).is_zero());
}

TEST_CASE("S_k equivariance of phi_nq") {
    QuadSpace V{2, 1};
    CochainHom h = phi_nq(V, 2, 2, WeilModel::Fock);
    for (PackedIdx I : h.index_set()) {
        PackedIdx J = idx_of({multitensor::idx_get(I, 1), multitensor::idx_get(I, 0)});
        Cochain permuted(h.info(), h.j(), h.r(), 2);
        for (const auto& [key, c] : h.value(I).terms()) {
            PackedIdx m =
                idx_of({multitensor::idx_get(key.coeff, 1), multitensor::idx_get(key.coeff, 0)});
            permuted.add_key({key.weil, key.wedge, m}, c);
        }
        CHECK(h.value(J) == permuted);
    }
}

TEST_CASE("k-invariance of phi_nq at (2,2,1)") {
    QuadSpace V{2, 2};
    CochainHom h = phi_nq(V, 1, 1, WeilModel::Schrodinger);
    for (const auto& X : liegeom::k_basis(V))
        for (PackedIdx I : h.index_set()) CHECK(k_action(X, h.value(I)).is_zero());
}

TEST_CASE("tau and the nilpotent complex") {
    // tau(e_2) at (2,1), ell = 1, n = 1 is the nu_{2,1}-labeled 1-form.
    QuadSpace V21{2, 1};
    ParabolicData P21(V21, 1);
    SparseTensor w = SparseTensor::basis(P21.W().tensor_space('W'), {1});
    SparseTensor one = SparseTensor::scalar_one(P21.W().tensor_space('W'));
    Cochain t = tau(P21, 1, w, one);
    Cochain expect(ComplexInfo::nil(V21, 1), 0, 1, 0);
    expect.add_term({}, {CotangentLabel::nu(2, 1)}, 0, Scalar::one());
    CHECK(t == expect);

    // d commutes with coefficient-slot permutations.
    QuadSpace V32{3, 2};
    ParabolicData P(V32, 1);
    TensorSpace W = P.W().tensor_space('W');
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> lab(1, W.dim), coef(-2, 2);
    for (int rep = 0; rep < 5; ++rep) {
        SparseTensor wr(W, 1), br(W, 2);
        wr.add_term(idx_of({lab(rng)}), Scalar::integer(coef(rng)));
        br.add_term(idx_of({lab(rng), lab(rng)}), Scalar::integer(coef(rng)));
        br.add_term(idx_of({lab(rng), lab(rng)}), Scalar::integer(coef(rng)));
        Cochain t2 = tau(P, 1, wr, br);
        Cochain t2s = tau(P, 1, wr, br.permuted(tableaux::Permutation::transposition(2, 1, 2)));
        auto swap_coeff = [&](const Cochain& c) {
            Cochain out(c.info(), c.j(), c.r(), c.k());
            for (const auto& [key, cf] : c.terms()) {
                PackedIdx m = idx_of({multitensor::idx_get(key.coeff, 1),
                                      multitensor::idx_get(key.coeff, 0)});
                out.add_key({key.weil, key.wedge, m}, cf);
            }
            return out;
        };
        CHECK(nilpotent_differential(t2s) == swap_coeff(nilpotent_differential(t2)));
    }
}

TEST_CASE("nilpotent differential squares to zero") {
    QuadSpace V32{3, 2};
    for (int ell : {1, 2}) {
        ParabolicData P(V32, ell);
        std::mt19937_64 rng(37 + ell);
        auto duals = liegeom::n_dual_labels(P);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(duals.size()) - 1);
        std::uniform_int_distribution<int> lab(1, 5), coef(-2, 2);
        for (int rep = 0; rep < 6; ++rep) {
            Cochain c(ComplexInfo::nil(V32, ell), 0, 1, 1);
            c.add_term({}, {duals[pick(rng)]}, idx_of({lab(rng)}), Scalar::integer(coef(rng)));
            c.add_term({}, {duals[pick(rng)]}, idx_of({lab(rng)}), Scalar::integer(coef(rng)));
            CHECK(nilpotent_differential(nilpotent_differential(c)).is_zero());
        }
    }
}

TEST_CASE("tau of symmetrized tensors is closed") {
    // d_n tau(s_{B|A}(w)) = 0; (2,2) and (3,2), n = 1, ell = 1, |lambda| <= 1.
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
        QuadSpace V{p, q};
        ParabolicData P(V, 1);
        TensorSpace W = P.W().tensor_space('W');
        for (int lp : {0, 1}) {
            int deg = 1 + lp;
            Filling BA = tableaux::abut(Filling::rectangle(1, 1),
                                        Filling::standard(lp ? Partition({1}) : Partition(std::vector<int>{})));
            tableaux::GroupAlgebraElement s = tableaux::symmetrizer(BA);
            // Sweep the basis tensors of T^{deg}(W).
            long long count = 1;
            for (int i = 0; i < deg; ++i) count *= W.dim;
            for (long long flat = 0; flat < count; ++flat) {
                std::vector<int> labs(deg);
                long long rest = flat;
                for (int s2 = 0; s2 < deg; ++s2) {
                    labs[s2] = static_cast<int>(rest % W.dim) + 1;
                    rest /= W.dim;
                }
                SparseTensor t = multitensor::apply_group_element(s, SparseTensor::basis(W, labs));
                // Split into the wedge part (first n*ell slots) and coefficients.
                Cochain total(ComplexInfo::nil(V, 1), 0, 1, lp);
                for (const auto& [idx, c] : t.terms()) {
                    SparseTensor w1(W, 1), w2(W, lp);
                    w1.add_term(idx_of({multitensor::idx_get(idx, 0)}), c);
                    PackedIdx rest2 = 0;
                    for (int u = 0; u < lp; ++u)
                        rest2 = multitensor::idx_set(rest2, u, multitensor::idx_get(idx, 1 + u));
                    w2.add_term(rest2, Scalar::one());
                    total = total + tau(P, 1, w1, w2);
                }
                CHECK(nilpotent_differential(total).is_zero());
            }
        }
    }
}

TEST_CASE("explicit primitive at n=1, ell=2, l'=0, (p,q)=(3,2)") {
    QuadSpace V{3, 2};
    ParabolicData P(V, 2);
    TensorSpace W = P.W().tensor_space('W');  // signature (1,0)
    // The target: tau_2(s_B(g_W*)) with B the 1x2 row.
    SparseTensor gW = multitensor::insert_metric(SparseTensor::scalar_one(W), 1, 2);
    SparseTensor sym = multitensor::apply_group_element(
        tableaux::symmetrizer(Filling::rectangle(1, 2)), gW);
    Cochain target = tau(P, 1, sym, SparseTensor::scalar_one(W));
    // The primitive: -(u'_1 ^ u'_2)-dual form.
    Cochain prim(ComplexInfo::nil(V, 2), 0, 1, 0);
    prim.add_term({}, {CotangentLabel::zq(1, 2)}, 0, Scalar::integer(-1));
    CHECK(nilpotent_differential(prim) == target);
}

TEST_CASE("iota_P basic properties") {
    QuadSpace V22{2, 2};
    ParabolicData P(V22, 1);
    QuadSpace W = P.W();

    // Image of phi^W_{0,B} and of phi^W_{0,n ell} is (-1)^{...} phi_{P,n ell}.
    CochainHom phiW = phi_0k(W, 1, 1);
    Cochain expected = phi_P_nl(P, 1);
    int sign_exp = 1 * 1 * ((W.q * 0) / 2 + 1);  // n = 1, ell = 1
    Scalar sign = Scalar::integer(sign_exp % 2 == 0 ? 1 : -1);
    CHECK(iota_P(phiW, P).value(0) == expected.scaled(sign));
    Filling B = Filling::rectangle(1, 1);
    CHECK(iota_P(project_schur(phiW, B), P).value(0) == expected.scaled(sign));

    // Zero below the cut.
    CochainHom low = phi_0k(W, 1, 0);
    CHECK(iota_P(low, P).is_zero());

    // Module property iota_P(a . b) = a . iota_P(b) for a with k = 0.
    QuadSpace V32{3, 2};
    ParabolicData P32(V32, 1);
    QuadSpace W32 = P32.W();
    CochainHom a = phi_nq(W32, 1, 0, WeilModel::Fock);
    CochainHom b = phi_0k(W32, 1, 2);
    CochainHom lhs = iota_P(dga_mul(a, b), P32);
    CochainHom rhs = dga_mul(embed_cw_in_ap(a, P32), iota_P(b, P32));
    CHECK(lhs == rhs);
}

TEST_CASE("phi_P_nl explicit values") {
    // (2,2,1,1): (1/(4 pi i)) z^W_{11} (x) nu_{2,1}.
    QuadSpace V22{2, 2};
    ParabolicData P(V22, 1);
    Cochain c = phi_P_nl(P, 1);
    Cochain expect(ComplexInfo::ap(V22, 1, 1, WeilModel::Fock), 1, 1, 0);
    expect.add_term({1, 0}, {CotangentLabel::nu(2, 1)},
                    0, Scalar::rational(Rational(1, 2)) * Scalar::two_pi_i_pow(-1));
    CHECK(c == expect);

    // (1,1,1,1): empty gamma range.
    QuadSpace V11{1, 1};
    ParabolicData P11(V11, 1);
    CHECK(phi_P_nl(P11, 1).is_zero());

    // Matches iota_P(phi^W_{0,B}) up to the stated sign at (3,2,1,1).
    QuadSpace V32{3, 2};
    ParabolicData P32(V32, 1);
    QuadSpace W32 = P32.W();
    CochainHom phiW = phi_0k(W32, 1, 1);
    int q_l = W32.q;  // q - ell = 1
    long long expo = 1LL * ((q_l * 0) / 2 + 1);
    Scalar sign = Scalar::integer(expo % 2 == 0 ? 1 : -1);
    CHECK(iota_P(phiW, P32).value(0) == phi_P_nl(P32, 1).scaled(sign));
}

TEST_CASE("product rule for projected forms") {
    // phi_{0,B} . phi_{0,A} = phi_{0,B|A} for small rectangles and shapes.
    for (auto [p, q, n, ell, shape] : std::vector<std::tuple<int, int, int, int, Partition>>{
             {2, 1, 1, 1, Partition({1})},
             {2, 1, 1, 2, Partition({2})},
             {2, 1, 2, 1, Partition({1, 1})},
             {2, 2, 2, 1, Partition({2})}}) {
        QuadSpace V{p, q};
        Filling B = Filling::rectangle(n, ell);
        Filling A = Filling::standard(shape);
        Filling BA = tableaux::abut(B, A);
        CochainHom phiB = project_schur(phi_0k(V, n, n * ell), B);
        CochainHom phiA = project_schur(phi_0k(V, n, shape.size()), A);
        CochainHom phiBA = project_schur(phi_0k(V, n, BA.size()), BA);
        // Equality of elements of C^{0,B|A,0}, i.e. as maps on S_{B|A}(C^n).
        CHECK(project_schur(dga_mul(phiB, phiA), BA, true) == phiBA);
    }
}

TEST_CASE("tensor form of the abutment constant") {
    // s(B) eps_B (x) s(A) eps_A = c(A,B) s(B|A) eps_{B|A} for B = B_{2,1}, A = (1).
    Filling B = Filling::rectangle(2, 1);
    Filling A = Filling::standard(Partition({1}));
    Filling BA = tableaux::abut(B, A);
    TensorSpace cn = TensorSpace::cn(2);
    SparseTensor epsB = SparseTensor::basis(cn, {1, 2});
    SparseTensor epsA = SparseTensor::basis(cn, {1});
    SparseTensor lhs = multitensor::apply_group_element(tableaux::symmetrizer(B), epsB)
                           .tensor(multitensor::apply_group_element(tableaux::symmetrizer(A), epsA));
    SparseTensor rhs = multitensor::apply_group_element(tableaux::symmetrizer(BA), epsB.tensor(epsA));
    CHECK(lhs == rhs.scaled(tableaux::abut_constant(A, B)));
}

TEST_CASE("restriction theorem at small parameters") {
    {
        RestrictionRecord r = verify_restriction_theorem(2, 2, 1, 1, {});
        CHECK(!r.skipped);
        CHECK(r.level_ellp_equal);
        CHECK(r.level_A_equal);
        CHECK(r.level_harmonic_ok);
        CHECK(!r.both_sides_zero);
    }
    {
        RestrictionRecord r = verify_restriction_theorem(3, 1, 1, 1, {});
        CHECK(r.level_ellp_equal);
    }
    {
        // n = 2 > p - ell = 1: both sides vanish.
        RestrictionRecord r = verify_restriction_theorem(2, 2, 2, 1, {});
        CHECK(r.level_ellp_equal);
        CHECK(r.both_sides_zero);
    }
    {
        // ell = 2 at (3,2): the rank-two face.
        RestrictionRecord r = verify_restriction_theorem(3, 2, 1, 2, {});
        CHECK(r.level_ellp_equal);
        CHECK(!r.both_sides_zero);
    }
    {
        // A-level with lambda = (1) at (3,2).
        RestrictionRecord r = verify_restriction_theorem(3, 2, 1, 1, {1});
        CHECK(r.level_ellp_equal);
        CHECK(r.level_A_equal);
        CHECK(r.level_harmonic_ok);
    }
}
