#include <doctest.h>

#include <random>
#include <set>
#include <thread>

#include "chromo/building.hpp"

using namespace chromo;

namespace {

KVec kv(std::initializer_list<long> a)
{
    KVec v;
    for (long x : a) v.push_back({x, 0});
    return v;
}

// identity Gram over any ring; for Q_l this is the standard symmetric form
HermitianSpace diagonal_space(const LocalRing& R, int n)
{
    HermitianSpace H;
    H.R = R;
    H.n = n;
    H.gram = kmat_identity(n);
    return H;
}

// subgroups of (Z/4)^2 of order 4, by closure of generator pairs
std::set<std::set<std::pair<int, int>>> subgroups_order4()
{
    std::set<std::set<std::pair<int, int>>> out;
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            std::set<std::pair<int, int>> S;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) S.insert({(i * (a % 4) + j * (b % 4)) % 4, (i * (a / 4) + j * (b / 4)) % 4});
            }
            if (S.size() == 4) out.insert(S);
        }
    }
    return out;
}

Lattice random_lattice(const LocalRing& R, int n, std::mt19937& rng)
{
    while (true) {
        std::vector<KVec> g;
        for (int i = 0; i < n; ++i) {
            KVec v(n);
            for (auto& e : v) {
                e.a = Rat(long(rng() % 7) - 3, rng() % 3 ? 1 : R.l);
                if (R.f() == 2) e.b = Rat(long(rng() % 5) - 2);
            }
            g.push_back(v);
        }
        try {
            return lattice_from_generators(R, n, g);
        } catch (const precondition_error&) {
        }
    }
}

KElt rand_k(const LocalRing& R, std::mt19937& rng)
{
    while (true) {
        KElt x{long(rng() % 7) - 3, long(rng() % 5) - 2};
        if (x.a * x.a - Rat(R.d) * x.b * x.b != 0) return x;
    }
}

// random similitude of a split hyperbolic space (antidiagonal Gram, n = 2r)
KMat random_similitude(const HermitianSpace& H, std::mt19937& rng, Rat nu)
{
    const LocalRing& R = H.R;
    int n = H.n;
    KMat g = kmat_identity(n);
    for (int step = 0; step < 4; ++step) {
        KMat h = kmat_identity(n);
        int i = rng() % (n / 2), j = n - 1 - i;
        switch (rng() % 4) {
        case 0: {
            KElt lam = rand_k(R, rng);
            h[i][i] = lam;
            h[j][j] = kinv(R, kconj(lam));
            break;
        }
        case 1:
            h[i][j] = {0, long(rng() % 5) - 2};
            break;
        case 2:
            h[i][i] = h[j][j] = {0, 0};
            h[i][j] = h[j][i] = {1, 0};
            break;
        default:
            if (n >= 4) {
                int i2 = (i + 1) % (n / 2), j2 = n - 1 - i2;
                for (int a : {i, j, i2, j2}) h[a][a] = {0, 0};
                h[i][i2] = h[i2][i] = h[j][j2] = h[j2][j] = {1, 0};
            }
        }
        g = kmat_mul(R, h, g);
    }
    KMat s = kmat_identity(n);
    for (int i = 0; i < n / 2; ++i) s[i][i] = {nu, 0};
    return kmat_mul(R, s, g);
}

KElt kpow(const LocalRing& R, long k)
{
    KElt s{1, 0};
    for (long i = 0; i < std::labs(k); ++i) s = kmul(R, s, kpi(R));
    return k < 0 ? kinv(R, s) : s;
}

std::vector<LocalRing> quad_rings()
{
    return {make_ring(3, Ext::Inert, -1), make_ring(3, Ext::Ramified, 3), make_ring(5, Ext::Inert, 2),
            make_ring(5, Ext::Ramified, -5)};
}

}  // namespace

TEST_CASE("hnf normal form")
{
    auto R = make_ring(2);
    auto S = standard_lattice(R, 2);
    CHECK(S.H == std::vector<std::vector<Rat>>{{1, 0}, {0, 1}});
    auto L = lattice_from_generators(R, 2, {kv({2, 1}), kv({1, 1})});
    CHECK(L == S);
    auto M = lattice_from_generators(R, 2, {kv({2, 0}), kv({1, 1})});
    CHECK(M.H == std::vector<std::vector<Rat>>{{1, 1}, {0, 2}});
    CHECK(class_rep(scale_pi(S, 1)) == S);
    CHECK(scale_pi(S, 1).H == std::vector<std::vector<Rat>>{{2, 0}, {0, 2}});
    CHECK(hnf_normalize(M) == M);

    // every subgroup of (Z/4)^2 of order 4 is an index-4 sublattice; forms must separate them
    auto subs = subgroups_order4();
    CHECK(subs.size() == 7);
    std::set<std::string> keys;
    for (auto& G : subs) {
        std::vector<KVec> gen{kv({4, 0}), kv({0, 4})};
        for (auto& [x, y] : G) gen.push_back(kv({x, y}));
        auto A = lattice_from_generators(R, 2, gen);
        keys.insert(A.key());
        for (auto& [x, y] : G) {
            if (x == 0 && y == 0) continue;
            // any generating pair of the same subgroup gives the same form
            for (auto& [u, w] : G) {
                auto B = lattice_from_generators(R, 2, {kv({4, 0}), kv({0, 4}), kv({x, y}), kv({u, w})});
                if (B.key() != A.key()) CHECK(ell_index(S, B) > 2);
            }
        }
    }
    CHECK(keys.size() == 7);
    std::set<std::string> enumerated;
    for (auto& X : sublattices_of_index(S, 4)) enumerated.insert(X.key());
    CHECK(enumerated == keys);
}

TEST_CASE("sublattice counts")
{
    for (long l : {2L, 3L, 5L}) {
        auto R = make_ring(l);
        CHECK(sublattices_of_index(standard_lattice(R, 2), l).size() == std::size_t(l + 1));
        CHECK(sublattices_of_index(standard_lattice(R, 3), l).size() == std::size_t(l * l + l + 1));
        CHECK(sublattices_of_index(standard_lattice(R, 2), 1).size() == 1);
        CHECK(sublattices_of_index(standard_lattice(R, 2), l * l).size() == std::size_t(l * l + l + 1));
    }
    CHECK(sublattices_of_index(standard_lattice(make_ring(2), 2), 8).size() == 15);
    CHECK_THROWS_AS(sublattices_of_index(standard_lattice(make_ring(2), 2), 6), precondition_error);
    CHECK_THROWS_AS(sublattices_of_index(standard_lattice(make_ring(2), 4), 64, 100), budget_error);
    // O-submodules of index l^2 in O over an inert ring: O itself scaled by l only
    auto Ri = make_ring(3, Ext::Inert, -1);
    CHECK(sublattices_of_index(standard_lattice(Ri, 1), 9).size() == 1);
    CHECK(sublattices_of_index(standard_lattice(Ri, 1), 3).empty());
}

TEST_CASE("GL chambers")
{
    auto R = make_ring(2);
    auto C = chamber_from_basis_GL(R, {kv({1, 0}), kv({0, 1})});
    REQUIRE(C.lattices.size() == 3);
    CHECK(C.periodic);
    CHECK(C.lattices[0] == standard_lattice(R, 2));
    CHECK(C.lattices[1] == lattice_from_generators(R, 2, {{{Rat(1, 2), 0}, {0, 0}}, kv({0, 1})}));
    CHECK(C.lattices[2] == scale_pi(standard_lattice(R, 2), -1));
    auto P = chamber_from_basis_GL(R, {kv({0, 1}), kv({1, 0})});
    CHECK(P.lattices[1] == lattice_from_generators(R, 2, {kv({1, 0}), {{0, 0}, {Rat(1, 2), 0}}}));
    CHECK(chamber_from_basis_GL(R, {kv({1})}).lattices.size() == 2);
    auto C3 = chamber_from_basis_GL(make_ring(3), {kv({1, 1, 0}), kv({0, 1, 0}), kv({0, 0, 1})});
    CHECK(C3.lattices.size() == 4);
    CHECK(C3.periodic);
    for (int i = 0; i < 3; ++i) CHECK(ell_index(C3.lattices[i + 1], C3.lattices[i]) == 1);
    CHECK_THROWS_AS(chamber_from_basis_GL(R, {kv({1, 1}), kv({2, 2})}), precondition_error);
}

TEST_CASE("dual lattices on random lattices")
{
    std::mt19937 rng(17);
    std::vector<HermitianSpace> spaces{diagonal_space(make_ring(3), 3)};
    for (auto& R : quad_rings()) spaces.push_back(diagonal_space(R, 2));
    spaces.push_back(hermitian_space(make_ring(3, Ext::Inert, -1), 3, false));
    spaces.push_back(hermitian_space(make_ring(5, Ext::Ramified, 5), 2, false));
    for (auto& H : spaces) {
        for (int it = 0; it < 100; ++it) {
            auto L = random_lattice(H.R, H.n, rng);
            auto D = dual_lattice(L, H);
            CHECK(dual_lattice(D, H) == L);
            CHECK(dual_lattice(scale_pi(L, 1), H) == scale_pi(D, -1));
            KVec extra(H.n);
            extra[rng() % H.n] = {Rat(1, H.R.l), 0};
            auto gens = row_vectors(L);
            gens.push_back(extra);
            auto L1 = lattice_from_generators(H.R, H.n, gens);
            if (L1 == L) continue;
            auto D1 = dual_lattice(L1, H);
            CHECK(contains(D, D1));
            CHECK(!(D == D1));
        }
    }
    auto H = diagonal_space(make_ring(3, Ext::Inert, -1), 2);
    auto S = standard_lattice(H.R, 2);
    CHECK(dual_lattice(S, H) == S);
    CHECK(dual_lattice(scale_pi(S, 1), H) == scale_pi(S, -1));
}

TEST_CASE("preferred lattices")
{
    for (auto& R : quad_rings()) {
        auto H = diagonal_space(R, 2);
        auto S = standard_lattice(R, 2);
        auto p = is_preferred(S, H);
        CHECK(p.preferred);
        CHECK(p.type == 0);
        CHECK(!is_preferred(scale_pi(S, -1), H).preferred);

        // anisotropic kernels: X = {w : (w,w) in O} is preferred in its own space
        for (int n : {1, 2, 3}) {
            for (bool match : {true, false}) {
                auto W = hermitian_space(R, n, match);
                if (W.kernel.empty()) continue;
                HermitianSpace K;
                K.R = R;
                K.n = int(W.kernel.size());
                K.gram.assign(K.n, KVec(K.n));
                for (int i = 0; i < K.n; ++i) K.gram[i][i] = W.gram[W.kernel[i]][W.kernel[i]];
                auto X = anisotropic_kernel_lattice(W);
                CHECK(is_preferred(X, K).preferred);
                // maximality: pi^(shift-1) e_i has (w,w) outside O
                for (int i = 0; i < K.n; ++i) {
                    KVec e(K.n);
                    e[i] = kpow(R, W.kernel_shift[i] - 1);
                    KElt q = form(K, e, e);
                    CHECK(val_p(q.a, R.l).value < 0);
                }
            }
        }
    }
}

TEST_CASE("at most one preferred lattice per class")
{
    std::mt19937 rng(23);
    for (auto& R : quad_rings()) {
        auto H = hermitian_space(R, 2, true);
        auto C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
        int with_pref = 0;
        for (int it = 0; it < 100; ++it) {
            Lattice L = it % 2 ? random_lattice(R, 2, rng)
                               : apply_matrix(random_similitude(H, rng, 1), C.lattices[rng() % C.lattices.size()]);
            int count = 0;
            std::optional<Lattice> found;
            for (long j = -6; j <= 6; ++j) {
                auto M = scale_pi(L, j);
                if (is_preferred(M, H).preferred) {
                    ++count;
                    found = M;
                }
            }
            CHECK(count <= 1);
            auto P = preferred_in_class(L, H);
            CHECK(bool(P) == (count == 1));
            if (P) CHECK(*P == *found);
            if (it % 2 == 0) CHECK(count == 1);
            with_pref += count;
        }
        CHECK(with_pref >= 50);
    }
}

TEST_CASE("U chambers")
{
    for (auto& R : quad_rings()) {
        auto H2 = hermitian_space(R, 2, true);
        auto C = chamber_from_hyperbolic_basis_U(H2, standard_hyperbolic_basis(H2));
        CHECK(C.lattices.size() == 2);
        CHECK(C.periodic);
        CHECK(is_preferred(C.lattices[0], H2).type == 2);
        CHECK(is_preferred(C.lattices[1], H2).type == 0);

        auto H3 = hermitian_space(R, 3, false);
        CHECK(H3.r == 1);
        CHECK(chamber_from_hyperbolic_basis_U(H3, standard_hyperbolic_basis(H3)).lattices.size() == 2);

        auto H1 = hermitian_space(R, 1, false);
        auto C1 = chamber_from_hyperbolic_basis_U(H1, {});
        REQUIRE(C1.lattices.size() == 1);
        CHECK(C1.lattices[0] == anisotropic_kernel_lattice(H1));

        for (int n = 2; n <= 5; ++n) {
            for (bool m : {true, false}) {
                auto H = hermitian_space(R, n, m);
                auto Cn = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
                CHECK(int(Cn.lattices.size()) == H.r + 1);
                for (std::size_t i = 0; i + 1 < Cn.lattices.size(); ++i) {
                    CHECK(contains(Cn.lattices[i + 1], Cn.lattices[i]));
                    CHECK(!(Cn.lattices[i + 1] == Cn.lattices[i]));
                }
            }
        }
        auto bad = standard_hyperbolic_basis(H2);
        bad[0][0] = {2, 0};
        CHECK_THROWS_AS(chamber_from_hyperbolic_basis_U(H2, bad), precondition_error);
    }
}

TEST_CASE("isotropy table and Witt indices")
{
    for (auto& R : quad_rings()) {
        for (auto& row : isotropy_table(R, 5)) {
            CHECK(row.r_table == row.r_computed);
            int expect = row.label == "n/2" ? row.n / 2 : row.label == "(n-2)/2" ? (row.n - 2) / 2 : (row.n - 1) / 2;
            CHECK(row.r_computed == expect);
            if (row.n % 2 == 0) CHECK(row.label == (row.disc_match ? "n/2" : "(n-2)/2"));
        }
    }
}

TEST_CASE("GU action")
{
    std::mt19937 rng(31);
    for (auto& R : quad_rings()) {
        for (int n : {2, 4}) {
            auto H = hermitian_space(R, n, true);
            auto C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
            KMat id = kmat_identity(n);
            KMat pi = id;
            for (auto& row : pi) {
                for (auto& x : row) {
                    if (!(x == KElt{})) x = kpi(R);
                }
            }
            for (auto& L : C.lattices) {
                CHECK(gu_act(id, L, H) == L);
                CHECK(gu_act(pi, L, H) == L);
            }
            CHECK_THROWS_AS(gu_act(id, scale_pi(C.lattices[0], -1), H), precondition_error);
            KMat bad = id;
            bad[0][1] = {1, 0};
            CHECK_THROWS_AS(gu_act(bad, C.lattices[0], H), precondition_error);

            int samples = n == 2 ? 100 : 20;
            for (int it = 0; it < samples; ++it) {
                Rat nu1 = rng() % 2 ? Rat(R.l) : Rat(1), nu2 = rng() % 2 ? Rat(R.l) : Rat(1);
                KMat g = random_similitude(H, rng, nu1), h = random_similitude(H, rng, nu2);
                CHECK(similitude_norm(g, H) == nu1);
                auto& L = C.lattices[rng() % C.lattices.size()];
                auto lhs = gu_act(g, gu_act(h, L, H), H);
                auto rhs = gu_act(kmat_mul(R, g, h), L, H);
                CHECK(lhs == rhs);
                long t = is_preferred(L, H).type;
                long tg = is_preferred(gu_act(g, L, H), H).type;
                bool odd = nu1 != 1 && R.ext == Ext::Inert;
                CHECK(tg == (odd ? n - t : t));
            }
        }
    }
}

TEST_CASE("SL census")
{
    auto c2 = link_census_SL(make_ring(2), 2);
    CHECK(c2.valence == 3);
    CHECK(c2.chambers == 3);
    CHECK(c2.min_panel >= 3);
    auto c3 = link_census_SL(make_ring(2), 3);
    CHECK(c3.chambers == 21);
    CHECK(c3.valence == 14);
    CHECK(c3.min_panel == 3);
    CHECK(link_census_SL(make_ring(3), 2).valence == 4);
    CHECK(link_census_SL(make_ring(3), 3).chambers == 13 * 4);
}

TEST_CASE("balls and DOT")
{
    auto B = ball_SL(make_ring(2), 2, 2);
    CHECK(B.vertices.size() == 10);
    CHECK(B.edges.size() == 9);
    int far = 0;
    for (int d : B.dist) far += d == 2;
    CHECK(far == 6);
    auto dot = to_dot(B);
    CHECK(dot.rfind("graph ball {", 0) == 0);
    CHECK(dot.find("v0 -- v1;") != std::string::npos);

    auto H = hermitian_space(make_ring(3, Ext::Inert, -1), 2, true);
    auto U = ball_U(H, 1);
    CHECK(U.vertices.size() > 1);
    for (auto& L : U.vertices) CHECK(is_preferred(L, H).preferred);
    for (auto& [a, b] : U.edges) CHECK((a == 0 || b == 0));
}

TEST_CASE("resolution skeleton")
{
    for (auto& R : quad_rings()) {
        auto H = hermitian_space(R, 2, true);
        auto top = resolution_skeleton(H, 1);
        CHECK(top.size() == 1);
        auto v = resolution_skeleton(H, 0);
        REQUIRE(v.size() == 2);
        CHECK(v[0].types == std::vector<long>{2});
        CHECK(v[1].types == std::vector<long>{0});
        for (auto& o : v) CHECK(!o.undecided);
        auto H1 = hermitian_space(R, 1, true);
        CHECK(resolution_skeleton(H1, 0).size() == 1);
        CHECK_THROWS_AS(resolution_skeleton(H1, 1), precondition_error);
        auto H5 = hermitian_space(R, 5, false);
        CHECK(resolution_skeleton(H5, 1).size() == 3);
    }
}

TEST_CASE("intern table under concurrent readers")
{
    auto R = make_ring(2);
    auto subs = sublattices_of_index(standard_lattice(R, 2), 8);
    LatticeIntern in;
    std::vector<std::thread> th;
    std::vector<std::vector<int>> got(4);
    for (int t = 0; t < 4; ++t) {
        th.emplace_back([&, t] {
            for (auto& L : subs) got[t].push_back(in.id(L));
        });
    }
    for (auto& x : th) x.join();
    CHECK(in.size() == subs.size());
    for (int t = 1; t < 4; ++t) CHECK(got[t] == got[0]);
}
