// One PASS/FAIL line per acceptance criterion; argv[1] is the CLI binary.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "chromo/building.hpp"
#include "chromo/congruence.hpp"
#include "chromo/greek.hpp"
#include "chromo/hermitian.hpp"
#include "chromo/hondatate.hpp"
#include "chromo/level1.hpp"
#include "chromo/newton.hpp"

using namespace chromo;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, double limit_s, const std::function<bool(std::ostream&)>& body)
{
    std::ostringstream log;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(log);
    } catch (const std::exception& e) {
        log << "  exception: " << e.what() << "\n";
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit_s <= 0 || s < limit_s;
    if (!in_time) log << "  over the time limit of " << limit_s << " s\n";
    bool pass = ok && in_time;
    if (!pass) ++failures;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", s);
    std::cout << (pass ? "PASS" : "FAIL") << " " << n << " " << what << " (" << buf << " s";
    if (limit_s > 0) std::cout << ", limit " << limit_s << " s";
    std::cout << ")\n" << log.str() << std::flush;
}

// ---- 7 ----

std::set<long> prime_support(long x)
{
    std::set<long> s;
    for (auto q : prime_factors(std::uint64_t(std::labs(x)))) s.insert(long(q));
    return s;
}

// local data of a global diagonal form at every place where it can be nontrivial
GlobalFormSpec spec_of_diagonal(const QuadImagField& F, const std::vector<Rat>& e)
{
    std::set<long> places{2};
    for (long q : prime_support(F.d)) places.insert(q);
    for (auto& x : e) {
        for (long q : prime_support(x.get_num().get_si())) places.insert(q);
        for (long q : prime_support(x.get_den().get_si())) places.insert(q);
    }
    GlobalFormSpec s;
    s.F = F;
    s.n = int(e.size());
    for (long v : places) s.local.push_back(local_class_U(F, s.n, v, e));
    s.local.push_back(local_class_U(F, s.n, kInfinity, e));
    return s;
}

// ---- 8 ----

Lattice random_lattice(const LocalRing& R, int n, std::mt19937& rng)
{
    while (true) {
        std::vector<KVec> g;
        for (int i = 0; i < n; ++i) {
            KVec v(n);
            for (auto& x : v) {
                x.a = Rat(long(rng() % 7) - 3, rng() % 3 ? 1 : R.l);
                x.a.canonicalize();
                if (R.f() == 2) x.b = Rat(long(rng() % 5) - 2);
            }
            g.push_back(v);
        }
        try {
            return lattice_from_generators(R, n, g);
        } catch (const precondition_error&) {
        }
    }
}

// random element of U(H) times a scalar, H split of rank 2
KMat random_unitary_move(const HermitianSpace& H, std::mt19937& rng)
{
    const LocalRing& R = H.R;
    KMat g = kmat_identity(2);
    for (int step = 0; step < 4; ++step) {
        KMat h = kmat_identity(2);
        switch (rng() % 3) {
        case 0: {
            KElt lam;
            do {
                lam = {long(rng() % 7) - 3, long(rng() % 5) - 2};
            } while (lam.a * lam.a - Rat(R.d) * lam.b * lam.b == 0);
            h[0][0] = lam;
            h[1][1] = kinv(R, kconj(lam));
            break;
        }
        case 1:
            h[0][1] = {0, long(rng() % 5) - 2};
            break;
        default:
            h[0][0] = h[1][1] = {0, 0};
            h[0][1] = h[1][0] = {1, 0};
        }
        g = kmat_mul(R, h, g);
    }
    return g;
}

// ---- 10 ----

struct Run {
    int status = -1;
    std::string out;
};

Run run_cli(const std::string& bin, const std::string& args, const fs::path& cache)
{
    std::string cmd = "'" + bin + "' --json --cache-dir '" + cache.string() + "' " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    int st = pclose(f);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

int main(int argc, char** argv)
{
    std::string cli = argc > 1 ? argv[1] : "";

    criterion(1, "alpha family matches Bernoulli denominators, p in {5,7}, i <= p^2", 30, [](std::ostream& log) {
        bool ok = true;
        long checked = 0;
        for (long p : {5L, 7L}) {
            for (long i = 1; i <= p * p; ++i) {
                long t = (p - 1) * i;
                auto a = alpha_max_j(p, t);
                auto b = bernoulli_quotient_denominator_val(p, int(t));
                ++checked;
                if (!(a == b)) {
                    ok = false;
                    log << "  mismatch p=" << p << " i=" << i << "\n";
                }
            }
        }
        log << "  " << checked << " weights compared\n";
        return ok;
    });

    criterion(2, "A_(t;j) has exponent p^j with E_t of full order, p=5, l=2, i <= 25", 300, [](std::ostream& log) {
        bool ok = true;
        for (int i = 1; i <= 25; ++i) {
            int t = 4 * i;
            int j = int(val_p(Int(i), 5).value) + 1;
            auto G = compute_A(5, 2, t, j, 0, sturm_bound(t, 2, 0));
            int e = member_order(G, eisenstein(t, G.work_prec));
            if (G.exponent_exp != j || e != j) {
                ok = false;
                log << "  i=" << i << ": exponent 5^" << G.exponent_exp << ", E_t order 5^" << e << ", want 5^" << j
                    << "\n";
            }
        }
        return ok;
    });

    criterion(3, "E_{p-1}^{p^{k-1}} = 1 mod p^k to q^50, p in {5,7,11}, k <= 3", 10, [](std::ostream& log) {
        bool ok = true;
        for (long p : {5L, 7L, 11L}) {
            for (int k = 1; k <= 3; ++k) {
                auto E = eisenstein(int(p - 1), 50).reduce(p, k).pow(int(ipow(p, k - 1)));
                auto one = QSeries::constant(Rat(1), 50).reduce(p, k);
                if (!(E == one)) {
                    ok = false;
                    log << "  fails at p=" << p << " k=" << k << "\n";
                }
            }
        }
        return ok;
    });

    criterion(4, "literal beta predicate is contained in compute_B witnesses, p=5", 600, [](std::ostream& log) {
        const long p = 5;
        bool ok = true;
        int accepted = 0, found = 0, amb = 0, old_found = 0, na = 0;
        for (long i = 1; i <= 5; ++i) {
            for (long j = 1; j <= 5; ++j) {
                for (long k = 1; k <= 2; ++k) {
                    auto v = beta_invariant_exists(p, i, j, k);
                    int T = int((p * p - 1) * i), J = int((p - 1) * j);
                    int n = sturm_bound(T, 2, 0);
                    accepted += v.exists;
                    // B is only defined when the drop is a multiple of (p-1)p^(k-1)
                    if (J % ((p - 1) * ipow(p, int(k) - 1)) != 0) {
                        ++na;
                        if (v.exists) {
                            ok = false;
                            log << "  predicate accepts (" << i << "," << j << "," << k << ") where B is undefined\n";
                        }
                        continue;
                    }
                    auto G = compute_B(p, 2, T, J, int(k), 0, n);
                    auto O = compute_B(p, 2, T, J, int(k), 0, n, WitnessSpace::Old);
                    bool w = G.verdict == Verdict::WitnessFound;
                    found += w;
                    old_found += O.verdict == Verdict::WitnessFound;
                    if (v.exists && !w) {
                        ok = false;
                        log << "  predicate accepts (" << i << "," << j << "," << k << ") but " << to_string(G.verdict)
                            << "\n";
                    }
                    if (!v.exists && w) {
                        bool nu0 = val_p(Int(i), p).value == 0;
                        if (nu0) ++amb;
                        else ok = false;
                        log << "  " << (nu0 ? "nu_p(i)=0 ambiguity" : "UNEXPLAINED") << ": witness at (" << i << ","
                            << j << "," << k << "), t=" << v.t << ", predicate rejects (" << v.reason << ")\n";
                    }
                }
            }
        }
        log << "  predicate accepts " << accepted << ", extended space finds " << found << ", old space finds "
            << old_found << ", nu=0 disagreements " << amb << ", undefined drops " << na << "\n";
        return ok;
    });

    criterion(5, "Newton polygons: figure, duality, polarization on 1000 random polygons", 5, [](std::ostream& log) {
        bool ok = true;
        auto fig = from_slopes({{1, 3, 1}, {1, 2, 1}, {1, 1, 1}});
        std::vector<std::pair<long, long>> want{{0, 0}, {3, 1}, {5, 2}, {6, 3}};
        if (render_ascii(fig).breakpoints != want || total(fig) != std::pair<long, long>{6, 3}) {
            ok = false;
            log << "  height-6 figure differs\n";
        }
        std::mt19937 rng(2024);
        for (int it = 0; it < 1000; ++it) {
            std::vector<Segment> v;
            int m = rng() % 5;
            for (int s = 0; s < m; ++s) {
                long h = 1 + rng() % 6;
                v.push_back({long(rng() % (h + 1)), h, long(1 + rng() % 3)});
            }
            auto P = from_slopes(v);
            auto [h, d] = total(P);
            auto D = dual(P);
            if (!(dual(D) == P) || total(D) != std::pair<long, long>{h, h - d} || !is_polarizable(direct_sum(P, D))) {
                ok = false;
                log << "  random polygon " << it << " fails\n";
            }
        }
        return ok;
    });

    criterion(6, "Honda-Tate split type, 2 <= n <= 12, and zero Kottwitz shift", 1, [](std::ostream& log) {
        bool ok = true;
        for (long n = 2; n <= 12; ++n) {
            auto t = split_type(5, n);
            auto I = invariants_and_dimension(t);
            if (I.m != n || I.dim != Rat(n) || I.inv.at("u") != Rat(1, n) || !validate_type(t).empty()) {
                ok = false;
                log << "  n=" << n << ": m=" << I.m.get_str() << " dim=" << rat_str(I.dim) << "\n";
            }
            if (kottwitz_invariants(t, {}) != I.inv) {
                ok = false;
                log << "  n=" << n << ": Kottwitz shift by zero is not the identity\n";
            }
        }
        return ok;
    });

    criterion(7, "Hilbert product formula; global existence iff sum of xi vanishes", 30, [](std::ostream& log) {
        bool ok = true;
        std::mt19937 rng(7);
        for (int it = 0; it < 200; ++it) {
            long a = 0, b = 0;
            while (a == 0) a = long(rng() % 20001) - 10000;
            while (b == 0) b = long(rng() % 20001) - 10000;
            std::set<long> places{2};
            for (long q : prime_support(a)) places.insert(q);
            for (long q : prime_support(b)) places.insert(q);
            int prod = hilbert_symbol(Rat(a), Rat(b), kInfinity);
            for (long v : places) prod *= hilbert_symbol(Rat(a), Rat(b), v);
            if (prod != 1) {
                ok = false;
                log << "  product formula fails for (" << a << "," << b << ")\n";
            }
        }
        int genuine = 0, flipped = 0;
        for (int it = 0; it < 500; ++it) {
            QuadImagField F(it % 2 ? -5 : -1);
            int n = 1 + rng() % 4;
            std::vector<Rat> e;
            for (int i = 0; i < n; ++i) {
                long x = 0;
                while (x == 0) x = long(rng() % 61) - 30;
                e.push_back(Rat(x));
            }
            auto s = spec_of_diagonal(F, e);
            bool flip = it % 4 >= 2;
            if (flip) {
                std::vector<std::size_t> ns;
                for (std::size_t k = 0; k < s.local.size(); ++k) {
                    if (s.local[k].kind == LocalFormClass::Kind::Nonsplit) ns.push_back(k);
                }
                auto& c = s.local[ns[rng() % ns.size()]];
                c.cls ^= 1;
            }
            int xi = 0;
            for (auto& c : s.local) xi += c.kind == LocalFormClass::Kind::Nonsplit ? c.cls : c.neg;
            bool sum_zero = xi % 2 == 0;
            bool got = global_exists_U(s);
            (flip ? flipped : genuine) += 1;
            if (got != sum_zero || got == flip) {
                ok = false;
                log << "  spec " << it << " (d=" << F.d << ", n=" << n << (flip ? ", flipped" : "") << ") misjudged\n";
            }
        }
        log << "  " << genuine << " specs from global forms, " << flipped << " with one local class flipped\n";
        return ok;
    });

    criterion(8, "building census, duality, preferred uniqueness, Witt index table", 120, [](std::ostream& log) {
        bool ok = true;
        auto c2 = link_census_SL(make_ring(2), 2);
        auto c3 = link_census_SL(make_ring(2), 3);
        log << "  SL2(Q2) valence " << c2.valence << ", SL3(Q2) chambers per vertex " << c3.chambers << "\n";
        if (c2.valence != 3 || c3.chambers != 21) ok = false;

        std::vector<LocalRing> rings{make_ring(3, Ext::Inert, -1), make_ring(3, Ext::Ramified, 3),
                                     make_ring(5, Ext::Inert, 2), make_ring(5, Ext::Ramified, -5)};
        std::mt19937 rng(8);
        for (auto& R : rings) {
            auto H = hermitian_space(R, 2, true);
            auto C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
            int bad_dual = 0, bad_pref = 0;
            for (int it = 0; it < 100; ++it) {
                auto L = random_lattice(R, 2, rng);
                auto D = dual_lattice(L, H);
                if (!(dual_lattice(D, H) == L)) ++bad_dual;

                Lattice M = it % 2 ? L : apply_matrix(random_unitary_move(H, rng), C.lattices[rng() % C.lattices.size()]);
                int count = 0;
                std::optional<Lattice> found;
                for (long k = -6; k <= 6; ++k) {
                    auto S = scale_pi(M, k);
                    if (is_preferred(S, H).preferred) {
                        ++count;
                        found = S;
                    }
                }
                auto P = preferred_in_class(M, H);
                if (count > 1 || bool(P) != (count == 1) || (P && !(*P == *found)) || (it % 2 == 0 && count != 1)) {
                    ++bad_pref;
                }
            }
            if (bad_dual || bad_pref) {
                ok = false;
                log << "  " << to_string(R) << ": " << bad_dual << " dual failures, " << bad_pref
                    << " preferred-class failures\n";
            }
            for (auto& row : isotropy_table(R, 5)) {
                int expect = row.label == "n/2" ? row.n / 2 : row.label == "(n-2)/2" ? (row.n - 2) / 2 : (row.n - 1) / 2;
                bool lab = row.n % 2 ? row.label == "(n-1)/2" : row.label == (row.disc_match ? "n/2" : "(n-2)/2");
                if (row.r_computed != expect || row.r_table != row.r_computed || !lab) {
                    ok = false;
                    log << "  " << to_string(R) << " n=" << row.n << (row.disc_match ? " match" : " nomatch")
                        << ": Witt index " << row.r_computed << ", table " << row.label << "\n";
                }
            }
        }
        return ok;
    });

    criterion(9, "level 1: image of J orders, Cl(Q(sqrt -5)), generator prime for Q(i) at 5", 30, [](std::ostream& log) {
        bool ok = true;
        for (auto [p, k] : {std::pair<long, long>{5, 2}, {7, 3}}) {
            auto T = j_homotopy_orders(p, k, p - 1, (p - 1) * p * p);
            for (auto& r : T.rows) {
                if (r.t % (p - 1)) continue;
                long i = r.t / (p - 1);
                if (r.nu.infinite || r.nu.value != val_p(Int(i), p).value + 1) {
                    ok = false;
                    log << "  p=" << p << " i=" << i << " nu=" << r.nu.value << "\n";
                }
            }
        }
        auto G = class_group(QuadImagField(-5));
        if (G.h() != 2 || G.forms != std::vector<BQForm>{{1, 0, 5}, {2, 2, 3}} || G.order(1) != 2) {
            ok = false;
            log << "  class group of Q(sqrt -5) differs\n";
        }
        auto g = find_generator_prime(QuadImagField(-1), 5);
        log << "  l = " << g.l << ", q = " << g.q_mod_p2.get_str() << " mod 25\n";
        if (g.l != 13 || g.q_mod_p2 != 3) ok = false;
        return ok;
    });

    criterion(10, "CLI --json output byte-identical with cold and warm cache", 0, [&cli](std::ostream& log) {
        if (cli.empty()) {
            log << "  no CLI path given\n";
            return false;
        }
        // spec examples first, then one query per remaining subcommand
        struct Ex {
            std::string args;
            std::string needle;  // must appear in the JSON
        };
        std::vector<Ex> ex{
            {"greek alpha -p 5 -t 4 -j 1", "\"order\": \"5\""},
            {"newton --slopes 1/3,1/2,1", "\"height\": 6"},
            {"level1 classgroup -d -5", "\"h\": 2"},
            {"greek beta -p 5 -i 5 -j 1 -k 1", "\"t\": 116"},
            {"congruence A -p 5 -t 20 -j 2", "\"exponent\": \"25\""},
            {"congruence B -p 5 -t 24 -j 4 -k 1", "witness-found"},
            {"congruence serre -p 5 -k 2 --f1 1 --f2 E4^5", "consistent"},
            {"hondatate --split 4 -p 5", "\"m\": \"4\""},
            {"forms local -d -5 -n 2 --place 5 --entries 1,2", "\"kind\""},
            {"forms global -d -1 -n 2 --local 2:1 --local inf:1,1", "\"exists_U\": true"},
            {"building chamber -l 2 -n 3", "\"periodic\": true"},
            {"building ball -l 2 -n 2 --radius 2", "\"vertices\": 10"},
            {"building skeleton -l 3 -n 2 --ext inert --d -1", "\"orbits\""},
            {"level1 genprime -d -1 -p 5", "\"l\": 13"},
            {"level1 jorders -p 5 -k 2 --tmax 20", "\"order\": \"25\""},
            {"level1 decomp -d -5 -p 3", "\"f\": 2"},
        };
        auto dir = fs::temp_directory_path() / ("chromo-accept-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        bool ok = true;
        for (auto& e : ex) {
            auto cold = run_cli(cli, e.args, dir);
            auto warm = run_cli(cli, e.args, dir);
            bool same = cold.status == 0 && warm.status == 0 && cold.out == warm.out && !cold.out.empty();
            bool has = cold.out.find(e.needle) != std::string::npos;
            if (!same || !has) {
                ok = false;
                log << "  " << e.args << ": exit " << cold.status << "/" << warm.status
                    << (cold.out == warm.out ? "" : ", outputs differ") << (has ? "" : ", missing " + e.needle) << "\n";
            }
        }
        int cached = 0;
        for (auto& f : fs::directory_iterator(dir)) cached += f.path().extension() == ".json";
        log << "  " << ex.size() << " commands, " << cached << " cached series\n";
        if (cached == 0) ok = false;
        fs::remove_all(dir);
        return ok;
    });

    std::cout << (failures ? "FAILED " + std::to_string(failures) + " of 10" : "ALL 10 PASS") << "\n";
    return failures ? 1 : 0;
}
