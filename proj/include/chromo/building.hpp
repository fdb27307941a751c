#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "chromo/arith.hpp"

namespace chromo {

enum class Ext { None, Inert, Ramified };

// Q_l, or Q_l(sqrt d); quadratic extensions need l odd so that O = Z_l[sqrt d]
struct LocalRing {
    long l = 2;
    Ext ext = Ext::None;
    long d = 0;

    int f() const { return ext == Ext::None ? 1 : 2; }
    int res_deg() const { return ext == Ext::Inert ? 2 : 1; }
};
LocalRing make_ring(long l, Ext ext = Ext::None, long d = 0);
std::string to_string(const LocalRing& R);

struct KElt {
    Rat a, b;  // a + b sqrt(d)
    bool operator==(const KElt&) const = default;
};
using KVec = std::vector<KElt>;
using KMat = std::vector<KVec>;  // row-major, n x n

KElt kmul(const LocalRing& R, const KElt& x, const KElt& y);
KElt kconj(const KElt& x);
KElt kinv(const LocalRing& R, const KElt& x);
KElt kpi(const LocalRing& R);  // uniformizer
KMat kmat_mul(const LocalRing& R, const KMat& A, const KMat& B);
KMat kmat_identity(int n);

// Z_(l)-lattice of full rank in K^n, rows in canonical upper triangular Hermite form
// over Z_(l); coordinates interleaved (a_0, b_0, a_1, b_1, ...) when f = 2
struct Lattice {
    LocalRing R;
    int n = 0;
    std::vector<std::vector<Rat>> H;

    int N() const { return n * R.f(); }
    std::string key() const;
    bool operator==(const Lattice& o) const { return H == o.H; }
};

std::vector<std::vector<Rat>> hnf_rows(std::vector<std::vector<Rat>> rows, int N, long l);
Lattice lattice_from_generators(const LocalRing& R, int n, const std::vector<KVec>& gens);
Lattice standard_lattice(const LocalRing& R, int n);
Lattice hnf_normalize(const Lattice& L);
bool contains(const Lattice& big, const Lattice& small);
long ell_index(const Lattice& big, const Lattice& small);  // log_l [big : small]
long o_length(const Lattice& big, const Lattice& small);    // length as O-module
Lattice scale_pi(const Lattice& L, long k);
Lattice lattice_sum(const Lattice& A, const Lattice& B);
Lattice apply_matrix(const KMat& g, const Lattice& L);
std::vector<KVec> row_vectors(const Lattice& L);  // Z_l basis rows as K-vectors
Lattice class_rep(const Lattice& L);                 // homothety-class normal form

std::vector<Lattice> sublattices_of_index(const Lattice& L, long s, long budget = 100000);

struct LatticeChain {
    std::vector<Lattice> lattices;
    bool periodic = false;  // top <= pi^-1 bottom
};
LatticeChain chamber_from_basis_GL(const LocalRing& R, const std::vector<KVec>& v);

struct HermitianSpace {
    LocalRing R;
    int n = 0;
    KMat gram;
    bool disc_match = true;
    Rat a;                    // generator of Q_l^x / N(K^x)
    int r = 0;                // Witt index from the table
    std::vector<int> kernel;  // coordinates of the anisotropic kernel
    std::vector<long> kernel_shift;  // X = sum pi^shift O e_k over kernel coordinates
};
HermitianSpace hermitian_space(const LocalRing& R, int n, bool disc_match);
KElt form(const HermitianSpace& H, const KVec& x, const KVec& y);
Rat non_norm_generator(const LocalRing& R);
bool is_norm(const LocalRing& R, const Rat& x);
int witt_index(const HermitianSpace& H);  // by Witt decomposition of a diagonalization

Lattice dual_lattice(const Lattice& L, const HermitianSpace& H);

struct PreferredInfo {
    bool preferred = false;
    long type = -1;  // O-length of L^#/L when preferred
};
PreferredInfo is_preferred(const Lattice& L, const HermitianSpace& H);
std::optional<Lattice> preferred_in_class(const Lattice& L, const HermitianSpace& H);

Lattice anisotropic_kernel_lattice(const HermitianSpace& H);  // X, inside the kernel coordinates
std::vector<KVec> standard_hyperbolic_basis(const HermitianSpace& H);
LatticeChain chamber_from_hyperbolic_basis_U(const HermitianSpace& H, const std::vector<KVec>& v);

// similitude factor, nullopt if g is not a similitude
std::optional<Rat> similitude_norm(const KMat& g, const HermitianSpace& H);
Lattice gu_act(const KMat& g, const Lattice& L, const HermitianSpace& H);

struct LinkCensus {
    long valence = 0;
    long chambers = 0;
    long min_panel = 0;  // fewest chambers on a panel through the vertex
};
LinkCensus link_census_SL(const LocalRing& R, int n, long budget = 100000);

// thread-safe interning of canonical lattices
class LatticeIntern {
public:
    int id(const Lattice& L);
    std::optional<int> find(const Lattice& L) const;
    Lattice at(int i) const;
    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, int> ids_;
    std::vector<Lattice> all_;
};

struct Ball {
    std::vector<Lattice> vertices;  // class representatives, centre first
    std::vector<int> dist;
    std::vector<std::pair<int, int>> edges;
};
std::vector<Lattice> neighbors_SL(const Lattice& L, long budget = 100000);
Ball ball_SL(const LocalRing& R, int n, int radius, long budget = 100000);
Ball ball_U(const HermitianSpace& H, int radius, long budget = 100000);
std::string to_dot(const Ball& B);

struct SkeletonOrbit {
    std::vector<int> faces;  // indices into the base chamber
    std::vector<long> types;
    std::vector<Lattice> stabilized;
    bool undecided = false;
};
std::vector<SkeletonOrbit> resolution_skeleton(const HermitianSpace& H, int s);

struct IsotropyRow {
    int n = 0;
    bool disc_match = true;
    int r_table = 0;
    int r_computed = 0;
    std::string label;  // "n/2", "(n-2)/2", "(n-1)/2"
    int building_dim = 0;
};
std::vector<IsotropyRow> isotropy_table(const LocalRing& R, int n_max);

}  // namespace chromo
