#ifndef DARMON_TREE_HPP_
#define DARMON_TREE_HPP_

/* The Bruhat-Tits tree of PGL_2(Q_ell).
 *
 * A vertex is the homothety class of a Z_ell-lattice in Q_ell^2. Each
 * class has a unique primitive representative (contained in Z_ell^2 but
 * not in ell Z_ell^2) with column Hermite basis (ell^a, 0), (b, ell^d),
 * 0 <= b < ell^a; its distance to the standard vertex v* is a + d.
 * Matrices act on column vectors, so the end attached to x in P^1(Q_ell)
 * is the line through (x, 1). */

#include "darmon/intmat.hpp"
#include "darmon/quad.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace darmon {

struct TreeVertex {
    long ell = 2;
    int a = 0, d = 0;
    mpz_class b = 0;

    int dist() const { return a + d; }          /* distance to v* */
    int parity() const { return (a + d) & 1; }
    bool even() const { return parity() == 0; }
    M2 basis() const;
    std::string str() const;
    bool operator==(TreeVertex const & o) const { return ell == o.ell && a == o.a && d == o.d && b == o.b; }
    bool operator!=(TreeVertex const & o) const { return !(*this == o); }
    bool operator<(TreeVertex const & o) const;
};

struct TreeEdge {
    TreeVertex s, t;
    bool even() const { return s.even(); }
    TreeEdge reversed() const { return {t, s}; }
    bool operator==(TreeEdge const & o) const { return s == o.s && t == o.t; }
    bool operator<(TreeEdge const & o) const { return s < o.s || (s == o.s && t < o.t); }
    std::string str() const;
};

/* v* and the target of e* = (v*, diag(1, ell) v*) */
TreeVertex vstar(long ell);
TreeVertex vhat(long ell);
TreeEdge estar(long ell);

/* class of the lattice spanned by the columns of B (det B != 0) */
TreeVertex vertex_of_basis(M2 const & B, long ell);
/* class of the Z_ell-span of a finite set of vectors of full rank */
TreeVertex vertex_of_span(std::vector<std::pair<mpq_class, mpq_class>> const & gens, long ell);

TreeVertex act(M2 const & g, TreeVertex const & v);
TreeEdge act(M2 const & g, TreeEdge const & e);

/* the ell + 1 neighbours, in a fixed order */
std::vector<TreeVertex> neighbors(TreeVertex const & v);
bool adjacent(TreeVertex const & v, TreeVertex const & w);
/* the neighbour of v (v != v*) one step closer to v* */
TreeVertex parent(TreeVertex const & v);
/* v* = u_0, u_1, ..., u_n = v */
std::vector<TreeVertex> path_from_vstar(TreeVertex const & v);
/* the vertices of the reduced path from v to w, endpoints included */
std::vector<TreeVertex> geodesic_vertices(TreeVertex const & v, TreeVertex const & w);
int distance(TreeVertex const & v, TreeVertex const & w);

/* The path from v to w as even edges e_1, ..., e_n: each step u_{i-1} u_i
 * is kept if u_{i-1} is even and reversed otherwise. For even v this
 * gives s(e_1) = v, t(e_i) = t(e_{i+1}) for odd i, s(e_i) = s(e_{i+1})
 * for even i, and s(e_n) = w when n is even. */
std::vector<TreeEdge> even_path(TreeVertex const & v, TreeVertex const & w);

/* the reduction r(tau) of tau in K_ell - Q_ell, for K = Q(sqrt delta)
 * with ell inert; tau = a + b theta with theta = sqrt(delta) (ell odd) or
 * (1 + sqrt(delta))/2 (ell = 2) reduces to the class of (b, 0), (a, 1) */
TreeVertex reduce_point(QuadNumber const & tau, long ell);

/* coset representatives g_0 = 1, ..., g_ell of Gamma_0(M ell) in
 * Gamma_0(M); every g_i is parabolic, so its class in H_1(X_0(M)) is 0 */
std::vector<M2> coset_reps(long M, long ell);

/* The radial system of representatives. For even v, gamma_v v = v*; for
 * odd v, gamma_v v = vhat*. They are built by walking out from v*:
 * crossing an edge from an even vertex multiplies on the left by the g_i
 * with gamma_u (u -> w) = g_i^-1 e*, from an odd vertex by the
 * ghat_j = omega g_j omega^-1. For an even edge e, gamma_e = g_i gamma_s(e)
 * with gamma_s(e) t(e) = g_i^-1 vhat*. */
class RadialSystem {
  public:
    /* perturb != 0 replaces g_i (i > 0) by k_i g_i with k_i in Gamma_0(M ell)
     * drawn from the seed, giving another radial system */
    RadialSystem(long M, long ell, std::uint64_t perturb = 0);

    long M, ell;
    M2 omega;
    std::vector<M2> g, ghat;
    std::vector<TreeVertex> nbr_star;      /* g_i^-1 vhat* */
    std::vector<TreeVertex> nbr_hat;       /* ghat_j^-1 v* */

    M2 gamma_vertex(TreeVertex const & v) const;
    /* e must be even */
    M2 gamma_edge(TreeEdge const & e) const;
    /* the word of indices (i for g_i, ~j for ghat_j) read from v* */
    std::vector<std::string> word(TreeVertex const & v) const;
    std::size_t cache_size() const;

  private:
    struct cache {
        mutable std::shared_mutex mx;
        std::map<TreeVertex, M2> gv;
    };
    std::shared_ptr<cache> memo = std::make_shared<cache>();
    std::size_t step_index(TreeVertex const & u, M2 const & gu, TreeVertex const & w) const;
};

} // namespace darmon

#endif /* DARMON_TREE_HPP_ */
