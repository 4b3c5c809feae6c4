#ifndef DARMON_COCYCLE_HPP_
#define DARMON_COCYCLE_HPP_

/* The measure-valued cocycles on the tree for Gamma_ell, the group of
 * determinant one elements of M_0(M) tensor Z[1/ell].
 *
 * mu_gamma(e) = [gamma_e gamma gamma_{gamma^-1 e}^-1] lives in
 * H = H_1(X_0(M ell)) / sat(pi_1^* + pi_2^*), the ell-new quotient, and
 * m~_gamma(v) = [g_{gamma,v}] in H_1(X_0(M)). Both are exact; the F_p
 * projections pr_1, pr_2, pr_3 are built on top of them. */

#include "darmon/ellcurve.hpp"
#include "darmon/intmat.hpp"
#include "darmon/modsym.hpp"
#include "darmon/quad.hpp"
#include "darmon/tree.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <vector>

namespace darmon {

/* gamma in Gamma_ell: det 1, entries in Z[1/ell], M | c */
bool in_gamma_ell(M2 const & g, long M, long ell);

/* a seeded word of length len alternating elements of Gamma_0(M) and of
 * omega Gamma_0(M) omega^-1 */
M2 random_gamma_ell(std::uint64_t seed, long M, long ell, int len);

/* a point tau of K_ell - Q_ell with r(tau) = v*, K = Q(sqrt delta) for
 * the least suitable delta > 1 in which ell is inert */
QuadNumber standard_point(long ell);

class Cocycle {
  public:
    Cocycle(ModularSymbols const & HM, ModularSymbols const & HMl, long ell, std::uint64_t perturb = 0);

    long M, ell;
    ModularSymbols const & HM;     /* level M */
    ModularSymbols const & HMl;    /* level M ell */
    RadialSystem Y;
    ZMat up;                       /* r(M ell) x 2 r(M): columns pi_1^* e_j, pi_2^* e_j */
    ZMat down1, down2;             /* r(M) x r(M ell): pi_1_*, pi_2_* */
    ZMat quot;                     /* rows cut out sat(im up): H_1(X_0(M ell)) -> H */

    std::size_t rank_H() const { return quot.nr; }
    ZVec to_H(ZVec const & x) const { return quot * x; }

    /* g_{gamma,e} for an even edge */
    M2 g_edge(M2 const & gamma, TreeEdge const & e) const;
    M2 g_vertex(M2 const & gamma, TreeVertex const & v) const;

    /* [g_{gamma,e}] in H_1(X_0(M ell)); odd edges by mu(e) = -mu(e bar) */
    ZVec mu_raw(M2 const & gamma, TreeEdge const & e) const;
    ZVec mu_Y(M2 const & gamma, TreeEdge const & e) const { return to_H(mu_raw(gamma, e)); }

    /* [g_{gamma,v}] in H_1(X_0(M)) */
    ZVec m_tilde(M2 const & gamma, TreeVertex const & v) const;

    /* Sum_{i=1}^n (-1)^i mu_gamma2(e_i) over the even path e_1..e_n from
     * v* to gamma1^-1 v*, in H_1(X_0(M ell)) */
    ZVec ord_integral_raw(M2 const & g1, M2 const & g2) const;
    ZVec ord_integral(M2 const & g1, M2 const & g2) const { return to_H(ord_integral_raw(g1, g2)); }

  private:
    void check(M2 const & gamma) const;
};

/* least prime r not dividing ell M p with a_r != r + 1 mod p */
long auxiliary_prime(EllipticCurve const & E, long M, long ell, long p);

/* The F_p-valued maps for (E, p, eps, delta), with p | a_ell - delta (ell + 1). */
struct Projections {
    long p = 0;
    int eps = 1, delta = -1;
    Pr2 pr2;
    std::vector<long> pr3_row;     /* on H_1(X_0(M ell)) */

    long pr1(ZVec const & x, ZVec const & y) const;   /* pr2(x - delta y) */
    long pr3(ZVec const & x) const;                   /* pr1(pi_1_* x, pi_2_* x) */
};

Projections make_projections(Cocycle const & C, FQuotient const & F, long a_ell, long p, int eps);

/* pr1(m~(s), m~(t)) on even edges, extended by antisymmetry */
long mu_tilde(Cocycle const & C, Projections const & P, M2 const & gamma, TreeEdge const & e);
/* pr_3 of mu_Y */
long mu_bar(Cocycle const & C, Projections const & P, M2 const & gamma, TreeEdge const & e);
/* F_p image of ord_integral, through pr_3 */
long ord_integral_fp(Cocycle const & C, Projections const & P, M2 const & g1, M2 const & g2);
/* alpha(gamma) = pr2(m~_gamma(v*)); only for delta = -1 */
long alpha_tau(Cocycle const & C, Projections const & P, M2 const & gamma);

/* A Riemann product for the pairing of a degree zero divisor d with an
 * H-valued measure. The measure of the ends through f is mass(f) with
 * mass(f bar) = -mass(f) on even f. Balls are the ends through edges
 * pointing away from the hull of v* and the supports r(tau_i), at tree
 * distance depth from it; f_d is constant in valuation on each ball, which
 * makes the valuation exact, and the unit part is correct mod ell^depth. */
struct RiemannResult {
    int depth = 0;
    std::size_t balls = 0;
    ZVec valuation;                        /* in the coordinates of the measure */
    int precision = 0;                     /* unit part known mod ell^precision */
    /* unit part per coordinate as A + B theta mod ell^precision, with
     * theta = sqrt(delta) (ell odd) or (1 + sqrt(delta))/2 (ell = 2) */
    std::vector<std::pair<mpz_class, mpz_class>> unit;
};

using Divisor = std::vector<std::pair<QuadNumber, long>>;
using EdgeMass = std::function<ZVec(TreeEdge const &)>;

RiemannResult riemann_integral(Divisor const & d, EdgeMass const & mass_even, std::size_t dim, long ell, int depth);

/* the measure U_e -> mu_gamma(e): mass of the ends through f is -mu(f) */
RiemannResult riemann_integral(Cocycle const & C, Divisor const & d, M2 const & gamma, int depth);

} // namespace darmon

#endif /* DARMON_COCYCLE_HPP_ */
