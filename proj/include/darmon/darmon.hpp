#ifndef DARMON_DARMON_HPP_
#define DARMON_DARMON_HPP_

/* The boundary of the twisted Darmon point sum and the reciprocity check
 * against t_ell times the algebraic part of L_K(E, chi, 1).
 *
 * lhs = t Sum_sigma chi^-1(sigma) alpha_{tau_sigma}(gamma_sigma) comes from
 * the radial system and the splitting of the cocycle on the tree; rhs =
 * t [L] comes from the eigenline division in H_1(X_0(N)). They share the
 * functional pr_2 and nothing else. */

#include "darmon/admissible.hpp"
#include "darmon/cocycle.hpp"
#include "darmon/cyclo.hpp"
#include "darmon/ellcurve.hpp"
#include "darmon/embeddings.hpp"
#include "darmon/lvalue.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace darmon {

struct ReciprocityInstance {
    EllipticCurve E;
    long delta_K = 0, c = 1;
    std::size_t chi = 0;          /* index into characters(G) */
    long ell = 0, p = 0;
    std::uint64_t seed = 1;       /* perturbed Y-system, conjugators, random words */
    int splitting_pairs = 100;
};

struct ReciprocityReport {
    ReciprocityInstance inst;
    std::size_t h_plus = 0;
    RingClassCharacter chi;
    int delta = -1, eps = 1;
    mpz_class t_ell;
    std::size_t rank_H = 0;
    AlgebraicLValue L;
    PrimeReport prime;
    CycloElement lhs, rhs;        /* reduced into [0, p) */
    bool verdict = false;         /* lhs == rhs */

    bool reductions_at_vstar = false;
    bool stable_under_Y = false;
    bool stable_under_conjugation = false;
    bool stable_under_factorization = false;
    int splitting_checked = 0, splitting_failures = 0, splitting_nonzero = 0;

    double ms_lhs = 0, ms_rhs = 0;    /* not part of the deterministic report */
};

/* h gamma h^-1 for h in Gamma_0(M), with the embedding data moved along */
OrientedEmbedding conjugate_embedding(OrientedEmbedding const & e, M2 const & h);

/* a seeded element of Gamma_0(N) */
M2 random_gamma0(std::uint64_t seed, long N);

/* t Sum_sigma chi^-1(sigma) alpha(gamma_sigma) in F_p[zeta_n]; throws
 * unless delta = -1 and every z_psi reduces to v* */
CycloElement partial_P_chi(Cocycle const & C, Projections const & P, std::vector<OrientedEmbedding> const & psi,
        RingClassCharacter const & chi, mpz_class const & t);

/* the same sum, each alpha(gamma) taken as alpha(g) + alpha(g^-1 gamma) +
 * d'(g, g^-1 gamma) for a seeded word g in Gamma_ell */
CycloElement partial_P_chi_factored(Cocycle const & C, Projections const & P, std::vector<OrientedEmbedding> const & psi,
        RingClassCharacter const & chi, mpz_class const & t, std::uint64_t seed);

/* validates the instance (config_error or precondition_error naming the
 * violated condition), then computes both sides and the cross-checks */
ReciprocityReport reciprocity_check(ReciprocityInstance const & inst);

} // namespace darmon

#endif /* DARMON_DARMON_HPP_ */
