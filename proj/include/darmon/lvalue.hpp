#ifndef DARMON_LVALUE_HPP_
#define DARMON_LVALUE_HPP_

/* The twisted cycle I_chi = Sum_sigma chi^-1(sigma) [gamma_sigma] in
 * H_1(X_0(M)) tensor Z[chi], its tau-parity, the algebraic part L with
 * I_{chi,E} = L alpha^eps, and a numeric period computation used to
 * cross-check the nonvanishing of L. */

#include "darmon/cyclo.hpp"
#include "darmon/ellcurve.hpp"
#include "darmon/embeddings.hpp"
#include "darmon/modsym.hpp"
#include "darmon/quad.hpp"

#include <string>
#include <vector>

namespace darmon {

/* an element of H_1 tensor Z[zeta_n]: comps[k] is the coefficient of zeta^k */
struct TwistedClass {
    long n = 1;
    std::vector<ZVec> comps;

    bool is_zero() const;
    bool operator==(TwistedClass const & o) const { return n == o.n && comps == o.comps; }
    TwistedClass apply(ZMat const & T) const;
    TwistedClass scaled(CycloElement const & a) const;
    /* the coordinate j as an element of Z[zeta_n] */
    CycloElement coordinate(std::size_t j) const;
};

/* chi(sigma_K) = +-1 */
int character_sign(NarrowClassGroup const & G, RingClassCharacter const & chi);

TwistedClass twisted_sum(ModularSymbols const & H, std::vector<M2> const & gammas, RingClassCharacter const & chi);
TwistedClass i_chi(ModularSymbols const & H, EmbeddingFamily const & fam, RingClassCharacter const & chi);

/* I^tau = chi(sigma_K) I */
bool parity_check(ModularSymbols const & H, NarrowClassGroup const & G, TwistedClass const & I, RingClassCharacter const & chi);

struct AlgebraicLValue {
    CycloElement value;
    int eps = 1;
    std::vector<long> S;
};

/* solves phi(I) = L alpha^eps; throws if phi(I) leaves the eps-line */
AlgebraicLValue algebraic_part(FQuotient const & F, TwistedClass const & I, int eps);

struct NumericLValue {
    std::string re, im;              /* S = Sum chi^-1(sigma) 2 pi i int f dz, 30 significant digits */
    std::string abs2;                /* |S|^2 */
    double abs = 0, bound = 0;       /* |S| and a proven bound on its error */
    long terms = 0;
    std::string verdict;             /* "nonzero", "zero" (within the bound) or "inconclusive" */
};

/* truncated q-expansion periods along z -> gamma z with Im z = 1/|c| */
NumericLValue numeric_lvalue(EllipticCurve const & E, std::vector<M2> const & gammas, RingClassCharacter const & chi);

} // namespace darmon

#endif /* DARMON_LVALUE_HPP_ */
