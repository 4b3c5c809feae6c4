#ifndef DARMON_ADMISSIBLE_HPP_
#define DARMON_ADMISSIBLE_HPP_

/* Choice of the auxiliary prime p and the sieve for p-admissible primes
 * ell. Conditions 1, 2 and 4 on p are exact; conditions 3 and 5 carry a
 * method note and a heuristic flag. */

#include "darmon/cyclo.hpp"
#include "darmon/ellcurve.hpp"
#include "darmon/modsym.hpp"
#include "darmon/quad.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace darmon {

struct ConditionVerdict {
    int index = 0;
    bool pass = false;
    bool heuristic = false;
    std::string method;
};

struct AdmissibleEll {
    long ell = 0;
    int delta = -1;               /* p | a_ell - delta (ell + 1) */
    long a_ell = 0;
    bool t_computed = false;      /* t_ell computed, else only its bound */
    mpz_class t_ell;              /* t_ell, or the bound 6 phi(M) (ell^2 - 1) */
};

struct PrimeReport {
    long p = 0;
    long r = 0;                                  /* auxiliary prime of condition 2, 0 if none */
    std::vector<ConditionVerdict> conditions;    /* conditions 1..5 */
    std::vector<AdmissibleEll> ells;

    ConditionVerdict const & condition(int i) const { return conditions.at((std::size_t) i - 1); }
    /* conditions 1, 2, 4 */
    bool exact_pass() const;
    bool all_pass() const;
};

/* the least prime r not dividing N p with p not dividing r + 1 - a_r; 0
 * when none exists below the bound */
long condition2_prime(EllipticCurve const & E, long p, long bound = 2000);

/* order in Pic+(O_c) of a prime above q, for q split in K */
long frobenius_order(NarrowClassGroup const & G, long q);

PrimeReport check_p(EllipticCurve const & E, FQuotient const & F, NarrowClassGroup const & G, CycloElement const & L, long p);

/* the local admissibility conditions on ell, without condition 2 */
bool locally_admissible(EllipticCurve const & E, QuadOrder const & O, long p, long ell, int * delta = nullptr);

/* all admissible ell <= bound; condition 2 is certified by t_ell when
 * N ell <= DARMON_MAX_T_LEVEL and by the bound 6 phi(N)(ell^2 - 1)
 * otherwise; ell with p | t_ell are dropped */
std::vector<AdmissibleEll> sieve_ell(EllipticCurve const & E, ModularSymbols const & HN, QuadOrder const & O, long p, long bound);

} // namespace darmon

#endif /* DARMON_ADMISSIBLE_HPP_ */
