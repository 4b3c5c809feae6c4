#ifndef DARMON_ELLCURVE_HPP_
#define DARMON_ELLCURVE_HPP_

/* Elliptic curves over Q given by an integral Weierstrass model and a
 * supplied conductor. Point counting is exhaustive. */

#include "darmon/quad.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace darmon {

class EllipticCurve {
  public:
    long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    long N = 0;
    std::string label;
    mpz_class disc;
    mpz_class c4;

    EllipticCurve() = default;
    /* validates nonsingularity and that every prime of N divides the
     * discriminant; throws config_error */
    EllipticCurve(std::vector<long> const & a, long N, std::string label = "");

    /* projective points of the reduction mod q (singular point included) */
    long count_points(long q) const;
    /* trace of Frobenius; +-1 at multiplicative primes; throws
     * precondition_error at additive primes */
    long ap(long q) const;
    /* a_n by multiplicativity and the Hecke recursion, n = 1..nmax */
    std::vector<long> an_list(long nmax) const;
    bool semistable() const;
    /* split multiplicative: +1, nonsplit: -1, additive: 0, good: throws */
    int bad_reduction_type(long q) const;

  private:
    struct cache {
        std::mutex mx;
        std::map<long, long> ap;
    };
    std::shared_ptr<cache> ap_cache = std::make_shared<cache>();
    long ap_or_zero(long q) const;
};

struct SigmaSplit {
    std::vector<long> Sigma;
    long D = 1;
    long M = 1;
};

SigmaSplit sigma_split(EllipticCurve const & E, QuadOrder const & K);

} // namespace darmon

#endif /* DARMON_ELLCURVE_HPP_ */
