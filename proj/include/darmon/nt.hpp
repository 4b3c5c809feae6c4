#ifndef DARMON_NT_HPP_
#define DARMON_NT_HPP_

/* Elementary number theory on machine integers and mpz. Everything here is
 * trial division or brute force; the sizes in this code base are small. */

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace darmon {

bool is_prime(long n);
std::vector<long> primes_up_to(long n);
/* prime factorization by trial division, (p, e) pairs in increasing order */
std::vector<std::pair<long, int>> factor(long n);
std::vector<std::pair<mpz_class, int>> factor(mpz_class n);
std::vector<long> prime_divisors(mpz_class const & n);
std::vector<long> divisors(long n);
long euler_phi(long n);
bool is_squarefree(long n);
int kronecker(mpz_class const & a, long n);
long mod(long a, long m);
long powmod(long a, long e, long m);
long invmod(long a, long m);         /* throws if not invertible */
long gcd(long a, long b);
mpz_class gcd(mpz_class const & a, mpz_class const & b);
/* g = gcd(a,b) = u a + v b */
void xgcd(mpz_class & g, mpz_class & u, mpz_class & v, mpz_class const & a, mpz_class const & b);
mpz_class isqrt(mpz_class const & n);
bool is_square(mpz_class const & n);
int valuation(mpz_class const & n, long p);    /* n != 0 */
int valuation(mpq_class const & q, long p);    /* q != 0 */
/* q mod p^k for a rational with denominator prime to p, in [0, p^k) */
mpz_class reduce_mod(mpq_class const & q, mpz_class const & pk);
/* roots of x^2 + b x + c mod a prime q, sorted */
std::vector<long> quadratic_roots_mod(long b, long c, long q);
/* Hensel lift of a simple root of x^2 + b x + c from mod q to mod q^e */
long hensel_lift(long r, long b, long c, long q, int e);

/* mixing hash for deterministic tie-breaks and seeds */
std::uint64_t splitmix64(std::uint64_t x);

} // namespace darmon

#endif /* DARMON_NT_HPP_ */
