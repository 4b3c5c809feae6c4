#ifndef DARMON_CYCLO_HPP_
#define DARMON_CYCLO_HPP_

/* Elements of Z[zeta_n] on the power basis 1, zeta, ..., zeta^(phi(n)-1),
 * with zeta = exp(2 pi i / n) under the complex embedding. */

#include <gmpxx.h>

#include <string>
#include <vector>

namespace darmon {

/* coefficients of the n-th cyclotomic polynomial, constant term first */
std::vector<mpz_class> cyclotomic_polynomial(long n);

class CycloElement {
  public:
    long n = 1;
    std::vector<mpz_class> c;       /* phi(n) coordinates */

    CycloElement() : c(1) {}
    explicit CycloElement(long n);                 /* zero */
    static CycloElement integer(long n, mpz_class const & k);
    static CycloElement zeta_power(long n, long e);

    std::size_t degree() const { return c.size(); }
    bool is_zero() const;
    bool operator==(CycloElement const & o) const { return n == o.n && c == o.c; }
    bool operator!=(CycloElement const & o) const { return !(*this == o); }

    CycloElement operator+(CycloElement const & o) const;
    CycloElement operator-(CycloElement const & o) const;
    CycloElement operator*(CycloElement const & o) const;
    CycloElement scaled(mpz_class const & k) const;

    /* coordinatewise reduction into [0, p) */
    CycloElement mod(long p) const;
    bool congruent(CycloElement const & o, long p) const { return (*this - o).mod(p).is_zero(); }
    /* zeta -> zeta^a, gcd(a, n) = 1 */
    CycloElement galois(long a) const;

    std::string str() const;

  private:
    /* reduce a polynomial in zeta of any degree */
    static CycloElement from_poly(long n, std::vector<mpz_class> p);
};

} // namespace darmon

#endif /* DARMON_CYCLO_HPP_ */
