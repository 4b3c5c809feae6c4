#ifndef DARMON_MODSYM_HPP_
#define DARMON_MODSYM_HPP_

/* Weight 2 modular symbols for Gamma_0(N) with integer coefficients.
 *
 * The space of modular symbols is presented by Manin symbols (c:d) in
 * P^1(Z/N) modulo the 2- and 3-term relations; we keep its torsion-free
 * quotient ("free coordinates") and inside it the kernel of the boundary
 * map, which is H_1(X_0(N), Z) ("cuspidal coordinates"). */

#include "darmon/ellcurve.hpp"
#include "darmon/intmat.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace darmon {

/* P^1(Z/N) with a canonical representative per class and a hashed index */
class P1List {
  public:
    explicit P1List(long N);
    long N;
    std::size_t size() const { return reps.size(); }
    /* (c, d) with gcd(c, d, N) = 1; integers are reduced mod N */
    std::size_t index(long c, long d) const;
    std::size_t index(mpz_class const & c, mpz_class const & d) const;
    std::pair<long, long> const & rep(std::size_t i) const { return reps[i]; }
    /* an SL_2(Z) matrix whose bottom row reduces to rep(i) */
    M2 lift(std::size_t i) const;

  private:
    std::vector<std::pair<long, long>> reps;
    std::unordered_map<long, std::size_t> idx;   /* key c N + d of the canonical pair */
    std::pair<long, long> canonical(long c, long d) const;
};

/* a point of P^1(Q): p/q in lowest terms, q >= 0, infinity = 1/0 */
struct Cusp {
    mpz_class p = 1, q = 0;
    Cusp() = default;
    Cusp(mpz_class p, mpz_class q);
    explicit Cusp(mpq_class const & x) : Cusp(x.get_num(), x.get_den()) {}
    static Cusp infinity() { return Cusp(); }
    bool is_infinity() const { return q == 0; }
    Cusp moved(M2 const & g) const;      /* Moebius action */
};

class ModularSymbols {
  public:
    explicit ModularSymbols(long N);

    long level() const { return N; }
    std::size_t rank() const { return C.nc; }          /* 2 * genus */
    std::size_t free_rank() const { return k; }
    std::size_t num_cusps() const { return cusps.size(); }
    P1List const & p1() const { return P1; }

    /* free coordinates */
    ZVec manin_symbol(std::size_t i) const { return symcoord[i]; }
    ZVec symbol(Cusp const & a, Cusp const & b) const;
    ZVec symbol_from_infinity(Cusp const & b) const;
    ZVec boundary(ZVec const & free) const;
    bool is_cuspidal(ZVec const & free) const;

    /* cuspidal coordinates; to_cuspidal throws on non-cuspidal input */
    ZVec to_cuspidal(ZVec const & free) const;
    ZVec from_cuspidal(ZVec const & x) const { return C * x; }

    /* [g] = class of the path z -> g z for g in Gamma_0(N) */
    ZVec gamma_class(M2 const & g) const;

    /* Sum_h {h a, h b} applied to a free vector of src, the result taken
     * in this space; src may have a different level */
    ZVec transport(ModularSymbols const & src, ZVec const & free_src, std::vector<M2> const & hs) const;

    /* operators on cuspidal coordinates (columns are images of basis
     * vectors); T_q for q | N is U_q */
    ZMat hecke(long q) const;
    ZMat tau() const;
    /* matrix in cuspidal coordinates of x -> Sum_h h x */
    ZMat operator_from(std::vector<M2> const & hs) const;

  private:
    long N;
    P1List P1;
    std::size_t k = 0;
    std::vector<ZVec> symcoord;          /* free coordinates of each Manin symbol */
    std::vector<std::pair<Cusp, Cusp>> ends;   /* (g 0, g oo) for the lift g */
    ZMat section;                        /* n x k: lift of free basis vectors */
    std::vector<Cusp> cusps;
    ZMat bound;                          /* #cusps x k */
    ZMat C;                              /* k x r, basis of the cuspidal lattice */
    ColumnSolver solver;

    struct cache {
        std::mutex mx;
        std::map<long, ZMat> hecke;
    };
    std::shared_ptr<cache> hcache = std::make_shared<cache>();

    std::size_t cusp_index(Cusp const & x);
    std::size_t cusp_lookup(Cusp const & x) const;
};

bool cusps_equivalent(Cusp const & x, Cusp const & y, long N);

/* The f-isotypic quotient of H_1(X_0(N), Z) for an elliptic curve of
 * conductor N: phi is a surjection onto Z^2 killing every T_q - a_q. */
struct FQuotient {
    long level = 0;
    std::vector<long> primes_used;       /* primes whose T_q - a_q define phi */
    ZMat phi;                            /* 2 x r */
    ZMat tau_f;                          /* 2 x 2, tau on the quotient */
    ZVec alpha_plus, alpha_minus;        /* primitive tau-eigenvectors in Z^2 */
    std::vector<mpz_class> d_E;          /* elementary divisors of phi on H_1^f */
    std::vector<long> torsion_primes;
    std::vector<long> S;                 /* primes of 6 d_E and torsion primes */

    ZVec apply(ZVec const & x) const { return phi * x; }
    ZVec const & alpha(int eps) const { return eps > 0 ? alpha_plus : alpha_minus; }
    bool in_S(long p) const;
};

FQuotient f_isotypic(ModularSymbols const & H, EllipticCurve const & E);

/* check phi T_q = a_q phi for a good or multiplicative q */
bool hecke_acts_by_scalar(ModularSymbols const & H, FQuotient const & F, long q, long aq);

/* the linear functional H_1(X_0(M)) -> F_p through the eps-eigenline of
 * the f-quotient, normalized so that alpha^eps maps to 1 */
struct Pr2 {
    long p = 0;
    int eps = 1;
    std::vector<long> row;               /* entries in [0, p) */
    long operator()(ZVec const & x) const;
};

Pr2 pr2_map(FQuotient const & F, long p, int eps);

/* Atkin-Lehner element at ell for Gamma_0(M ell); it lies in R(M), has
 * determinant ell and normalizes Gamma_0(M ell) */
M2 omega_ell(long M, long ell);

/* exponent of the cokernel of H_1(X_0(M ell)) -> H_1(X_0(M))^2 */
mpz_class t_ell(ModularSymbols const & HM, long ell);

} // namespace darmon

#endif /* DARMON_MODSYM_HPP_ */
