#ifndef DARMON_QUAD_HPP_
#define DARMON_QUAD_HPP_

/* Real quadratic orders, indefinite binary quadratic forms, narrow class
 * groups and ring class characters.
 *
 * The real embedding is fixed once and for all by sqrt(delta_K) > 0.
 * Elements of O_c are written (x + y sqrt(delta_K))/2. */

#include "darmon/intmat.hpp"

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace darmon {

bool is_fundamental_discriminant(mpz_class const & d);

struct QuadOrder {
    mpz_class delta_K;
    mpz_class c;
    mpz_class disc;     /* c^2 delta_K */

    QuadOrder() = default;
    /* validates; throws config_error */
    QuadOrder(mpz_class delta_K, mpz_class c);
    /* t0 in {0,1}, t0 = disc mod 2: omega_c = (t0 + sqrt(disc))/2 */
    long t0() const { return mpz_odd_p(disc.get_mpz_t()) ? 1 : 0; }
    mpz_class n0() const { return (t0() - disc) / 4; }  /* norm of omega_c */
};

/* x + y sqrt(delta) with rational x, y; delta is a non-square */
struct QuadNumber {
    mpq_class x, y;
    mpz_class delta;

    QuadNumber() = default;
    QuadNumber(mpq_class x, mpq_class y, mpz_class delta)
        : x(std::move(x)), y(std::move(y)), delta(std::move(delta)) {}
    QuadNumber conj() const { return QuadNumber(x, -y, delta); }
    mpq_class norm() const { return x * x - delta * y * y; }
    mpq_class trace() const { return 2 * x; }
    bool is_zero() const { return x == 0 && y == 0; }
    bool operator==(QuadNumber const & o) const { return x == o.x && y == o.y && delta == o.delta; }
    /* Moebius action z -> (a z + b)/(c z + d) */
    QuadNumber moved(M2 const & g) const;
    std::string str() const;
};

QuadNumber operator+(QuadNumber const & u, QuadNumber const & v);
QuadNumber operator-(QuadNumber const & u, QuadNumber const & v);
QuadNumber operator*(QuadNumber const & u, QuadNumber const & v);
QuadNumber operator/(QuadNumber const & u, QuadNumber const & v);
QuadNumber operator*(mpq_class const & s, QuadNumber const & v);

struct QuadUnit {
    mpz_class x, y;   /* (x + y sqrt(delta_K))/2 */
    int norm = 1;
};

/* primitive form a x^2 + b x y + c y^2 */
struct Form {
    mpz_class a, b, c;

    Form() = default;
    Form(mpz_class a, mpz_class b, mpz_class c) : a(std::move(a)), b(std::move(b)), c(std::move(c)) {}
    mpz_class disc() const { return b * b - 4 * a * c; }
    mpz_class eval(mpz_class const & x, mpz_class const & y) const { return a * x * x + b * x * y + c * y * y; }
    /* f o M, i.e. f(px + qy, rx + sy) for M = [[p,q],[r,s]] */
    Form act(M2 const & M) const;
    bool operator==(Form const & o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(Form const & o) const;
    bool is_primitive() const;
    std::string str() const;
};

bool is_reduced(Form const & f);
/* one reduction step rho, and its transform: rho(f) = f o M */
Form rho(Form const & f, M2 * M = nullptr);
/* properly equivalent reduced form; T receives f o T = result */
Form reduce(Form const & f, M2 * T = nullptr);
std::vector<Form> cycle(Form const & reduced);
Form compose(Form const & f, Form const & g);

/* brute-force Pell oracle: minimal (x,y), y > 0, with x^2 - D y^2 = 4 n */
bool pell_bruteforce(mpz_class const & D, int n, long ybound, mpz_class & x, mpz_class & y);

QuadUnit fundamental_unit(QuadOrder const & O);

class NarrowClassGroup {
  public:
    QuadOrder order;
    std::size_t h_plus = 0, h = 0;
    std::vector<Form> reps;           /* key (lexicographically least reduced form) per class; index 0 is principal */
    std::size_t dk_class = 0;
    std::vector<std::vector<std::size_t>> table;
    std::vector<std::size_t> inv;

    explicit NarrowClassGroup(QuadOrder const & O);
    std::size_t class_of(Form const & f) const;
    std::size_t mul(std::size_t i, std::size_t j) const { return table[i][j]; }
    std::size_t pow(std::size_t i, long e) const;
    std::size_t element_order(std::size_t i) const;
    Form principal_form() const;
    Form dk_form() const;

  private:
    std::map<Form, std::size_t> reduced_index;
};

struct RingClassCharacter {
    long n = 1;                   /* order; values are zeta_n^e */
    std::vector<long> exps;       /* exponent per class index */
    bool even = true;
    long value_exp(std::size_t cls) const { return exps[cls]; }
};

/* all h+ characters; index 0 is the trivial one */
std::vector<RingClassCharacter> characters(NarrowClassGroup const & G);

} // namespace darmon

#endif /* DARMON_QUAD_HPP_ */
