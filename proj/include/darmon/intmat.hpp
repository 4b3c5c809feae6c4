#ifndef DARMON_INTMAT_HPP_
#define DARMON_INTMAT_HPP_

/* Dense integer and rational linear algebra over GMP: Hermite and Smith
 * forms, integral kernels and exact solving. Sizes are small (a few
 * hundred rows at most), so no modular techniques here. */

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace darmon {

using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;

struct ZMat {
    std::size_t nr = 0, nc = 0;
    std::vector<mpz_class> v;

    ZMat() = default;
    ZMat(std::size_t r, std::size_t c) : nr(r), nc(c), v(r * c) {}

    mpz_class & operator()(std::size_t i, std::size_t j) { return v[i * nc + j]; }
    mpz_class const & operator()(std::size_t i, std::size_t j) const { return v[i * nc + j]; }

    static ZMat identity(std::size_t n);
    static ZMat from_rows(std::vector<ZVec> const & rows, std::size_t ncols);
    static ZMat from_cols(std::vector<ZVec> const & cols, std::size_t nrows);
    ZMat transpose() const;
    ZVec row(std::size_t i) const;
    ZVec col(std::size_t j) const;
    bool is_zero() const;
    bool operator==(ZMat const & o) const { return nr == o.nr && nc == o.nc && v == o.v; }
    bool operator!=(ZMat const & o) const { return !(*this == o); }
};

ZMat operator*(ZMat const & a, ZMat const & b);
ZMat operator-(ZMat const & a, ZMat const & b);
ZMat operator+(ZMat const & a, ZMat const & b);
ZMat scalar(ZMat const & a, mpz_class const & s);
ZVec operator*(ZMat const & a, ZVec const & x);
ZVec add(ZVec const & a, ZVec const & b);
ZVec sub(ZVec const & a, ZVec const & b);
ZVec scaled(ZVec const & a, mpz_class const & s);
bool is_zero(ZVec const & a);
mpz_class content(ZVec const & a);

/* Row Hermite normal form in place: row echelon, positive pivots, entries
 * above a pivot reduced into [0, pivot). If U is given it receives the
 * unimodular transform with U*A_orig = A_new. Returns the rank. */
std::size_t hnf_rows(ZMat & A, ZMat * U = nullptr);

/* Z-basis (as columns) of { x in Z^nc : A x = 0 }, in Hermite form. */
ZMat kernel_basis(ZMat const & A);

/* Z-basis (as rows) of { y in Z^nr : y A = 0 }. */
ZMat left_kernel_basis(ZMat const & A);

/* Nonzero Smith invariants d_1 | d_2 | ... of A. */
std::vector<mpz_class> elementary_divisors(ZMat A);

std::size_t rank(ZMat const & A);

/* Exact solver for B y = x with B of full column rank. */
class ColumnSolver {
    ZMat B;
    std::vector<std::size_t> piv;
    std::vector<QVec> inv;   /* k x k inverse of B restricted to piv rows */
  public:
    ColumnSolver() = default;
    explicit ColumnSolver(ZMat const & B);
    std::size_t cols() const { return B.nc; }
    std::optional<QVec> solve_q(ZVec const & x) const;
    std::optional<ZVec> solve_z(ZVec const & x) const;
};

/* 2x2 rational matrices, used for group elements throughout. */
struct M2 {
    mpq_class a = 1, b = 0, c = 0, d = 1;

    M2() = default;
    M2(mpq_class a, mpq_class b, mpq_class c, mpq_class d)
        : a(std::move(a)), b(std::move(b)), c(std::move(c)), d(std::move(d)) {}
    static M2 ints(long a, long b, long c, long d) { return M2(a, b, c, d); }

    mpq_class det() const { return a * d - b * c; }
    mpq_class trace() const { return a + d; }
    M2 inverse() const;
    M2 adjugate() const { return M2(d, -b, -c, a); }
    bool is_integral() const;
    bool operator==(M2 const & o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(M2 const & o) const { return !(*this == o); }
    std::string str() const;
};

M2 operator*(M2 const & x, M2 const & y);
M2 operator*(mpq_class const & s, M2 const & x);
M2 operator+(M2 const & x, M2 const & y);
M2 operator-(M2 const & x, M2 const & y);

/* membership in Gamma_0(N): integral, det 1, N | c */
bool in_gamma0(M2 const & g, mpz_class const & N);

mpz_class num_of(mpq_class const & q);

} // namespace darmon

#endif /* DARMON_INTMAT_HPP_ */
