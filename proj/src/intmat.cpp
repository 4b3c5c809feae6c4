#include "darmon/intmat.hpp"
#include "darmon/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace darmon {

long env_bound(char const * name, long dflt)
{
    char const * s = std::getenv(name);
    if (!s || !*s)
        return dflt;
    char * end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end || v <= 0)
        throw config_error(std::string("bad value for ") + name + ": " + s);
    return v;
}

ZMat ZMat::identity(std::size_t n)
{
    ZMat I(n, n);
    for (std::size_t i = 0; i < n; i++)
        I(i, i) = 1;
    return I;
}

ZMat ZMat::from_rows(std::vector<ZVec> const & rows, std::size_t ncols)
{
    ZMat A(rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); i++) {
        DARMON_ASSERT_ALWAYS(rows[i].size() == ncols);
        for (std::size_t j = 0; j < ncols; j++)
            A(i, j) = rows[i][j];
    }
    return A;
}

ZMat ZMat::from_cols(std::vector<ZVec> const & cols, std::size_t nrows)
{
    ZMat A(nrows, cols.size());
    for (std::size_t j = 0; j < cols.size(); j++) {
        DARMON_ASSERT_ALWAYS(cols[j].size() == nrows);
        for (std::size_t i = 0; i < nrows; i++)
            A(i, j) = cols[j][i];
    }
    return A;
}

ZMat ZMat::transpose() const
{
    ZMat T(nc, nr);
    for (std::size_t i = 0; i < nr; i++)
        for (std::size_t j = 0; j < nc; j++)
            T(j, i) = (*this)(i, j);
    return T;
}

ZVec ZMat::row(std::size_t i) const
{
    return ZVec(v.begin() + i * nc, v.begin() + (i + 1) * nc);
}

ZVec ZMat::col(std::size_t j) const
{
    ZVec c(nr);
    for (std::size_t i = 0; i < nr; i++)
        c[i] = (*this)(i, j);
    return c;
}

bool ZMat::is_zero() const
{
    for (auto const & x : v)
        if (x != 0)
            return false;
    return true;
}

ZMat operator*(ZMat const & a, ZMat const & b)
{
    DARMON_ASSERT_ALWAYS(a.nc == b.nr);
    ZMat r(a.nr, b.nc);
    for (std::size_t i = 0; i < a.nr; i++)
        for (std::size_t k = 0; k < a.nc; k++) {
            mpz_class const & x = a(i, k);
            if (x == 0)
                continue;
            for (std::size_t j = 0; j < b.nc; j++)
                if (b(k, j) != 0)
                    r(i, j) += x * b(k, j);
        }
    return r;
}

ZMat operator-(ZMat const & a, ZMat const & b)
{
    DARMON_ASSERT_ALWAYS(a.nr == b.nr && a.nc == b.nc);
    ZMat r = a;
    for (std::size_t i = 0; i < r.v.size(); i++)
        r.v[i] -= b.v[i];
    return r;
}

ZMat operator+(ZMat const & a, ZMat const & b)
{
    DARMON_ASSERT_ALWAYS(a.nr == b.nr && a.nc == b.nc);
    ZMat r = a;
    for (std::size_t i = 0; i < r.v.size(); i++)
        r.v[i] += b.v[i];
    return r;
}

ZMat scalar(ZMat const & a, mpz_class const & s)
{
    ZMat r = a;
    for (auto & x : r.v)
        x *= s;
    return r;
}

ZVec operator*(ZMat const & a, ZVec const & x)
{
    DARMON_ASSERT_ALWAYS(a.nc == x.size());
    ZVec r(a.nr);
    for (std::size_t i = 0; i < a.nr; i++)
        for (std::size_t j = 0; j < a.nc; j++)
            if (x[j] != 0 && a(i, j) != 0)
                r[i] += a(i, j) * x[j];
    return r;
}

ZVec add(ZVec const & a, ZVec const & b)
{
    DARMON_ASSERT_ALWAYS(a.size() == b.size());
    ZVec r = a;
    for (std::size_t i = 0; i < r.size(); i++)
        r[i] += b[i];
    return r;
}

ZVec sub(ZVec const & a, ZVec const & b)
{
    DARMON_ASSERT_ALWAYS(a.size() == b.size());
    ZVec r = a;
    for (std::size_t i = 0; i < r.size(); i++)
        r[i] -= b[i];
    return r;
}

ZVec scaled(ZVec const & a, mpz_class const & s)
{
    ZVec r = a;
    for (auto & x : r)
        x *= s;
    return r;
}

bool is_zero(ZVec const & a)
{
    for (auto const & x : a)
        if (x != 0)
            return false;
    return true;
}

mpz_class content(ZVec const & a)
{
    mpz_class g = 0;
    for (auto const & x : a)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

/* row_i -= q * row_k on A (and U) */
static void row_axpy(ZMat & A, std::size_t i, std::size_t k, mpz_class const & q)
{
    if (q == 0)
        return;
    for (std::size_t j = 0; j < A.nc; j++)
        if (A(k, j) != 0)
            A(i, j) -= q * A(k, j);
}

static void row_swap(ZMat & A, std::size_t i, std::size_t k)
{
    if (i == k)
        return;
    for (std::size_t j = 0; j < A.nc; j++)
        std::swap(A(i, j), A(k, j));
}

static void row_neg(ZMat & A, std::size_t i)
{
    for (std::size_t j = 0; j < A.nc; j++)
        A(i, j) = -A(i, j);
}

std::size_t hnf_rows(ZMat & A, ZMat * U)
{
    if (U)
        *U = ZMat::identity(A.nr);
    std::size_t row = 0;
    mpz_class q;
    for (std::size_t col = 0; col < A.nc && row < A.nr; col++) {
        for (;;) {
            /* smallest nonzero |A(i,col)| for i >= row */
            std::size_t best = A.nr;
            for (std::size_t i = row; i < A.nr; i++) {
                if (A(i, col) == 0)
                    continue;
                if (best == A.nr || abs(A(i, col)) < abs(A(best, col)))
                    best = i;
            }
            if (best == A.nr)
                break;
            row_swap(A, row, best);
            if (U) row_swap(*U, row, best);
            bool done = true;
            for (std::size_t i = row + 1; i < A.nr; i++) {
                if (A(i, col) == 0)
                    continue;
                mpz_fdiv_q(q.get_mpz_t(), A(i, col).get_mpz_t(), A(row, col).get_mpz_t());
                row_axpy(A, i, row, q);
                if (U) row_axpy(*U, i, row, q);
                if (A(i, col) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (row >= A.nr || A(row, col) == 0)
            continue;
        if (A(row, col) < 0) {
            row_neg(A, row);
            if (U) row_neg(*U, row);
        }
        for (std::size_t i = 0; i < row; i++) {
            mpz_fdiv_q(q.get_mpz_t(), A(i, col).get_mpz_t(), A(row, col).get_mpz_t());
            row_axpy(A, i, row, q);
            if (U) row_axpy(*U, i, row, q);
        }
        row++;
    }
    return row;
}

std::size_t rank(ZMat const & A)
{
    ZMat B = A;
    return hnf_rows(B);
}

ZMat kernel_basis(ZMat const & A)
{
    ZMat T = A.transpose();
    ZMat U;
    std::size_t r = hnf_rows(T, &U);
    std::size_t n = A.nc;
    ZMat K(n - r, n);
    for (std::size_t i = r; i < n; i++)
        for (std::size_t j = 0; j < n; j++)
            K(i - r, j) = U(i, j);
    hnf_rows(K);
    return K.transpose();
}

ZMat left_kernel_basis(ZMat const & A)
{
    return kernel_basis(A.transpose()).transpose();
}

std::vector<mpz_class> elementary_divisors(ZMat A)
{
    for (int iter = 0;; iter++) {
        DARMON_ASSERT_ALWAYS(iter < 10000);
        hnf_rows(A);
        A = A.transpose();
        bool diag = true;
        for (std::size_t i = 0; i < A.nr && diag; i++)
            for (std::size_t j = 0; j < A.nc; j++)
                if (i != j && A(i, j) != 0) {
                    diag = false;
                    break;
                }
        if (diag)
            break;
    }
    std::vector<mpz_class> d;
    for (std::size_t i = 0; i < std::min(A.nr, A.nc); i++)
        if (A(i, i) != 0)
            d.push_back(abs(A(i, i)));
    /* enforce the divisibility chain */
    for (std::size_t i = 0; i < d.size(); i++)
        for (std::size_t j = i + 1; j < d.size(); j++) {
            mpz_class g, l;
            mpz_gcd(g.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
            mpz_lcm(l.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
            d[i] = g;
            d[j] = l;
        }
    return d;
}

ColumnSolver::ColumnSolver(ZMat const & B_) : B(B_)
{
    std::size_t m = B.nr, k = B.nc;
    /* Gaussian elimination on rows of B to select k independent rows */
    std::vector<QVec> rows(m, QVec(k));
    for (std::size_t i = 0; i < m; i++)
        for (std::size_t j = 0; j < k; j++)
            rows[i][j] = B(i, j);
    std::vector<QVec> work;
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> pcol;
    for (std::size_t i = 0; i < m && chosen.size() < k; i++) {
        QVec r = rows[i];
        for (std::size_t t = 0; t < work.size(); t++) {
            mpq_class f = r[pcol[t]];
            if (f == 0)
                continue;
            for (std::size_t j = 0; j < k; j++)
                r[j] -= f * work[t][j];
        }
        std::size_t pc = k;
        for (std::size_t j = 0; j < k; j++)
            if (r[j] != 0) {
                pc = j;
                break;
            }
        if (pc == k)
            continue;
        mpq_class f = r[pc];
        for (auto & x : r)
            x /= f;
        for (std::size_t t = 0; t < work.size(); t++) {
            mpq_class g = work[t][pc];
            if (g == 0)
                continue;
            for (std::size_t j = 0; j < k; j++)
                work[t][j] -= g * r[j];
        }
        work.push_back(r);
        pcol.push_back(pc);
        chosen.push_back(i);
    }
    if (chosen.size() != k)
        throw internal_error("ColumnSolver: matrix is not of full column rank");
    piv = chosen;
    /* invert the k x k submatrix */
    std::vector<QVec> S(k, QVec(2 * k));
    for (std::size_t i = 0; i < k; i++) {
        for (std::size_t j = 0; j < k; j++)
            S[i][j] = B(piv[i], j);
        S[i][k + i] = 1;
    }
    for (std::size_t c = 0; c < k; c++) {
        std::size_t p = c;
        while (S[p][c] == 0)
            p++;
        std::swap(S[p], S[c]);
        mpq_class f = S[c][c];
        for (auto & x : S[c])
            x /= f;
        for (std::size_t i = 0; i < k; i++) {
            if (i == c || S[i][c] == 0)
                continue;
            mpq_class g = S[i][c];
            for (std::size_t j = 0; j < 2 * k; j++)
                S[i][j] -= g * S[c][j];
        }
    }
    inv.assign(k, QVec(k));
    for (std::size_t i = 0; i < k; i++)
        for (std::size_t j = 0; j < k; j++)
            inv[i][j] = S[i][k + j];
}

std::optional<QVec> ColumnSolver::solve_q(ZVec const & x) const
{
    DARMON_ASSERT_ALWAYS(x.size() == B.nr);
    std::size_t k = B.nc;
    QVec y(k);
    for (std::size_t i = 0; i < k; i++)
        for (std::size_t j = 0; j < k; j++)
            if (inv[i][j] != 0)
                y[i] += inv[i][j] * x[piv[j]];
    for (std::size_t i = 0; i < B.nr; i++) {
        mpq_class s = 0;
        for (std::size_t j = 0; j < k; j++)
            if (B(i, j) != 0)
                s += B(i, j) * y[j];
        if (s != x[i])
            return std::nullopt;
    }
    return y;
}

std::optional<ZVec> ColumnSolver::solve_z(ZVec const & x) const
{
    auto y = solve_q(x);
    if (!y)
        return std::nullopt;
    ZVec z(y->size());
    for (std::size_t i = 0; i < y->size(); i++) {
        if ((*y)[i].get_den() != 1)
            return std::nullopt;
        z[i] = (*y)[i].get_num();
    }
    return z;
}

M2 M2::inverse() const
{
    mpq_class D = det();
    if (D == 0)
        throw internal_error("M2::inverse: singular matrix");
    return M2(d / D, -b / D, -c / D, a / D);
}

bool M2::is_integral() const
{
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
}

std::string M2::str() const
{
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

M2 operator*(M2 const & x, M2 const & y)
{
    return M2(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
}

M2 operator*(mpq_class const & s, M2 const & x)
{
    return M2(s * x.a, s * x.b, s * x.c, s * x.d);
}

M2 operator+(M2 const & x, M2 const & y)
{
    return M2(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d);
}

M2 operator-(M2 const & x, M2 const & y)
{
    return M2(x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d);
}

bool in_gamma0(M2 const & g, mpz_class const & N)
{
    if (!g.is_integral() || g.det() != 1)
        return false;
    return mpz_divisible_p(g.c.get_num_mpz_t(), N.get_mpz_t()) != 0;
}

mpz_class num_of(mpq_class const & q)
{
    if (q.get_den() != 1)
        throw internal_error("expected an integer, got " + q.get_str());
    return q.get_num();
}

} // namespace darmon
