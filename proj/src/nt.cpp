#include "darmon/nt.hpp"
#include "darmon/errors.hpp"

#include <algorithm>

namespace darmon {

bool is_prime(long n)
{
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; d++)
        if (n % d == 0)
            return false;
    return true;
}

std::vector<long> primes_up_to(long n)
{
    std::vector<long> out;
    if (n < 2)
        return out;
    std::vector<char> comp(n + 1, 0);
    for (long i = 2; i <= n; i++) {
        if (comp[i])
            continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i)
            comp[j] = 1;
    }
    return out;
}

std::vector<std::pair<long, int>> factor(long n)
{
    DARMON_ASSERT_ALWAYS(n != 0);
    if (n < 0)
        n = -n;
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; p++) {
        if (n % p)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            e++;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

std::vector<std::pair<mpz_class, int>> factor(mpz_class n)
{
    DARMON_ASSERT_ALWAYS(n != 0);
    n = abs(n);
    std::vector<std::pair<mpz_class, int>> f;
    for (mpz_class p = 2; p * p <= n; p++) {
        if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()))
            continue;
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            e++;
        }
        f.emplace_back(p, e);
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

std::vector<long> prime_divisors(mpz_class const & n)
{
    std::vector<long> out;
    for (auto const & [p, e] : factor(n)) {
        (void) e;
        if (!p.fits_slong_p())
            throw resource_error("prime factor too large: " + p.get_str());
        out.push_back(p.get_si());
    }
    return out;
}

std::vector<long> divisors(long n)
{
    std::vector<long> d;
    for (long i = 1; i * i <= n; i++)
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n)
                d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

long euler_phi(long n)
{
    long r = n;
    for (auto [p, e] : factor(n)) {
        (void) e;
        r = r / p * (p - 1);
    }
    return r;
}

bool is_squarefree(long n)
{
    for (auto [p, e] : factor(n)) {
        (void) p;
        if (e > 1)
            return false;
    }
    return true;
}

int kronecker(mpz_class const & a, long n)
{
    return mpz_kronecker_si(a.get_mpz_t(), n);
}

long mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

long powmod(long a, long e, long m)
{
    __int128 r = 1, b = mod(a, m);
    while (e > 0) {
        if (e & 1)
            r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return (long) r;
}

long gcd(long a, long b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class gcd(mpz_class const & a, mpz_class const & b)
{
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

long invmod(long a, long m)
{
    mpz_class r, A = mod(a, m), M = m;
    if (m == 1)
        return 0;
    if (!mpz_invert(r.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t()))
        throw internal_error("invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
    return r.get_si();
}

void xgcd(mpz_class & g, mpz_class & u, mpz_class & v, mpz_class const & a, mpz_class const & b)
{
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

mpz_class isqrt(mpz_class const & n)
{
    DARMON_ASSERT_ALWAYS(n >= 0);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(mpz_class const & n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t());
}

int valuation(mpz_class const & n, long p)
{
    DARMON_ASSERT_ALWAYS(n != 0);
    mpz_class P = p, t = n;
    return (int) mpz_remove(t.get_mpz_t(), t.get_mpz_t(), P.get_mpz_t());
}

int valuation(mpq_class const & q, long p)
{
    DARMON_ASSERT_ALWAYS(q != 0);
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

mpz_class reduce_mod(mpq_class const & q, mpz_class const & pk)
{
    mpz_class den = q.get_den(), inv, r;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t())) {
        if (pk == 1)
            return 0;
        throw internal_error("reduce_mod: denominator not invertible");
    }
    r = q.get_num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pk.get_mpz_t());
    return r;
}

std::vector<long> quadratic_roots_mod(long b, long c, long q)
{
    std::vector<long> r;
    for (long x = 0; x < q; x++)
        if (mod((__int128) x * x % q + (__int128) b * x % q + c, q) == 0)
            r.push_back(x);
    return r;
}

long hensel_lift(long r, long b, long c, long q, int e)
{
    long qk = q;
    for (int k = 1; k < e; k++) {
        long qn = qk * q;
        /* f(r) + f'(r) t qk = 0 mod qn */
        __int128 f = ((__int128) r * r + (__int128) b * r + c);
        long fr = (long) (f % qn);
        if (fr < 0)
            fr += qn;
        DARMON_ASSERT_ALWAYS(fr % qk == 0);
        long fp = mod(2 * r + b, q);
        long t = mod(-(fr / qk) * invmod(fp, q), q);
        r = mod(r + t * qk, qn);
        qk = qn;
    }
    return r;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace darmon
