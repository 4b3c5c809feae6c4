#include "darmon/ellcurve.hpp"
#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <algorithm>

namespace darmon {

EllipticCurve::EllipticCurve(std::vector<long> const & a, long N_, std::string label_)
    : N(N_), label(std::move(label_))
{
    if (a.size() != 5)
        throw config_error("curve: expected 5 Weierstrass coefficients");
    a1 = a[0]; a2 = a[1]; a3 = a[2]; a4 = a[3]; a6 = a[4];
    if (N < 1)
        throw config_error("curve: conductor must be positive");
    mpz_class A1 = a1, A2 = a2, A3 = a3, A4 = a4, A6 = a6;
    mpz_class b2 = A1 * A1 + 4 * A2;
    mpz_class b4 = 2 * A4 + A1 * A3;
    mpz_class b6 = A3 * A3 + 4 * A6;
    mpz_class b8 = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    c4 = b2 * b2 - 24 * b4;
    if (disc == 0)
        throw config_error("curve: singular Weierstrass model");
    for (auto [q, e] : factor(N)) {
        (void) e;
        if (!mpz_divisible_p(disc.get_mpz_t(), mpz_class(q).get_mpz_t()))
            throw config_error("curve: conductor prime " + std::to_string(q)
                    + " does not divide the discriminant");
    }
}

long EllipticCurve::count_points(long q) const
{
    long A1 = mod(a1, q), A2 = mod(a2, q), A3 = mod(a3, q), A4 = mod(a4, q), A6 = mod(a6, q);
    long n = 1;   /* point at infinity */
    if (q == 2 || q == 3) {
        for (long x = 0; x < q; x++)
            for (long y = 0; y < q; y++) {
                long l = y * y + A1 * x * y + A3 * y;
                long r = x * x * x + A2 * x * x + A4 * x + A6;
                if (mod(l - r, q) == 0)
                    n++;
            }
        return n;
    }
    std::vector<char> sq(q, 0);
    for (long y = 1; y < q; y++)
        sq[(y * y) % q] = 1;
    for (long x = 0; x < q; x++) {
        long u = (A1 * x + A3) % q;
        long f = ((((x + A2) % q) * x % q + A4) % q * x % q + A6) % q;
        long d = (u * u + 4 * f) % q;
        if (d == 0)
            n += 1;
        else if (sq[d])
            n += 2;
    }
    return n;
}

int EllipticCurve::bad_reduction_type(long q) const
{
    if (!mpz_divisible_p(disc.get_mpz_t(), mpz_class(q).get_mpz_t()))
        throw internal_error("bad_reduction_type: " + std::to_string(q) + " is a prime of good reduction");
    long A1 = mod(a1, q), A2 = mod(a2, q), A3 = mod(a3, q), A4 = mod(a4, q), A6 = mod(a6, q);
    for (long x = 0; x < q; x++)
        for (long y = 0; y < q; y++) {
            long F = mod(y * y + A1 * x * y + A3 * y - x * x * x - A2 * x * x - A4 * x - A6, q);
            long Fx = mod(A1 * y - 3 * x * x - 2 * A2 * x - A4, q);
            long Fy = mod(2 * y + A1 * x + A3, q);
            if (F || Fx || Fy)
                continue;
            /* tangent cone Y^2 + a1 X Y - (3 x0 + a2) X^2 */
            long b = mod(-(3 * x + A2), q);
            if (q == 2) {
                if (A1 == 0)
                    return 0;
                return b == 0 ? 1 : -1;
            }
            long d = mod(A1 * A1 - 4 * b, q);
            if (d == 0)
                return 0;
            return kronecker(d, q) == 1 ? 1 : -1;
        }
    throw internal_error("bad_reduction_type: no singular point found mod " + std::to_string(q));
}

long EllipticCurve::ap_or_zero(long q) const
{
    {
        std::lock_guard<std::mutex> lk(ap_cache->mx);
        auto it = ap_cache->ap.find(q);
        if (it != ap_cache->ap.end())
            return it->second;
    }
    long v;
    bool bad = mpz_divisible_p(disc.get_mpz_t(), mpz_class(q).get_mpz_t());
    if (!bad) {
        v = q + 1 - count_points(q);
    } else {
        if (N % q != 0)
            throw config_error("curve: model is not minimal at " + std::to_string(q)
                    + " (prime divides the discriminant but not N)");
        v = (N % (q * q) == 0) ? 0 : bad_reduction_type(q);
    }
    std::lock_guard<std::mutex> lk(ap_cache->mx);
    ap_cache->ap[q] = v;
    return v;
}

long EllipticCurve::ap(long q) const
{
    long v = ap_or_zero(q);
    if (v == 0 && N % q == 0)
        throw precondition_error("ap: additive reduction at " + std::to_string(q));
    return v;
}

std::vector<long> EllipticCurve::an_list(long nmax) const
{
    std::vector<long> an(nmax + 1, 0), spf(nmax + 1, 0);
    if (nmax >= 1)
        an[1] = 1;
    for (long i = 2; i <= nmax; i++)
        if (!spf[i])
            for (long j = i; j <= nmax; j += i)
                if (!spf[j])
                    spf[j] = i;
    for (long n = 2; n <= nmax; n++) {
        long p = spf[n], m = n, pk = 1;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        if (m > 1) {
            an[n] = an[m] * an[pk];
            continue;
        }
        /* n is a prime power pk */
        long a = ap_or_zero(p);
        if (pk == p)
            an[n] = a;
        else if (N % p == 0)
            an[n] = an[pk / p] * a;
        else
            an[n] = a * an[pk / p] - p * an[pk / p / p];
    }
    return an;
}

bool EllipticCurve::semistable() const
{
    return is_squarefree(N);
}

SigmaSplit sigma_split(EllipticCurve const & E, QuadOrder const & K)
{
    if (gcd(mpz_class(E.N), K.delta_K) != 1)
        throw precondition_error("sigma_split: gcd(N, delta_K) != 1");
    SigmaSplit s;
    for (auto [q, e] : factor(E.N)) {
        if (kronecker(K.delta_K, q) == -1 && e % 2 == 1) {
            if (e > 1)
                throw precondition_error("sigma_split: ord_" + std::to_string(q)
                        + "(N) > 1 for an inert prime of odd order");
            s.Sigma.push_back(q);
            s.D *= q;
        }
    }
    s.M = E.N / s.D;
    if (s.Sigma.size() % 2 == 1)
        throw precondition_error("sigma_split: |Sigma| is odd (sign -1 case is out of scope)");
    return s;
}

} // namespace darmon
