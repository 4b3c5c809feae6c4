#include "darmon/cyclo.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace darmon {

namespace {

using Poly = std::vector<mpz_class>;

void trim(Poly & p)
{
    while (p.size() > 1 && p.back() == 0)
        p.pop_back();
}

/* exact division by a monic polynomial */
Poly divide_exact(Poly a, Poly const & b)
{
    std::size_t db = b.size() - 1;
    DARMON_ASSERT_ALWAYS(b.back() == 1 && a.size() > db);
    Poly q(a.size() - db);
    for (std::size_t i = a.size(); i-- > db;) {
        mpz_class t = a[i];
        q[i - db] = t;
        for (std::size_t j = 0; j <= db; j++)
            a[i - db + j] -= t * b[j];
    }
    trim(a);
    DARMON_ASSERT_ALWAYS(a.size() == 1 && a[0] == 0);
    return q;
}

std::mutex cyc_mx;
std::map<long, Poly> cyc_cache;

} // namespace

std::vector<mpz_class> cyclotomic_polynomial(long n)
{
    if (n < 1)
        throw internal_error("cyclotomic_polynomial: n must be positive");
    {
        std::lock_guard<std::mutex> lk(cyc_mx);
        auto it = cyc_cache.find(n);
        if (it != cyc_cache.end())
            return it->second;
    }
    Poly p((std::size_t) n + 1);
    p[0] = -1;
    p[(std::size_t) n] = 1;
    for (long d : divisors(n))
        if (d < n)
            p = divide_exact(p, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lk(cyc_mx);
    cyc_cache[n] = p;
    return p;
}

CycloElement::CycloElement(long n) : n(n), c((std::size_t) euler_phi(n)) {}

CycloElement CycloElement::integer(long n, mpz_class const & k)
{
    CycloElement x(n);
    x.c[0] = k;
    return x;
}

CycloElement CycloElement::zeta_power(long n, long e)
{
    Poly p((std::size_t) darmon::mod(e, n) + 1);
    p.back() = 1;
    return from_poly(n, p);
}

CycloElement CycloElement::from_poly(long n, Poly p)
{
    Poly phi = cyclotomic_polynomial(n);
    std::size_t d = phi.size() - 1;
    for (std::size_t i = p.size(); i-- > d;) {
        mpz_class t = p[i];
        if (t == 0)
            continue;
        for (std::size_t j = 0; j <= d; j++)
            p[i - d + j] -= t * phi[j];
    }
    CycloElement x(n);
    for (std::size_t i = 0; i < d && i < p.size(); i++)
        x.c[i] = p[i];
    return x;
}

bool CycloElement::is_zero() const
{
    for (auto const & x : c)
        if (x != 0)
            return false;
    return true;
}

CycloElement CycloElement::operator+(CycloElement const & o) const
{
    DARMON_ASSERT_ALWAYS(n == o.n);
    CycloElement r = *this;
    for (std::size_t i = 0; i < c.size(); i++)
        r.c[i] += o.c[i];
    return r;
}

CycloElement CycloElement::operator-(CycloElement const & o) const
{
    DARMON_ASSERT_ALWAYS(n == o.n);
    CycloElement r = *this;
    for (std::size_t i = 0; i < c.size(); i++)
        r.c[i] -= o.c[i];
    return r;
}

CycloElement CycloElement::operator*(CycloElement const & o) const
{
    DARMON_ASSERT_ALWAYS(n == o.n);
    Poly p(2 * c.size());
    for (std::size_t i = 0; i < c.size(); i++)
        for (std::size_t j = 0; j < c.size(); j++)
            p[i + j] += c[i] * o.c[j];
    return from_poly(n, p);
}

CycloElement CycloElement::scaled(mpz_class const & k) const
{
    CycloElement r = *this;
    for (auto & x : r.c)
        x *= k;
    return r;
}

CycloElement CycloElement::mod(long p) const
{
    CycloElement r = *this;
    for (auto & x : r.c)
        mpz_fdiv_r_ui(x.get_mpz_t(), x.get_mpz_t(), (unsigned long) p);
    return r;
}

CycloElement CycloElement::galois(long a) const
{
    if (gcd(a, n) != 1)
        throw precondition_error("galois: " + std::to_string(a) + " is not prime to " + std::to_string(n));
    CycloElement r(n);
    for (std::size_t i = 0; i < c.size(); i++)
        if (c[i] != 0)
            r = r + zeta_power(n, (long) i * a).scaled(c[i]);
    return r;
}

std::string CycloElement::str() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); i++) {
        if (c[i] == 0)
            continue;
        if (!first)
            os << (c[i] > 0 ? " + " : " - ");
        else if (c[i] < 0)
            os << "-";
        mpz_class a = abs(c[i]);
        if (i == 0 || a != 1)
            os << a;
        if (i > 0)
            os << (a != 1 ? "*" : "") << "z" << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

} // namespace darmon
