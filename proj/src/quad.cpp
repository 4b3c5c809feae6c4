#include "darmon/quad.hpp"
#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace darmon {

bool is_fundamental_discriminant(mpz_class const & d)
{
    if (d == 0 || d == 1)
        return false;
    long r = mpz_fdiv_ui(d.get_mpz_t(), 4);
    auto sqfree = [](mpz_class m) {
        for (auto const & [p, e] : factor(m)) {
            (void) p;
            if (e > 1)
                return false;
        }
        return true;
    };
    if (r == 1)
        return sqfree(d);
    if (r != 0)
        return false;
    mpz_class m = d / 4;
    long r4 = mpz_fdiv_ui(m.get_mpz_t(), 4);
    return (r4 == 2 || r4 == 3) && sqfree(m);
}

QuadOrder::QuadOrder(mpz_class dK, mpz_class cc) : delta_K(std::move(dK)), c(std::move(cc))
{
    if (delta_K <= 1 || !is_fundamental_discriminant(delta_K))
        throw config_error("delta_K=" + delta_K.get_str() + " is not a positive fundamental discriminant");
    if (c < 1)
        throw config_error("conductor must be a positive integer");
    disc = c * c * delta_K;
}

Form Form::act(M2 const & M) const
{
    mpz_class p = num_of(M.a), q = num_of(M.b), r = num_of(M.c), s = num_of(M.d);
    return Form(a * p * p + b * p * r + c * r * r,
                2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
                a * q * q + b * q * s + c * s * s);
}

bool Form::operator<(Form const & o) const
{
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

bool Form::is_primitive() const
{
    return gcd(gcd(a, b), c) == 1;
}

std::string Form::str() const
{
    std::ostringstream os;
    os << "(" << a << "," << b << "," << c << ")";
    return os.str();
}

bool is_reduced(Form const & f)
{
    mpz_class s = isqrt(f.disc());
    mpz_class A2 = 2 * abs(f.a);
    return f.b > 0 && f.b <= s && A2 + f.b > s && A2 - f.b <= s;
}

/* r = b mod 2|c| normalized as in the reduction operator */
static mpz_class rnorm(mpz_class const & b, mpz_class const & c, mpz_class const & s)
{
    mpz_class ac = abs(c), m = 2 * ac, lo;
    if (ac > s)
        lo = -ac + 1;
    else
        lo = s - m + 1;
    mpz_class t = b - lo;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    return lo + t;
}

Form rho(Form const & f, M2 * M)
{
    mpz_class D = f.disc(), s = isqrt(D);
    DARMON_ASSERT_ALWAYS(f.c != 0);
    mpz_class r = rnorm(-f.b, f.c, s);
    mpz_class sh = (r + f.b) / (2 * f.c);
    if (M)
        *M = M2(0, -1, 1, sh);
    return Form(f.c, r, (r * r - D) / (4 * f.c));
}

Form reduce(Form const & f, M2 * T)
{
    Form g = f;
    M2 acc;
    for (long it = 0; !is_reduced(g); it++) {
        if (it > 100000)
            throw internal_error("reduce: no convergence for " + f.str());
        M2 M;
        g = rho(g, &M);
        acc = acc * M;
    }
    if (T)
        *T = acc;
    return g;
}

std::vector<Form> cycle(Form const & f)
{
    DARMON_ASSERT_ALWAYS(is_reduced(f));
    std::vector<Form> cyc{f};
    for (Form g = rho(f); !(g == f); g = rho(g))
        cyc.push_back(g);
    return cyc;
}

Form compose(Form const & f, Form const & g)
{
    mpz_class D = f.disc();
    DARMON_ASSERT_ALWAYS(D == g.disc());
    mpz_class h = (f.b + g.b) / 2;
    mpz_class e1, u1, v1, e, w, u2;
    xgcd(e1, u1, v1, f.a, g.a);
    xgcd(e, u2, w, e1, h);
    mpz_class u = u1 * u2, v = v1 * u2;
    mpz_class A = f.a * g.a / (e * e);
    mpz_class B = (u * f.a * g.b + v * g.a * f.b + w * (f.b * g.b + D) / 2) / e;
    mpz_class m = 2 * abs(A);
    mpz_fdiv_r(B.get_mpz_t(), B.get_mpz_t(), m.get_mpz_t());
    mpz_class num = B * B - D;
    DARMON_ASSERT_ALWAYS(mpz_divisible_p(num.get_mpz_t(), mpz_class(4 * A).get_mpz_t()));
    return Form(A, B, num / (4 * A));
}

bool pell_bruteforce(mpz_class const & D, int n, long ybound, mpz_class & x, mpz_class & y)
{
    for (long yy = 1; yy <= ybound; yy++) {
        mpz_class t = D * yy * yy + 4 * n;
        if (t > 0 && is_square(t)) {
            x = isqrt(t);
            y = yy;
            return true;
        }
    }
    return false;
}

static Form principal(mpz_class const & D)
{
    long b0 = mpz_odd_p(D.get_mpz_t()) ? 1 : 0;
    return Form(1, b0, (b0 - D) / 4);
}

QuadUnit fundamental_unit(QuadOrder const & O)
{
    Form f0 = reduce(principal(O.disc));
    M2 A;
    Form g = f0;
    do {
        M2 M;
        g = rho(g, &M);
        A = A * M;
    } while (!(g == f0));
    DARMON_ASSERT_ALWAYS(f0.act(A) == f0);
    mpz_class t = num_of(A.trace());
    DARMON_ASSERT_ALWAYS(mpz_divisible_p(num_of(A.c).get_mpz_t(), f0.a.get_mpz_t()));
    mpz_class u = num_of(A.c) / f0.a;
    QuadUnit e;
    e.x = abs(t);
    e.y = abs(u) * O.c;
    e.norm = 1;
    DARMON_ASSERT_ALWAYS(e.x * e.x - O.delta_K * e.y * e.y == 4);
    return e;
}

NarrowClassGroup::NarrowClassGroup(QuadOrder const & O) : order(O)
{
    mpz_class D = O.disc;
    long maxdisc = env_bound("DARMON_MAX_DISC", 1000000);
    if (D > maxdisc)
        throw resource_error("narrow_class_group: discriminant " + D.get_str()
                + " exceeds DARMON_MAX_DISC=" + std::to_string(maxdisc));
    long s = isqrt(D).get_si();
    long Dl = D.get_si();
    std::vector<Form> reduced;
    for (long b = 1; b <= s; b++) {
        if ((b - Dl) % 2 != 0)
            continue;
        long N = (b * b - Dl) / 4;   /* = a c < 0 */
        for (long m = 1; 2 * m - b <= s; m++) {
            if (2 * m + b <= s)
                continue;
            if ((-N) % m != 0)
                continue;
            for (long sg : {1L, -1L}) {
                Form f(sg * m, b, N / (sg * m));
                if (f.is_primitive() && is_reduced(f))
                    reduced.push_back(f);
            }
        }
    }
    std::sort(reduced.begin(), reduced.end());
    std::map<Form, std::size_t> cyc_of;
    std::vector<Form> keys;
    for (auto const & f : reduced) {
        if (cyc_of.count(f))
            continue;
        auto cyc = cycle(f);
        Form key = *std::min_element(cyc.begin(), cyc.end());
        for (auto const & g : cyc)
            cyc_of[g] = keys.size();
        keys.push_back(key);
    }
    /* principal class first, then by key */
    std::size_t pidx = cyc_of.at(reduce(principal(D)));
    std::vector<std::size_t> perm(keys.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
        if ((i == pidx) != (j == pidx))
            return i == pidx;
        return keys[i] < keys[j];
    });
    std::vector<std::size_t> where(keys.size());
    for (std::size_t k = 0; k < perm.size(); k++) {
        where[perm[k]] = k;
        reps.push_back(keys[perm[k]]);
    }
    for (auto const & [f, i] : cyc_of)
        reduced_index[f] = where[i];
    h_plus = reps.size();
    dk_class = class_of(dk_form());
    h = dk_class == 0 ? h_plus : h_plus / 2;
    table.assign(h_plus, std::vector<std::size_t>(h_plus));
    for (std::size_t i = 0; i < h_plus; i++)
        for (std::size_t j = 0; j < h_plus; j++)
            table[i][j] = class_of(compose(reps[i], reps[j]));
    inv.resize(h_plus);
    for (std::size_t i = 0; i < h_plus; i++)
        inv[i] = class_of(Form(reps[i].a, -reps[i].b, reps[i].c));
}

std::size_t NarrowClassGroup::class_of(Form const & f) const
{
    if (f.disc() != order.disc)
        throw internal_error("class_of: wrong discriminant for " + f.str());
    if (!f.is_primitive())
        throw internal_error("class_of: form not primitive " + f.str());
    return reduced_index.at(reduce(f));
}

std::size_t NarrowClassGroup::pow(std::size_t i, long e) const
{
    if (e < 0) {
        i = inv[i];
        e = -e;
    }
    std::size_t r = 0;
    for (long k = 0; k < e; k++)
        r = table[r][i];
    return r;
}

std::size_t NarrowClassGroup::element_order(std::size_t i) const
{
    std::size_t k = 1;
    for (std::size_t x = i; x != 0; x = table[x][i])
        k++;
    return k;
}

Form NarrowClassGroup::principal_form() const
{
    return principal(order.disc);
}

Form NarrowClassGroup::dk_form() const
{
    Form p = principal(order.disc);
    return Form(-p.a, p.b, -p.c);
}

std::vector<RingClassCharacter> characters(NarrowClassGroup const & G)
{
    std::size_t h = G.h_plus;
    /* greedy generators: repeatedly add the least element of largest
     * order outside the current subgroup */
    std::vector<std::size_t> gens;
    std::set<std::size_t> H{0};
    while (H.size() < h) {
        std::size_t best = h;
        for (std::size_t i = 0; i < h; i++) {
            if (H.count(i))
                continue;
            if (best == h || G.element_order(i) > G.element_order(best))
                best = i;
        }
        gens.push_back(best);
        std::deque<std::size_t> todo(H.begin(), H.end());
        while (!todo.empty()) {
            std::size_t x = todo.front();
            todo.pop_front();
            for (std::size_t g : gens) {
                std::size_t y = G.mul(x, g);
                if (H.insert(y).second)
                    todo.push_back(y);
            }
        }
    }
    long L = 1;
    for (std::size_t i = 0; i < h; i++)
        L = std::lcm(L, (long) G.element_order(i));
    std::vector<std::vector<long>> found;
    std::vector<long> ords;
    for (std::size_t g : gens)
        ords.push_back((long) G.element_order(g));
    std::vector<long> k(gens.size(), 0);
    for (;;) {
        /* chi(gens[i]) = k[i]/ords[i] in Q/Z, scaled by L */
        std::vector<long> val(h, -1);
        val[0] = 0;
        bool ok = true;
        std::deque<std::size_t> todo{0};
        while (!todo.empty() && ok) {
            std::size_t x = todo.front();
            todo.pop_front();
            for (std::size_t i = 0; i < gens.size(); i++) {
                std::size_t y = G.mul(x, gens[i]);
                long v = (val[x] + k[i] * (L / ords[i])) % L;
                if (val[y] < 0) {
                    val[y] = v;
                    todo.push_back(y);
                } else if (val[y] != v) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            found.push_back(val);
        std::size_t i = 0;
        while (i < k.size() && ++k[i] == ords[i])
            k[i++] = 0;
        if (i == k.size())
            break;
    }
    std::sort(found.begin(), found.end());
    if (found.size() != h)
        throw internal_error("characters: found " + std::to_string(found.size())
                + " characters for a group of order " + std::to_string(h));
    std::vector<RingClassCharacter> out;
    for (auto const & val : found) {
        long g = L;
        for (long v : val)
            g = std::gcd(g, v);
        RingClassCharacter chi;
        chi.n = L / g;
        for (long v : val)
            chi.exps.push_back(v / g);
        chi.even = chi.exps[G.dk_class] == 0;
        out.push_back(chi);
    }
    return out;
}

QuadNumber operator+(QuadNumber const & u, QuadNumber const & v)
{
    DARMON_ASSERT_ALWAYS(u.delta == v.delta);
    return QuadNumber(u.x + v.x, u.y + v.y, u.delta);
}

QuadNumber operator-(QuadNumber const & u, QuadNumber const & v)
{
    DARMON_ASSERT_ALWAYS(u.delta == v.delta);
    return QuadNumber(u.x - v.x, u.y - v.y, u.delta);
}

QuadNumber operator*(QuadNumber const & u, QuadNumber const & v)
{
    DARMON_ASSERT_ALWAYS(u.delta == v.delta);
    return QuadNumber(u.x * v.x + u.delta * u.y * v.y, u.x * v.y + u.y * v.x, u.delta);
}

QuadNumber operator*(mpq_class const & s, QuadNumber const & v)
{
    return QuadNumber(s * v.x, s * v.y, v.delta);
}

QuadNumber operator/(QuadNumber const & u, QuadNumber const & v)
{
    mpq_class n = v.norm();
    if (n == 0)
        throw internal_error("QuadNumber: division by zero");
    QuadNumber w = u * v.conj();
    return QuadNumber(w.x / n, w.y / n, u.delta);
}

QuadNumber QuadNumber::moved(M2 const & g) const
{
    QuadNumber num = g.a * *this + QuadNumber(g.b, 0, delta);
    QuadNumber den = g.c * *this + QuadNumber(g.d, 0, delta);
    return num / den;
}

std::string QuadNumber::str() const
{
    std::ostringstream os;
    os << x << " + " << y << "*sqrt(" << delta << ")";
    return os.str();
}

} // namespace darmon
