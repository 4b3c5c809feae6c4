#include "darmon/cocycle.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace darmon {

bool in_gamma_ell(M2 const & g, long M, long ell)
{
    for (auto const * q : {&g.a, &g.b, &g.c, &g.d}) {
        mpz_class den = q->get_den();
        while (mpz_divisible_ui_p(den.get_mpz_t(), (unsigned long) ell))
            den /= ell;
        if (den != 1)
            return false;
    }
    return g.det() == 1 && mpz_divisible_ui_p(g.c.get_num().get_mpz_t(), (unsigned long) M);
}

M2 random_gamma_ell(std::uint64_t seed, long M, long ell, int len)
{
    M2 w = omega_ell(M, ell), wi = w.inverse();
    M2 g = M2::ints(1, 0, 0, 1);
    std::uint64_t st = seed;
    auto draw = [&](long m) {
        st = splitmix64(st);
        return (long) (st % (std::uint64_t) (2 * m + 1)) - m;
    };
    for (int i = 0; i < len; i++) {
        M2 h = M2::ints(1, draw(3), 0, 1) * M2::ints(1, 0, M * draw(2), 1) * M2::ints(1, draw(3), 0, 1);
        g = g * (i % 2 ? w * h * wi : h);
    }
    return g;
}

QuadNumber standard_point(long ell)
{
    for (long d = 2;; d++) {
        if (is_square(mpz_class(d)) || kronecker(mpz_class(d), ell) != -1)
            continue;
        if (ell == 2 && d % 8 != 5)
            continue;
        if (ell == 2)
            return QuadNumber(mpq_class(1, 2), mpq_class(1, 2), d);
        return QuadNumber(0, 1, d);
    }
}

Cocycle::Cocycle(ModularSymbols const & HM, ModularSymbols const & HMl, long ell, std::uint64_t perturb)
    : M(HM.level()), ell(ell), HM(HM), HMl(HMl), Y(HM.level(), ell, perturb)
{
    if (HMl.level() != M * ell)
        throw internal_error("Cocycle: level mismatch");
    std::size_t r = HM.rank(), R = HMl.rank();
    std::vector<M2> wg;
    for (auto const & x : Y.g)
        wg.push_back(Y.omega * x);
    up = ZMat(R, 2 * r);
    for (std::size_t j = 0; j < r; j++) {
        ZVec e(r);
        e[j] = 1;
        ZVec fe = HM.from_cuspidal(e);
        ZVec a = HMl.to_cuspidal(HMl.transport(HM, fe, Y.g));
        ZVec b = HMl.to_cuspidal(HMl.transport(HM, fe, wg));
        for (std::size_t i = 0; i < R; i++) {
            up(i, j) = a[i];
            up(i, r + j) = b[i];
        }
    }
    down1 = ZMat(r, R);
    down2 = ZMat(r, R);
    for (std::size_t j = 0; j < R; j++) {
        ZVec e(R);
        e[j] = 1;
        ZVec fe = HMl.from_cuspidal(e);
        ZVec a = HM.to_cuspidal(HM.transport(HMl, fe, {M2::ints(1, 0, 0, 1)}));
        ZVec b = HM.to_cuspidal(HM.transport(HMl, fe, {Y.omega}));
        for (std::size_t i = 0; i < r; i++) {
            down1(i, j) = a[i];
            down2(i, j) = b[i];
        }
    }
    quot = left_kernel_basis(up);
}

void Cocycle::check(M2 const & gamma) const
{
    if (!in_gamma_ell(gamma, M, ell))
        throw precondition_error("cocycle: " + gamma.str() + " is not in Gamma_ell");
}

M2 Cocycle::g_edge(M2 const & gamma, TreeEdge const & e) const
{
    check(gamma);
    TreeEdge e2 = act(gamma.inverse(), e);
    M2 g = Y.gamma_edge(e) * gamma * Y.gamma_edge(e2).inverse();
    DARMON_ASSERT_ALWAYS(g.is_integral() && in_gamma0(g, M * ell));
    return g;
}

M2 Cocycle::g_vertex(M2 const & gamma, TreeVertex const & v) const
{
    check(gamma);
    TreeVertex v2 = act(gamma.inverse(), v);
    M2 g = Y.gamma_vertex(v) * gamma * Y.gamma_vertex(v2).inverse();
    if (!v.even())
        g = Y.omega.inverse() * g * Y.omega;
    DARMON_ASSERT_ALWAYS(g.is_integral() && in_gamma0(g, M));
    return g;
}

ZVec Cocycle::mu_raw(M2 const & gamma, TreeEdge const & e) const
{
    if (!e.even()) {
        ZVec x = mu_raw(gamma, e.reversed());
        return scaled(x, -1);
    }
    return HMl.gamma_class(g_edge(gamma, e));
}

ZVec Cocycle::m_tilde(M2 const & gamma, TreeVertex const & v) const
{
    return HM.gamma_class(g_vertex(gamma, v));
}

ZVec Cocycle::ord_integral_raw(M2 const & g1, M2 const & g2) const
{
    check(g1);
    check(g2);
    ZVec s(HMl.rank());
    auto path = even_path(vstar(ell), act(g1.inverse(), vstar(ell)));
    for (std::size_t i = 0; i < path.size(); i++) {
        ZVec x = mu_raw(g2, path[i]);
        s = (i % 2 == 0) ? sub(s, x) : add(s, x);   /* (-1)^(i+1) */
    }
    return s;
}

long auxiliary_prime(EllipticCurve const & E, long M, long ell, long p)
{
    for (long r = 2;; r++) {
        if (!is_prime(r) || (ell * M * p) % r == 0 || E.N % r == 0)
            continue;
        if (mod(E.ap(r) - r - 1, p) != 0)
            return r;
    }
}

namespace {

long dot_mod(std::vector<long> const & row, ZVec const & x, long p)
{
    DARMON_ASSERT_ALWAYS(row.size() == x.size());
    mpz_class s = 0;
    for (std::size_t j = 0; j < row.size(); j++)
        s += row[j] * x[j];
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), s.get_mpz_t(), (unsigned long) p);
    return r.get_si();
}

} // namespace

long Projections::pr1(ZVec const & x, ZVec const & y) const
{
    return pr2(sub(x, scaled(y, delta)));
}

long Projections::pr3(ZVec const & x) const
{
    return dot_mod(pr3_row, x, p);
}

Projections make_projections(Cocycle const & C, FQuotient const & F, long a_ell, long p, int eps)
{
    Projections P;
    P.p = p;
    P.eps = eps;
    long l1 = C.ell + 1;
    bool plus = mod(a_ell - l1, p) == 0, minus = mod(a_ell + l1, p) == 0;
    if (plus == minus)
        throw precondition_error("admissibility: p = " + std::to_string(p) + " must divide exactly one of a_ell -+ (ell + 1) for ell = " + std::to_string(C.ell));
    P.delta = plus ? 1 : -1;
    P.pr2 = pr2_map(F, p, eps);
    long R = (long) C.HMl.rank();
    for (long j = 0; j < R; j++) {
        ZVec a = C.down1.col((std::size_t) j), b = C.down2.col((std::size_t) j);
        P.pr3_row.push_back(P.pr1(a, b));
    }
    return P;
}

long mu_tilde(Cocycle const & C, Projections const & P, M2 const & gamma, TreeEdge const & e)
{
    if (!e.even())
        return mod(-mu_tilde(C, P, gamma, e.reversed()), P.p);
    return P.pr1(C.m_tilde(gamma, e.s), C.m_tilde(gamma, e.t));
}

long mu_bar(Cocycle const & C, Projections const & P, M2 const & gamma, TreeEdge const & e)
{
    return P.pr3(C.mu_raw(gamma, e));
}

long ord_integral_fp(Cocycle const & C, Projections const & P, M2 const & g1, M2 const & g2)
{
    return P.pr3(C.ord_integral_raw(g1, g2));
}

long alpha_tau(Cocycle const & C, Projections const & P, M2 const & gamma)
{
    if (P.delta != -1)
        throw precondition_error("alpha_tau: the splitting is only available for delta = -1");
    return P.pr2(C.m_tilde(gamma, vstar(C.ell)));
}

namespace {

/* O_{K_ell} / ell^k on the basis 1, theta */
struct LocalRing {
    long ell;
    mpz_class q, delta;     /* q = ell^k */

    std::pair<mpz_class, mpz_class> norm(mpz_class a, mpz_class b) const
    {
        mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
        mpz_fdiv_r(b.get_mpz_t(), b.get_mpz_t(), q.get_mpz_t());
        return {a, b};
    }
    std::pair<mpz_class, mpz_class> mul(std::pair<mpz_class, mpz_class> const & x, std::pair<mpz_class, mpz_class> const & y) const
    {
        mpz_class ac = x.first * y.first, bd = x.second * y.second, cross = x.first * y.second + x.second * y.first;
        if (ell == 2)
            return norm(ac + bd * ((delta - 1) / 4), cross + bd);
        return norm(ac + bd * delta, cross);
    }
    std::pair<mpz_class, mpz_class> inv(std::pair<mpz_class, mpz_class> const & x) const
    {
        auto [a, b] = x;
        mpz_class n, ca, cb;
        if (ell == 2) {
            n = a * a + a * b - ((delta - 1) / 4) * b * b;
            ca = a + b;
            cb = -b;
        } else {
            n = a * a - delta * b * b;
            ca = a;
            cb = -b;
        }
        mpz_class ni;
        if (!mpz_invert(ni.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t()))
            throw internal_error("riemann_integral: non-unit in the unit part");
        return norm(ca * ni, cb * ni);
    }
    std::pair<mpz_class, mpz_class> pow(std::pair<mpz_class, mpz_class> x, mpz_class e) const
    {
        if (e < 0) {
            x = inv(x);
            e = -e;
        }
        std::pair<mpz_class, mpz_class> r{1, 0};
        r = norm(r.first, r.second);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t()))
                r = mul(r, x);
            x = mul(x, x);
            e /= 2;
        }
        return r;
    }
};

/* coordinates of X + Y sqrt(delta) on 1, theta */
std::pair<mpq_class, mpq_class> theta_coords(mpq_class const & X, mpq_class const & Y, long ell)
{
    if (ell == 2)
        return {X - Y, 2 * Y};
    return {X, Y};
}

} // namespace

RiemannResult riemann_integral(Divisor const & d, EdgeMass const & mass_even, std::size_t dim, long ell, int depth)
{
    if (depth < 1)
        throw precondition_error("riemann_integral: depth must be at least 1");
    if (d.empty())
        throw precondition_error("riemann_integral: empty divisor");
    long deg = 0;
    mpz_class delta = d.front().first.delta;
    std::set<TreeVertex> hull{vstar(ell)};
    for (auto const & [tau, n] : d) {
        deg += n;
        if (tau.delta != delta)
            throw precondition_error("riemann_integral: points of different quadratic fields");
        for (auto const & v : geodesic_vertices(vstar(ell), reduce_point(tau, ell)))
            hull.insert(v);
    }
    if (deg != 0)
        throw precondition_error("riemann_integral: the divisor must have degree 0");

    /* the first layer of edges leaving the hull */
    std::vector<TreeEdge> layer;
    for (auto const & u : hull)
        for (auto const & x : neighbors(u))
            if (!hull.count(x))
                layer.push_back({u, x});
    long budget = env_bound("DARMON_MAX_BALLS", 2000000);
    mpz_class nballs;
    mpz_ui_pow_ui(nballs.get_mpz_t(), (unsigned long) ell, (unsigned long) (depth - 1));
    nballs *= (unsigned long) layer.size();
    if (nballs > budget)
        throw resource_error("riemann_integral: depth " + std::to_string(depth) + " needs " + nballs.get_str() + " balls, above DARMON_MAX_BALLS = " + std::to_string(budget));
    for (int k = 1; k < depth; k++) {
        std::vector<TreeEdge> next;
        for (auto const & f : layer)
            for (auto const & y : neighbors(f.t))
                if (y != f.s)
                    next.push_back({f.t, y});
        layer.swap(next);
    }

    RiemannResult res;
    res.depth = depth;
    res.precision = depth;
    res.balls = layer.size();
    res.valuation = ZVec(dim);
    LocalRing R{ell, 0, delta};
    mpz_ui_pow_ui(R.q.get_mpz_t(), (unsigned long) ell, (unsigned long) depth);
    res.unit.assign(dim, R.norm(1, 0));

    for (auto const & f : layer) {
        ZVec m = f.even() ? mass_even(f) : scaled(mass_even(f.reversed()), -1);
        DARMON_ASSERT_ALWAYS(m.size() == dim);
        if (is_zero(m))
            continue;
        /* a rational end through f: the line of a vector of L_t(f) whose
         * first step leaves t(f) away from s(f) */
        M2 B = f.t.basis();
        auto nb = neighbors(f.t);
        std::size_t k = 0;
        while (nb[k] == f.s)
            k++;
        mpq_class w1, w2;
        if (k < (std::size_t) ell) {
            w1 = B.a * k + B.b;
            w2 = B.c * k + B.d;
        } else {
            w1 = B.a;
            w2 = B.c;
        }
        if (w2 == 0)
            continue;   /* f_d(oo) = 1 */
        mpq_class t = w1 / w2;
        long v = 0;
        std::pair<mpz_class, mpz_class> u = R.norm(1, 0);
        for (auto const & [tau, n] : d) {
            auto [A, Bq] = theta_coords(t - tau.x, -tau.y, ell);
            int va = A == 0 ? std::numeric_limits<int>::max() : valuation(A, ell);
            int vb = Bq == 0 ? std::numeric_limits<int>::max() : valuation(Bq, ell);
            int vz = std::min(va, vb);
            mpz_class pk;
            mpz_ui_pow_ui(pk.get_mpz_t(), (unsigned long) ell, (unsigned long) std::abs(vz));
            mpq_class s = vz >= 0 ? mpq_class(mpz_class(1), pk) : mpq_class(pk);
            std::pair<mpz_class, mpz_class> z{reduce_mod(A * s, R.q), reduce_mod(Bq * s, R.q)};
            v += n * vz;
            u = R.mul(u, R.pow(z, n));
        }
        for (std::size_t j = 0; j < dim; j++) {
            res.valuation[j] += m[j] * v;
            res.unit[j] = R.mul(res.unit[j], R.pow(u, m[j]));
        }
    }
    return res;
}

RiemannResult riemann_integral(Cocycle const & C, Divisor const & d, M2 const & gamma, int depth)
{
    EdgeMass mass = [&](TreeEdge const & f) { return scaled(C.mu_Y(gamma, f), -1); };
    return riemann_integral(d, mass, C.rank_H(), C.ell, depth);
}

} // namespace darmon
