#include "darmon/modsym.hpp"
#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <algorithm>
#include <set>

namespace darmon {

/* ---------------------------------------------------------------- P^1 */

std::pair<long, long> P1List::canonical(long c, long d) const
{
    if (N == 1)
        return {0, 0};
    c = mod(c, N);
    d = mod(d, N);
    long g = gcd(c, N);
    if (gcd(g, d) != 1)
        throw internal_error("P1List: (" + std::to_string(c) + ":" + std::to_string(d)
                + ") is not a point of P^1(Z/" + std::to_string(N) + ")");
    if (g == N)
        return {0, 1};
    long Ng = N / g;
    long u = invmod(mod(c / g, Ng), Ng);
    while (gcd(u, N) != 1)
        u += Ng;
    long d1 = (long) ((__int128) u * d % N);
    long best = N;
    for (long v = 1; v < N; v += Ng) {
        if (gcd(v, N) != 1)
            continue;
        long x = (long) ((__int128) v * d1 % N);
        best = std::min(best, x);
    }
    return {g, best};
}

P1List::P1List(long N_) : N(N_)
{
    if (N < 1)
        throw config_error("level must be positive");
    long maxlev = env_bound("DARMON_MAX_LEVEL", 200000);
    if (N > maxlev)
        throw resource_error("level " + std::to_string(N) + " exceeds DARMON_MAX_LEVEL");
    std::set<std::pair<long, long>> all;
    if (N == 1) {
        all.insert({0, 0});
    } else {
        all.insert({0, 1});
        for (long g : divisors(N)) {
            if (g == N)
                continue;
            for (long d = 0; d < N; d++)
                if (gcd(g, d) == 1)
                    all.insert(canonical(g, d));
        }
    }
    reps.assign(all.begin(), all.end());
    for (std::size_t i = 0; i < reps.size(); i++)
        idx[reps[i].first * N + reps[i].second] = i;
}

std::size_t P1List::index(long c, long d) const
{
    auto cd = canonical(c, d);
    auto it = idx.find(cd.first * N + cd.second);
    DARMON_ASSERT_ALWAYS(it != idx.end());
    return it->second;
}

std::size_t P1List::index(mpz_class const & c, mpz_class const & d) const
{
    mpz_class cc, dd;
    mpz_fdiv_r_ui(cc.get_mpz_t(), c.get_mpz_t(), N);
    mpz_fdiv_r_ui(dd.get_mpz_t(), d.get_mpz_t(), N);
    return index(cc.get_si(), dd.get_si());
}

M2 P1List::lift(std::size_t i) const
{
    auto [c, d] = reps[i];
    if (N == 1)
        return M2();
    long c1 = (c == 0) ? N : c;
    long d1 = d;
    while (gcd(c1, d1) != 1)
        d1 += N;
    mpz_class g, u, v;
    xgcd(g, u, v, mpz_class(d1), mpz_class(c1));
    /* u d1 + v c1 = 1, so [[u, -v], [c1, d1]] has determinant 1 */
    return M2(mpq_class(u), mpq_class(-v), c1, d1);
}

/* --------------------------------------------------------------- cusps */

Cusp::Cusp(mpz_class p_, mpz_class q_) : p(std::move(p_)), q(std::move(q_))
{
    if (p == 0 && q == 0)
        throw internal_error("Cusp: 0/0");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (q == 0) {
        p = 1;
        return;
    }
    mpz_class g = gcd(p, q);
    p /= g;
    q /= g;
}

Cusp Cusp::moved(M2 const & g) const
{
    mpq_class x = g.a * p + g.b * q;
    mpq_class y = g.c * p + g.d * q;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), x.get_den().get_mpz_t(), y.get_den().get_mpz_t());
    x *= l;
    y *= l;
    return Cusp(num_of(x), num_of(y));
}

bool cusps_equivalent(Cusp const & x, Cusp const & y, long N)
{
    /* a1/c1 ~ a2/c2 under Gamma_0(N) iff s1 c2 = s2 c1 mod gcd(c1 c2, N)
     * where a_j s_j = 1 mod c_j */
    auto sinv = [](Cusp const & z) -> mpz_class {
        if (z.q == 0)
            return 1;
        if (z.q == 1)
            return 0;
        mpz_class s;
        mpz_invert(s.get_mpz_t(), z.p.get_mpz_t(), z.q.get_mpz_t());
        return s;
    };
    mpz_class s1 = sinv(x), s2 = sinv(y);
    mpz_class g = gcd(mpz_class(x.q * y.q), mpz_class(N));
    mpz_class diff = s1 * y.q - s2 * x.q;
    return mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()) != 0;
}

/* ----------------------------------------------------- modular symbols */

std::size_t ModularSymbols::cusp_lookup(Cusp const & x) const
{
    for (std::size_t i = 0; i < cusps.size(); i++)
        if (cusps_equivalent(cusps[i], x, N))
            return i;
    return cusps.size();
}

std::size_t ModularSymbols::cusp_index(Cusp const & x)
{
    std::size_t i = cusp_lookup(x);
    if (i == cusps.size())
        cusps.push_back(x);
    return i;
}

ModularSymbols::ModularSymbols(long N_) : N(N_), P1(N_)
{
    std::size_t n = P1.size();
    std::vector<ZVec> rels;
    for (std::size_t i = 0; i < n; i++) {
        auto [c, d] = P1.rep(i);
        std::size_t iS = P1.index(d, -c);
        std::size_t iU = P1.index(d, -c - d);
        std::size_t iU2 = P1.index(-c - d, c);
        if (i <= iS) {
            ZVec r(n);
            r[i] += 1;
            r[iS] += 1;
            rels.push_back(r);
        }
        if (i <= iU && i <= iU2) {
            ZVec r(n);
            r[i] += 1;
            r[iU] += 1;
            r[iU2] += 1;
            rels.push_back(r);
        }
    }
    ZMat R = ZMat::from_rows(rels, n);
    ZMat K = kernel_basis(R);           /* n x k, functionals killing the relations */
    k = K.nc;
    symcoord.resize(n);
    for (std::size_t i = 0; i < n; i++)
        symcoord[i] = K.row(i);

    /* integral section: U K = [I; 0] since K is saturated */
    ZMat H = K, U;
    hnf_rows(H, &U);
    for (std::size_t i = 0; i < k; i++)
        for (std::size_t j = 0; j < k; j++)
            DARMON_ASSERT_ALWAYS(H(i, j) == (i == j ? 1 : 0));
    section = ZMat(n, k);
    for (std::size_t i = 0; i < k; i++)
        for (std::size_t j = 0; j < n; j++)
            section(j, i) = U(i, j);

    /* boundary of (c:d) = g{0, oo} is [g oo] - [g 0] */
    ends.resize(n);
    std::vector<std::pair<std::size_t, std::size_t>> bidx(n);
    for (std::size_t i = 0; i < n; i++) {
        M2 g = P1.lift(i);
        Cusp z0 = Cusp(num_of(g.b), num_of(g.d));
        Cusp zi = Cusp(num_of(g.a), num_of(g.c));
        ends[i] = {z0, zi};
        bidx[i] = {cusp_index(zi), cusp_index(z0)};
    }
    ZMat Bfull(cusps.size(), n);
    for (std::size_t i = 0; i < n; i++) {
        Bfull(bidx[i].first, i) += 1;
        Bfull(bidx[i].second, i) -= 1;
    }
    bound = Bfull * section;
    DARMON_ASSERT_ALWAYS(bound * K.transpose() == Bfull);
    C = kernel_basis(bound);
    if (C.nc > 0)
        solver = ColumnSolver(C);
}

ZVec ModularSymbols::symbol_from_infinity(Cusp const & b) const
{
    ZVec v(k);
    if (b.is_infinity())
        return v;
    /* convergents p_k/q_k of b; {x_{k-1}, x_k} is the Manin symbol
     * (q_k : (-1)^(k-1) q_{k-1}) */
    mpz_class num = b.p, den = b.q, a, t;
    mpz_class pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
    int sign = -1;
    for (;;) {
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        mpz_class pk = a * pm1 + pm2, qk = a * qm1 + qm2;
        std::size_t i = P1.index(qk, mpz_class(sign * qm1));
        auto const & s = symcoord[i];
        for (std::size_t j = 0; j < k; j++)
            if (s[j] != 0)
                v[j] += s[j];
        pm2 = pm1;
        qm2 = qm1;
        pm1 = pk;
        qm1 = qk;
        sign = -sign;
        t = num - a * den;
        if (t == 0)
            break;
        num = den;
        den = t;
    }
    return v;
}

ZVec ModularSymbols::symbol(Cusp const & a, Cusp const & b) const
{
    return sub(symbol_from_infinity(b), symbol_from_infinity(a));
}

ZVec ModularSymbols::boundary(ZVec const & free) const
{
    return bound * free;
}

bool ModularSymbols::is_cuspidal(ZVec const & free) const
{
    return is_zero(boundary(free));
}

ZVec ModularSymbols::to_cuspidal(ZVec const & free) const
{
    if (C.nc == 0) {
        if (!is_zero(free))
            throw internal_error("to_cuspidal: nonzero vector in a space of rank 0");
        return {};
    }
    auto y = solver.solve_z(free);
    if (!y)
        throw internal_error("to_cuspidal: vector is not in the integral cuspidal lattice");
    return *y;
}

ZVec ModularSymbols::gamma_class(M2 const & g) const
{
    if (!in_gamma0(g, N))
        throw precondition_error("gamma_class: " + g.str() + " is not in Gamma_0(" + std::to_string(N) + ")");
    return to_cuspidal(symbol_from_infinity(Cusp(num_of(g.a), num_of(g.c))));
}

ZVec ModularSymbols::transport(ModularSymbols const & src, ZVec const & free_src, std::vector<M2> const & hs) const
{
    ZVec lift = src.section * free_src;
    ZVec out(k);
    for (std::size_t j = 0; j < lift.size(); j++) {
        if (lift[j] == 0)
            continue;
        auto const & [z0, zi] = src.ends[j];
        for (auto const & h : hs) {
            ZVec s = symbol(z0.moved(h), zi.moved(h));
            for (std::size_t t = 0; t < k; t++)
                if (s[t] != 0)
                    out[t] += lift[j] * s[t];
        }
    }
    return out;
}

ZMat ModularSymbols::operator_from(std::vector<M2> const & hs) const
{
    std::size_t r = rank();
    ZMat X(r, r);
    for (std::size_t j = 0; j < r; j++) {
        ZVec img = to_cuspidal(transport(*this, C.col(j), hs));
        for (std::size_t i = 0; i < r; i++)
            X(i, j) = img[i];
    }
    return X;
}

ZMat ModularSymbols::hecke(long q) const
{
    {
        std::lock_guard<std::mutex> lk(hcache->mx);
        auto it = hcache->hecke.find(q);
        if (it != hcache->hecke.end())
            return it->second;
    }
    if (!is_prime(q))
        throw internal_error("hecke: " + std::to_string(q) + " is not prime");
    std::vector<M2> hs;
    for (long j = 0; j < q; j++)
        hs.push_back(M2::ints(1, j, 0, q));
    if (N % q != 0)
        hs.push_back(M2::ints(q, 0, 0, 1));
    ZMat T = operator_from(hs);
    std::lock_guard<std::mutex> lk(hcache->mx);
    hcache->hecke[q] = T;
    return T;
}

ZMat ModularSymbols::tau() const
{
    return operator_from({M2::ints(-1, 0, 0, 1)});
}

/* ---------------------------------------------------------- f-quotient */

bool FQuotient::in_S(long p) const
{
    return std::find(S.begin(), S.end(), p) != S.end();
}

static ZMat hecke_minus_scalar(ModularSymbols const & H, long q, long aq)
{
    ZMat T = H.hecke(q);
    for (std::size_t i = 0; i < T.nr; i++)
        T(i, i) -= aq;
    return T;
}

FQuotient f_isotypic(ModularSymbols const & H, EllipticCurve const & E)
{
    long N = H.level();
    if (E.N != N)
        throw precondition_error("f_isotypic: curve conductor " + std::to_string(E.N)
                + " differs from the level " + std::to_string(N));
    std::size_t r = H.rank();
    if (r < 2)
        throw precondition_error("f_isotypic: H_1(X_0(" + std::to_string(N) + ")) has rank "
                + std::to_string(r));

    /* index of Gamma_0(N) in SL_2(Z); primes up to psi/6 separate
     * eigensystems (Sturm), more are added only if needed */
    long psi = N;
    for (auto [q, e] : factor(N)) {
        (void) e;
        psi = psi / q * (q + 1);
    }
    long qbound = std::max(3L, psi / 6 + 1);

    FQuotient F;
    F.level = N;
    std::vector<ZMat> Js;
    ZMat phi;
    for (long q : primes_up_to(std::max(qbound, 200L))) {
        if (N % (q * q) == 0)
            continue;
        Js.push_back(hecke_minus_scalar(H, q, E.ap(q)));
        F.primes_used.push_back(q);
        if (q < qbound)
            continue;
        ZMat JJ(r, r * Js.size());
        for (std::size_t t = 0; t < Js.size(); t++)
            for (std::size_t i = 0; i < r; i++)
                for (std::size_t j = 0; j < r; j++)
                    JJ(i, t * r + j) = Js[t](i, j);
        phi = left_kernel_basis(JJ);
        if (phi.nr <= 2)
            break;
    }
    if (phi.nr != 2)
        throw precondition_error("f_isotypic: the Hecke eigensystem of " + E.label
                + " does not cut out a rank-2 quotient (found rank " + std::to_string(phi.nr) + ")");
    F.phi = phi;

    /* torsion of H_1 / I_f H_1 and the lattice H_1^f */
    std::size_t m = Js.size();
    ZMat JJ(r, r * m), Jv(r * m, r);
    for (std::size_t t = 0; t < m; t++)
        for (std::size_t i = 0; i < r; i++)
            for (std::size_t j = 0; j < r; j++) {
                JJ(i, t * r + j) = Js[t](i, j);
                Jv(t * r + i, j) = Js[t](i, j);
            }
    std::set<long> tors;
    for (auto const & d : elementary_divisors(JJ))
        for (long q : prime_divisors(d))
            tors.insert(q);
    F.torsion_primes.assign(tors.begin(), tors.end());
    ZMat Kf = kernel_basis(Jv);
    DARMON_ASSERT_ALWAYS(Kf.nc == 2);
    F.d_E = elementary_divisors(phi * Kf);
    DARMON_ASSERT_ALWAYS(F.d_E.size() == 2);
    std::set<long> S(tors);
    mpz_class sixd = 6 * F.d_E[0] * F.d_E[1];
    for (long q : prime_divisors(sixd))
        S.insert(q);
    F.S.assign(S.begin(), S.end());

    /* tau on the quotient: phi tau = tau_f phi */
    ZMat pt = phi * H.tau();
    ColumnSolver sol(phi.transpose());
    F.tau_f = ZMat(2, 2);
    for (std::size_t i = 0; i < 2; i++) {
        auto y = sol.solve_z(pt.row(i));
        if (!y)
            throw internal_error("f_isotypic: tau does not preserve the f-quotient");
        F.tau_f(i, 0) = (*y)[0];
        F.tau_f(i, 1) = (*y)[1];
    }
    for (int eps : {1, -1}) {
        ZMat A = F.tau_f;
        A(0, 0) -= eps;
        A(1, 1) -= eps;
        ZMat Ker = kernel_basis(A);
        DARMON_ASSERT_ALWAYS(Ker.nc == 1);
        ZVec a = Ker.col(0);
        /* sign: first nonzero coordinate positive */
        for (auto const & x : a)
            if (x != 0) {
                if (x < 0)
                    a = scaled(a, -1);
                break;
            }
        (eps > 0 ? F.alpha_plus : F.alpha_minus) = a;
    }
    return F;
}

bool hecke_acts_by_scalar(ModularSymbols const & H, FQuotient const & F, long q, long aq)
{
    return F.phi * H.hecke(q) == scalar(F.phi, aq);
}

long Pr2::operator()(ZVec const & x) const
{
    DARMON_ASSERT_ALWAYS(x.size() == row.size());
    mpz_class s = 0;
    for (std::size_t j = 0; j < row.size(); j++)
        s += row[j] * x[j];
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), s.get_mpz_t(), p);
    return r.get_si();
}

Pr2 pr2_map(FQuotient const & F, long p, int eps)
{
    if (!is_prime(p) || p == 2)
        throw precondition_error("pr2: p = " + std::to_string(p) + " must be an odd prime");
    if (F.in_S(p))
        throw precondition_error("condition 1 (p not in S): p = " + std::to_string(p) + " lies in S");
    Pr2 P;
    P.p = p;
    P.eps = eps;
    ZVec const & a = F.alpha(eps);
    std::size_t piv = 0;
    while (a[piv] == 0)
        piv++;
    long inv2 = invmod(2, p);
    std::size_t r = F.phi.nc;
    P.row.resize(r);
    bool nonzero = false;
    for (std::size_t j = 0; j < r; j++) {
        ZVec v = F.phi.col(j);
        ZVec w = add(v, scaled(F.tau_f * v, eps));
        mpz_class kk = w[piv] / a[piv];
        DARMON_ASSERT_ALWAYS(w == scaled(a, kk));
        mpz_class t = kk * inv2, rr;
        mpz_fdiv_r_ui(rr.get_mpz_t(), t.get_mpz_t(), p);
        P.row[j] = rr.get_si();
        nonzero |= P.row[j] != 0;
    }
    if (!nonzero)
        throw precondition_error("pr2: the eps-eigenline of the f-quotient vanishes mod p");
    return P;
}

/* ------------------------------------------------------ level raising */

M2 omega_ell(long M, long ell)
{
    long y = mod(-invmod(mod(M, ell), ell), ell);
    return M2::ints(ell, y, M * ell, 1 + M * y);
}

mpz_class t_ell(ModularSymbols const & HM, long ell)
{
    long M = HM.level();
    if (!is_prime(ell) || M % ell == 0)
        throw precondition_error("t_ell: ell must be a prime not dividing M");
    std::size_t r = HM.rank();
    if (r == 0)
        return 1;
    long N2 = M * ell;
    P1List P(N2);
    M2 w = omega_ell(M, ell), wi = w.inverse();
    M2 S = M2::ints(0, -1, 1, 0), T = M2::ints(1, 1, 0, 1);
    std::vector<M2> reps(P.size());
    for (std::size_t i = 0; i < P.size(); i++)
        reps[i] = P.lift(i);

    /* Schreier generators r_x s r_{xs}^-1 of Gamma_0(M ell) */
    std::vector<ZVec> rows;
    ZMat acc(0, 2 * r);
    auto flush = [&]() {
        ZMat A(acc.nr + rows.size(), 2 * r);
        for (std::size_t i = 0; i < acc.nr; i++)
            for (std::size_t j = 0; j < 2 * r; j++)
                A(i, j) = acc(i, j);
        for (std::size_t i = 0; i < rows.size(); i++)
            for (std::size_t j = 0; j < 2 * r; j++)
                A(acc.nr + i, j) = rows[i][j];
        std::size_t rk = hnf_rows(A);
        acc = ZMat(rk, 2 * r);
        for (std::size_t i = 0; i < rk; i++)
            for (std::size_t j = 0; j < 2 * r; j++)
                acc(i, j) = A(i, j);
        rows.clear();
    };
    for (std::size_t i = 0; i < P.size(); i++) {
        for (M2 const & s : {S, T}) {
            M2 g = reps[i] * s;
            std::size_t j = P.index(num_of(g.c), num_of(g.d));
            M2 gam = g * reps[j].inverse();
            DARMON_ASSERT_ALWAYS(in_gamma0(gam, N2));
            ZVec v1 = HM.gamma_class(gam);
            ZVec v2 = HM.gamma_class(w * gam * wi);
            ZVec row(v1);
            row.insert(row.end(), v2.begin(), v2.end());
            if (!is_zero(row))
                rows.push_back(row);
        }
        if (rows.size() > 64)
            flush();
    }
    flush();
    auto d = elementary_divisors(acc);
    if (d.size() != 2 * r)
        throw internal_error("t_ell: the cokernel of pi_* is infinite");
    return d.back();
}

} // namespace darmon
