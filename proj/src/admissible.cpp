#include "darmon/admissible.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <future>
#include <sstream>

namespace darmon {

namespace {

long powmod(long b, long e, long m)
{
    long r = 1 % m;
    b = mod(b, m);
    for (; e > 0; e >>= 1) {
        if (e & 1)
            r = (long) ((__int128) r * b % m);
        b = (long) ((__int128) b * b % m);
    }
    return r;
}

bool is_square_mod(long x, long p)
{
    x = mod(x, p);
    return x == 0 || powmod(x, (p - 1) / 2, p) == 1;
}

ConditionVerdict verdict(int i, bool pass, bool heuristic, std::string method)
{
    return ConditionVerdict{i, pass, heuristic, std::move(method)};
}

/* Frobenius sampling against the maximal subgroups of GL_2(F_p) not
 * containing SL_2: Borel and split Cartan normalizer (an irreducible
 * Frobenius with nonzero trace), nonsplit Cartan normalizer (a split
 * semisimple one with nonzero trace), exceptional images (a_q^2 / q
 * outside {0, 1, 2, 4} and the roots of u^2 - 3u + 1) */
ConditionVerdict condition3(EllipticCurve const & E, long p)
{
    if (p < 5)
        return verdict(3, false, true, "Frobenius sampling needs p >= 5");
    long const qmax = 1000;
    long irr = 0, split = 0, nonexc = 0;
    for (long q = 2; q <= qmax && !(irr && split && nonexc); q++) {
        if (!is_prime(q) || q == p || E.N % q == 0)
            continue;
        long a = mod(E.ap(q), p);
        long D = mod(a * a - 4 * q, p);
        if (a != 0 && !is_square_mod(D, p))
            irr = irr ? irr : q;
        if (a != 0 && D != 0 && is_square_mod(D, p))
            split = split ? split : q;
        long u = mod(a * a * powmod(q, p - 2, p), p);
        if (u != 0 && u != 1 && u != 2 && u != mod(4, p) && mod(u * u - 3 * u + 1, p) != 0)
            nonexc = nonexc ? nonexc : q;
    }
    std::ostringstream os;
    os << "Frobenius sampling at good q <= " << qmax << ": irreducible q=" << irr << ", split q=" << split
       << ", non-exceptional q=" << nonexc << "; p > 37: " << (p > 37 ? "yes" : "no");
    return verdict(3, irr && split && nonexc, true, os.str());
}

/* p does not divide c_v |E~_ns(F_{q^f})| at every q | N, f the residue
 * degree of H_c at q */
ConditionVerdict condition5(EllipticCurve const & E, NarrowClassGroup const & G, long p)
{
    std::ostringstream os;
    bool pass = true;
    os << "p does not divide c_v |E_ns(F_{q^f})| at q | N:";
    for (auto [q, e] : factor(E.N)) {
        if (e > 1) {
            os << " q=" << q << " additive, untested;";
            pass = false;
            continue;
        }
        long f = frobenius_order(G, q);
        int type = E.bad_reduction_type(q);
        if (type == -1 && f % 2 == 0)
            type = 1;
        mpz_class rest;
        long v = (long) mpz_remove(rest.get_mpz_t(), E.disc.get_mpz_t(), mpz_class(q).get_mpz_t());
        long cv = type == 1 ? v : (v % 2 == 0 ? 2 : 1);
        long ns = mod(powmod(q, f, p) - type, p);
        bool ok = ns != 0 && cv % p != 0;
        os << " q=" << q << " f=" << f << " c_v=" << cv << " " << (ok ? "ok" : "fails") << ";";
        pass = pass && ok;
    }
    return verdict(5, pass, true, os.str());
}

} // namespace

bool PrimeReport::exact_pass() const
{
    return condition(1).pass && condition(2).pass && condition(4).pass;
}

bool PrimeReport::all_pass() const
{
    for (auto const & c : conditions)
        if (!c.pass)
            return false;
    return true;
}

long condition2_prime(EllipticCurve const & E, long p, long bound)
{
    for (long r = 2; r <= bound; r++) {
        if (!is_prime(r) || (E.N * p) % r == 0)
            continue;
        if (mod(r + 1 - E.ap(r), p) != 0)
            return r;
    }
    return 0;
}

long frobenius_order(NarrowClassGroup const & G, long q)
{
    mpz_class D = G.order.disc;
    if (kronecker(D, q) != 1)
        throw precondition_error("frobenius_order: " + std::to_string(q) + " does not split in K");
    /* b = D mod 2, b^2 = D mod 4q */
    for (long b = 0; b < 2 * q; b++) {
        mpz_class t = mpz_class(b) * b - D;
        if (!mpz_divisible_ui_p(t.get_mpz_t(), (unsigned long) (4 * q)))
            continue;
        Form f(q, b, t / (4 * q));
        return (long) G.element_order(G.class_of(f));
    }
    throw internal_error("frobenius_order: no prime form above " + std::to_string(q));
}

PrimeReport check_p(EllipticCurve const & E, FQuotient const & F, NarrowClassGroup const & G, CycloElement const & L, long p)
{
    if (!is_prime(p))
        throw config_error("check_p: p = " + std::to_string(p) + " is not prime");
    PrimeReport R;
    R.p = p;
    QuadOrder const & O = G.order;

    R.conditions.push_back(verdict(1, !F.in_S(p), false, "p not in S"));

    R.r = condition2_prime(E, p);
    mpz_class prod = mpz_class(2) * O.c * E.N * O.delta_K * (long) G.h_plus;
    bool c2 = R.r != 0 && !mpz_divisible_ui_p(prod.get_mpz_t(), (unsigned long) p);
    std::ostringstream os;
    os << "p does not divide 2 c N delta_K h+ = " << prod << " nor r + 1 - a_r for r = " << R.r
       << "; the C factor is replaced by p not dividing t_ell for each admissible ell";
    R.conditions.push_back(verdict(2, c2, false, os.str()));

    R.conditions.push_back(condition3(E, p));

    R.conditions.push_back(verdict(4, !L.mod(p).is_zero(), false, "L reduced coordinatewise mod p"));

    R.conditions.push_back(condition5(E, G, p));
    return R;
}

bool locally_admissible(EllipticCurve const & E, QuadOrder const & O, long p, long ell, int * delta)
{
    if (!is_prime(ell) || E.N % ell == 0 || p == ell || mpz_divisible_ui_p(O.c.get_mpz_t(), (unsigned long) ell))
        return false;
    if (kronecker(O.delta_K, ell) != -1)
        return false;
    if (mod((ell % p) * (ell % p) - 1, p) == 0)
        return false;
    long a = E.ap(ell);
    if (mod((ell + 1 - a) * (ell + 1 + a), p) != 0)
        return false;
    if (delta)
        *delta = mod(a - (ell + 1), p) == 0 ? 1 : -1;
    return true;
}

std::vector<AdmissibleEll> sieve_ell(EllipticCurve const & E, ModularSymbols const & HN, QuadOrder const & O, long p, long bound)
{
    if (HN.level() != E.N)
        throw internal_error("sieve_ell: modular symbols of the wrong level");
    long max_level = env_bound("DARMON_MAX_T_LEVEL", 600);
    long phiN = euler_phi(E.N);
    std::vector<AdmissibleEll> cand;
    for (long ell = 2; ell <= bound; ell++) {
        AdmissibleEll a;
        if (!locally_admissible(E, O, p, ell, &a.delta))
            continue;
        a.ell = ell;
        a.a_ell = E.ap(ell);
        cand.push_back(a);
    }
    std::vector<std::future<mpz_class>> jobs;
    for (auto & a : cand) {
        a.t_computed = E.N * a.ell <= max_level;
        if (a.t_computed)
            jobs.push_back(std::async(std::launch::async, [&HN, l = a.ell]() { return t_ell(HN, l); }));
        else
            jobs.push_back(std::async(std::launch::deferred, [phiN, l = a.ell]() -> mpz_class { return mpz_class(6 * phiN) * (l * l - 1); }));
    }
    std::vector<AdmissibleEll> out;
    for (std::size_t i = 0; i < cand.size(); i++) {
        cand[i].t_ell = jobs[i].get();
        if (!mpz_divisible_ui_p(cand[i].t_ell.get_mpz_t(), (unsigned long) p))
            out.push_back(cand[i]);
    }
    return out;
}

} // namespace darmon
