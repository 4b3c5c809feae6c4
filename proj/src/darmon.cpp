#include "darmon/darmon.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"
#include "darmon/tree.hpp"

#include <chrono>

namespace darmon {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

/* chi^-1(sigma) a_sigma summed in F_p[zeta_n] and multiplied by t */
CycloElement twist_mod_p(std::vector<long> const & a, RingClassCharacter const & chi, mpz_class const & t, long p)
{
    CycloElement s(chi.n);
    for (std::size_t i = 0; i < a.size(); i++)
        s = s + CycloElement::zeta_power(chi.n, -chi.value_exp(i)).scaled(a[i]);
    return s.scaled(t).mod(p);
}

void check_inputs(Cocycle const & C, Projections const & P, std::vector<OrientedEmbedding> const & psi, RingClassCharacter const & chi)
{
    if (P.delta != -1)
        throw precondition_error("partial_P_chi: delta = -1 is required");
    if (psi.size() != chi.exps.size())
        throw internal_error("partial_P_chi: character and family have different sizes");
    TreeVertex v0 = vstar(C.ell);
    for (auto const & e : psi)
        if (!(reduce_point(e.z(), C.ell) == v0))
            throw precondition_error("partial_P_chi: r(z_psi) != v*; c and ell must be coprime");
}

} // namespace

OrientedEmbedding conjugate_embedding(OrientedEmbedding const & e, M2 const & h)
{
    if (!in_gamma0(h, e.M))
        throw internal_error("conjugate_embedding: h is not in Gamma_0(M)");
    M2 hi = h.inverse();
    OrientedEmbedding r = e;
    r.W = h * e.W * hi;
    r.gamma = h * e.gamma * hi;
    r.form = Form(num_of(r.W.c), num_of(r.W.d - r.W.a), -num_of(r.W.b));
    return r;
}

M2 random_gamma0(std::uint64_t seed, long N)
{
    for (std::uint64_t k = 0;; k++) {
        std::uint64_t x = splitmix64(seed * 0x9e3779b97f4a7c15ULL + k);
        long c = N * ((long) (x % 15) - 7);
        long d = (long) ((x >> 16) % 41) - 20;
        if (gcd(c, d) != 1)
            continue;
        mpz_class g, u, v;
        xgcd(g, u, v, mpz_class(d), mpz_class(c));
        long t = (long) ((x >> 32) % 7) - 3;
        /* u d + v c = 1 */
        return M2(mpq_class(u + t * c), mpq_class(-v + t * d), c, d);
    }
}

CycloElement partial_P_chi(Cocycle const & C, Projections const & P, std::vector<OrientedEmbedding> const & psi,
        RingClassCharacter const & chi, mpz_class const & t)
{
    check_inputs(C, P, psi, chi);
    std::vector<long> a;
    for (auto const & e : psi)
        a.push_back(alpha_tau(C, P, e.gamma));
    return twist_mod_p(a, chi, t, P.p);
}

CycloElement partial_P_chi_factored(Cocycle const & C, Projections const & P, std::vector<OrientedEmbedding> const & psi,
        RingClassCharacter const & chi, mpz_class const & t, std::uint64_t seed)
{
    check_inputs(C, P, psi, chi);
    std::vector<long> a;
    for (std::size_t i = 0; i < psi.size(); i++) {
        M2 g = random_gamma_ell(splitmix64(seed + i), C.M, C.ell, 2 + (int) (i % 4));
        M2 h = g.inverse() * psi[i].gamma;
        a.push_back(mod(alpha_tau(C, P, g) + alpha_tau(C, P, h) + ord_integral_fp(C, P, g, h), P.p));
    }
    return twist_mod_p(a, chi, t, P.p);
}

ReciprocityReport reciprocity_check(ReciprocityInstance const & inst)
{
    EllipticCurve const & E = inst.E;
    long N = E.N, ell = inst.ell, p = inst.p;
    if (!is_prime(ell))
        throw config_error("reciprocity: ell = " + std::to_string(ell) + " is not prime");
    if (!is_prime(p))
        throw config_error("reciprocity: p = " + std::to_string(p) + " is not prime");
    if (inst.splitting_pairs < 0)
        throw config_error("reciprocity: splitting_pairs must be nonnegative");
    QuadOrder O(inst.delta_K, inst.c);
    SigmaSplit split = sigma_split(E, O);
    if (split.D != 1)
        throw precondition_error("D = 1: the primes " + std::to_string(split.D) + " of N are inert in K");

    ReciprocityReport R;
    R.inst = inst;
    EmbeddingFamily fam(O, N);
    R.h_plus = fam.G.h_plus;
    auto chis = characters(fam.G);
    if (inst.chi >= chis.size())
        throw config_error("reciprocity: character index " + std::to_string(inst.chi) + " out of range (h+ = " + std::to_string(chis.size()) + ")");
    R.chi = chis[inst.chi];
    R.eps = character_sign(fam.G, R.chi);

    /* admissibility of ell */
    if (N % ell == 0 || ell == p || mpz_divisible_ui_p(O.c.get_mpz_t(), (unsigned long) ell))
        throw precondition_error("admissible condition 1: ell divides N p c");
    if (kronecker(O.delta_K, ell) != -1)
        throw precondition_error("admissible condition 3: ell is not inert in K");
    if (mod((ell % p) * (ell % p) - 1, p) == 0)
        throw precondition_error("admissible condition 4: p divides ell^2 - 1");
    long a_ell = E.ap(ell);
    if (mod((ell + 1 - a_ell) * (ell + 1 + a_ell), p) != 0)
        throw precondition_error("admissible condition 5: p does not divide (ell + 1)^2 - a_ell^2");
    R.delta = mod(a_ell - (ell + 1), p) == 0 ? 1 : -1;
    if (R.delta != -1)
        throw precondition_error("delta = -1: p divides a_ell - (ell + 1), the splitting is not available");

    /* rhs: homology */
    auto t0 = clock_type::now();
    ModularSymbols HM(N);
    FQuotient F = f_isotypic(HM, E);
    TwistedClass I = i_chi(HM, fam, R.chi);
    if (!parity_check(HM, fam.G, I, R.chi))
        throw internal_error("parity: I_chi is not in the chi(sigma_K)-eigenspace of tau");
    R.L = algebraic_part(F, I, R.eps);
    R.prime = check_p(E, F, fam.G, R.L.value, p);
    for (int i : {1, 2, 4})
        if (!R.prime.condition(i).pass)
            throw precondition_error("Assumption condition " + std::to_string(i) + " fails (" + R.prime.condition(i).method + ")");
    R.t_ell = t_ell(HM, ell);
    if (mpz_divisible_ui_p(R.t_ell.get_mpz_t(), (unsigned long) p))
        throw precondition_error("admissible condition 2: p divides t_ell = " + R.t_ell.get_str());
    R.prime.ells.push_back(AdmissibleEll{ell, R.delta, a_ell, true, R.t_ell});
    R.rhs = R.L.value.scaled(R.t_ell).mod(p);
    R.ms_rhs = ms_since(t0);

    /* lhs: tree and cocycle */
    t0 = clock_type::now();
    ModularSymbols HMl(N * ell);
    Cocycle C(HM, HMl, ell);
    R.rank_H = C.rank_H();
    Projections P = make_projections(C, F, a_ell, p, R.eps);
    R.lhs = partial_P_chi(C, P, fam.psi, R.chi, R.t_ell);
    R.reductions_at_vstar = true;
    R.ms_lhs = ms_since(t0);
    R.verdict = R.lhs == R.rhs;

    /* cross-checks */
    Cocycle C2(HM, HMl, ell, splitmix64(inst.seed));
    R.stable_under_Y = partial_P_chi(C2, make_projections(C2, F, a_ell, p, R.eps), fam.psi, R.chi, R.t_ell) == R.lhs;

    std::vector<OrientedEmbedding> conj;
    for (std::size_t i = 0; i < fam.psi.size(); i++)
        conj.push_back(conjugate_embedding(fam.psi[i], random_gamma0(inst.seed + 17 * i, N)));
    R.stable_under_conjugation = partial_P_chi(C, P, conj, R.chi, R.t_ell) == R.lhs;

    R.stable_under_factorization = partial_P_chi_factored(C, P, fam.psi, R.chi, R.t_ell, inst.seed ^ 0xfac7) == R.lhs;

    for (int k = 0; k < inst.splitting_pairs; k++) {
        M2 g1 = k % 2 == 0 ? fam.psi[(std::size_t) (k / 2) % fam.psi.size()].gamma
                           : random_gamma_ell(splitmix64(inst.seed + 2 * (std::uint64_t) k), N, ell, 1 + k % 6);
        M2 g2 = random_gamma_ell(splitmix64(inst.seed + 2 * (std::uint64_t) k + 1), N, ell, 1 + (k / 2) % 6);
        long d = ord_integral_fp(C, P, g1, g2);
        long a = mod(alpha_tau(C, P, g1 * g2) - alpha_tau(C, P, g1) - alpha_tau(C, P, g2), p);
        R.splitting_checked++;
        R.splitting_failures += d != a;
        R.splitting_nonzero += d != 0;
    }
    return R;
}

} // namespace darmon
