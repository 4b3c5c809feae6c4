#include "darmon/lvalue.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <future>
#include <ios>

namespace darmon {

bool TwistedClass::is_zero() const
{
    for (auto const & x : comps)
        if (!darmon::is_zero(x))
            return false;
    return true;
}

TwistedClass TwistedClass::apply(ZMat const & T) const
{
    TwistedClass r{n, {}};
    for (auto const & x : comps)
        r.comps.push_back(T * x);
    return r;
}

CycloElement TwistedClass::coordinate(std::size_t j) const
{
    CycloElement x(n);
    for (std::size_t k = 0; k < comps.size(); k++)
        x.c[k] = comps[k][j];
    return x;
}

TwistedClass TwistedClass::scaled(CycloElement const & a) const
{
    DARMON_ASSERT_ALWAYS(a.n == n);
    TwistedClass r = *this;
    std::size_t dim = comps.empty() ? 0 : comps[0].size();
    for (std::size_t j = 0; j < dim; j++) {
        CycloElement x = coordinate(j) * a;
        for (std::size_t k = 0; k < comps.size(); k++)
            r.comps[k][j] = x.c[k];
    }
    return r;
}

int character_sign(NarrowClassGroup const & G, RingClassCharacter const & chi)
{
    long e = mod(chi.value_exp(G.dk_class), chi.n);
    if (e == 0)
        return 1;
    if (2 * e == chi.n)
        return -1;
    throw internal_error("character_sign: chi(D_K) is not +-1");
}

TwistedClass twisted_sum(ModularSymbols const & H, std::vector<M2> const & gammas, RingClassCharacter const & chi)
{
    if (gammas.size() != chi.exps.size())
        throw internal_error("twisted_sum: character and family have different sizes");
    TwistedClass I{chi.n, std::vector<ZVec>((std::size_t) euler_phi(chi.n), ZVec(H.rank()))};
    for (std::size_t s = 0; s < gammas.size(); s++) {
        CycloElement z = CycloElement::zeta_power(chi.n, -chi.value_exp(s));
        ZVec cls = H.gamma_class(gammas[s]);
        for (std::size_t k = 0; k < I.comps.size(); k++)
            if (z.c[k] != 0)
                I.comps[k] = add(I.comps[k], darmon::scaled(cls, z.c[k]));
    }
    return I;
}

TwistedClass i_chi(ModularSymbols const & H, EmbeddingFamily const & fam, RingClassCharacter const & chi)
{
    if (H.level() != fam.M)
        throw internal_error("i_chi: level mismatch");
    std::vector<M2> gs;
    for (auto const & e : fam.psi)
        gs.push_back(e.gamma);
    return twisted_sum(H, gs, chi);
}

bool parity_check(ModularSymbols const & H, NarrowClassGroup const & G, TwistedClass const & I, RingClassCharacter const & chi)
{
    int s = character_sign(G, chi);
    TwistedClass t = I.apply(H.tau());
    for (std::size_t k = 0; k < I.comps.size(); k++)
        if (t.comps[k] != darmon::scaled(I.comps[k], s))
            return false;
    return true;
}

AlgebraicLValue algebraic_part(FQuotient const & F, TwistedClass const & I, int eps)
{
    AlgebraicLValue L;
    L.eps = eps;
    L.S = F.S;
    L.value = CycloElement(I.n);
    ZVec const & a = F.alpha(eps);
    std::size_t piv = 0;
    while (a[piv] == 0)
        piv++;
    for (std::size_t k = 0; k < I.comps.size(); k++) {
        ZVec v = F.apply(I.comps[k]);
        mpq_class t(v[piv], a[piv]);
        t.canonicalize();
        for (std::size_t i = 0; i < a.size(); i++)
            if (mpq_class(v[i]) != t * a[i])
                throw internal_error("algebraic_part: I_chi,E is not on the eps-eigenline");
        if (t.get_den() != 1) {
            for (auto q : prime_divisors(t.get_den()))
                if (!F.in_S(q))
                    throw precondition_error("algebraic_part: alpha^eps does not divide I_chi,E away from S (prime " + std::to_string(q) + ")");
            throw precondition_error("algebraic_part: L has denominator " + t.get_den().get_str() + " supported on S");
        }
        L.value.c[k] = t.get_num();
    }
    return L;
}

namespace {

using mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<150, boost::multiprecision::digit_base_2>>;

struct cplx {
    mp re = 0, im = 0;
};

cplx operator*(cplx const & a, cplx const & b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
cplx operator+(cplx const & a, cplx const & b) { return {a.re + b.re, a.im + b.im}; }
cplx operator-(cplx const & a, cplx const & b) { return {a.re - b.re, a.im - b.im}; }
cplx scale(cplx const & a, mp const & s) { return {a.re * s, a.im * s}; }

cplx expi(mp const & t) { return {boost::multiprecision::cos(t), boost::multiprecision::sin(t)}; }

struct Period {
    cplx P;
    mp err = 0;
    long terms = 0;
};

/* 2 pi i int_z^{gamma z} f(w) dw for z = (-d + i)/c, so gamma z = (a + i)/c */
Period period(EllipticCurve const & E, M2 g, long max_terms)
{
    mp const pi = boost::math::constants::pi<mp>();
    Period out;
    if (g.c < 0)
        g = mpq_class(-1) * g;
    if (g.c == 0)
        return out;     /* z -> z + b: the period vanishes */
    mpz_class a = num_of(g.a), c = num_of(g.c), d = num_of(g.d);
    if (!c.fits_slong_p())
        throw resource_error("numeric_lvalue: lower-left entry too large");
    double cd = c.get_d();
    mp mc(c.get_str());
    mp r = boost::multiprecision::exp(-2 * pi / mc);
    /* |a_n| <= d(n) sqrt n <= 2n, so the tail after K is at most 4 r^(K+1) / (1 - r) */
    double rd = std::exp(-2 * M_PI / cd);
    double want = 130 * std::log(2.0) + std::log(4 / (1 - rd));
    long K = (long) std::ceil(want * cd / (2 * M_PI));
    if (K > max_terms)
        throw resource_error("numeric_lvalue: " + std::to_string(K) + " terms needed, above DARMON_MAX_TERMS = " + std::to_string(max_terms));
    auto an = E.an_list(K);
    mpz_class ar = a % c, dr = d % c;
    cplx w1 = expi(2 * pi * mp(ar.get_str()) / mc), w2 = expi(-2 * pi * mp(dr.get_str()) / mc);
    cplx p1{1, 0}, p2{1, 0};
    mp rn = 1;
    for (long n = 1; n <= K; n++) {
        p1 = p1 * w1;
        p2 = p2 * w2;
        rn *= r;
        if (an[(std::size_t) n] != 0)
            out.P = out.P + scale(p1 - p2, rn * an[(std::size_t) n] / n);
    }
    mp tail = 4 * boost::multiprecision::pow(r, K + 1) / (1 - r);
    mp round = mp(K) * boost::multiprecision::ldexp(mp(1), -140) * 4 / (1 - r);
    out.err = tail + round;
    out.terms = K;
    return out;
}

} // namespace

NumericLValue numeric_lvalue(EllipticCurve const & E, std::vector<M2> const & gammas, RingClassCharacter const & chi)
{
    if (gammas.size() != chi.exps.size())
        throw internal_error("numeric_lvalue: character and family have different sizes");
    mp const pi = boost::math::constants::pi<mp>();
    long max_terms = env_bound("DARMON_MAX_TERMS", 5000000);
    std::vector<std::future<Period>> jobs;
    for (auto const & g : gammas)
        jobs.push_back(std::async(std::launch::async, period, std::cref(E), g, max_terms));
    NumericLValue out;
    cplx S;
    mp bound = 0;
    for (std::size_t s = 0; s < gammas.size(); s++) {
        Period P = jobs[s].get();
        S = S + P.P * expi(-2 * pi * mp(chi.value_exp(s)) / mp(chi.n));
        bound += P.err;
        out.terms += P.terms;
    }
    mp abs = boost::multiprecision::sqrt(S.re * S.re + S.im * S.im);
    out.re = S.re.str(30, std::ios_base::scientific);
    out.im = S.im.str(30, std::ios_base::scientific);
    out.abs2 = mp(abs * abs).str(30, std::ios_base::scientific);
    out.abs = (double) abs;
    out.bound = (double) bound;
    if (abs > 10 * bound)
        out.verdict = "nonzero";
    else if (abs <= bound)
        out.verdict = "zero";
    else
        out.verdict = "inconclusive";
    return out;
}

} // namespace darmon
