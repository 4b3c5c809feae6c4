#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "darmon/errors.hpp"
#include "darmon/lvalue.hpp"
#include "darmon/nt.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>

using namespace darmon;

namespace {

EllipticCurve curve(long N)
{
    switch (N) {
    case 11: return EllipticCurve({0, -1, 1, -10, -20}, 11, "11a1");
    case 37: return EllipticCurve({0, 0, 1, -1, 0}, 37, "37a1");
    }
    throw std::logic_error("no test curve");
}

M2 random_gamma0(std::mt19937_64 & rng, long N)
{
    for (;;) {
        long c = N * ((long) (rng() % 21) - 10);
        long d = (long) (rng() % 61) - 30;
        if (gcd(c, d) != 1)
            continue;
        mpz_class g, u, v;
        xgcd(g, u, v, mpz_class(d), mpz_class(c));
        return M2(mpq_class(u), mpq_class(-v), c, d);
    }
}

std::vector<M2> gammas_of(EmbeddingFamily const & fam)
{
    std::vector<M2> out;
    for (auto const & e : fam.psi)
        out.push_back(e.gamma);
    return out;
}

/* cyclotomic polynomials by the product formula over complex roots */
std::vector<long> cyclo_oracle(long n)
{
    std::vector<std::complex<double>> p{1.0};
    for (long k = 1; k <= n; k++) {
        if (gcd(k, n) != 1)
            continue;
        std::complex<double> z = std::polar(1.0, 2 * M_PI * (double) k / (double) n);
        std::vector<std::complex<double>> q(p.size() + 1);
        for (std::size_t i = 0; i < p.size(); i++) {
            q[i + 1] += p[i];
            q[i] -= z * p[i];
        }
        p = q;
    }
    std::vector<long> out;
    for (auto const & x : p)
        out.push_back(std::lround(x.real()));
    return out;
}

std::complex<double> embed(CycloElement const & x)
{
    std::complex<double> s = 0;
    for (std::size_t k = 0; k < x.c.size(); k++)
        s += x.c[k].get_d() * std::polar(1.0, 2 * M_PI * (double) k / (double) x.n);
    return s;
}

CycloElement random_cyclo(std::mt19937_64 & rng, long n)
{
    CycloElement x(n);
    for (auto & c : x.c)
        c = (long) (rng() % 21) - 10;
    return x;
}

/* Independent computation of the algebraic part: w is a row vector
 * killing every T_q - a_q and tau - eps, found as a left kernel; the
 * normalization w(y) for phi(y) = alpha^eps is read off from the
 * integral relations phi y = t alpha^eps. */
mpq_class lvalue_oracle(ModularSymbols const & H, EllipticCurve const & E, FQuotient const & F, ZVec const & x, int eps)
{
    std::size_t r = H.rank();
    std::vector<ZMat> blocks;
    for (long q : {2L, 3L, 5L, 7L, 13L})
        if (H.level() % q != 0)
            blocks.push_back(H.hecke(q) - scalar(ZMat::identity(r), E.ap(q)));
    blocks.push_back(H.tau() - scalar(ZMat::identity(r), eps));
    ZMat A(r, r * blocks.size());
    for (std::size_t b = 0; b < blocks.size(); b++)
        for (std::size_t i = 0; i < r; i++)
            for (std::size_t j = 0; j < r; j++)
                A(i, b * r + j) = blocks[b](i, j);
    ZMat W = left_kernel_basis(A);
    REQUIRE(W.nr == 1);
    ZVec w = W.row(0);
    auto dot = [&](ZVec const & v) {
        mpz_class s = 0;
        for (std::size_t i = 0; i < r; i++)
            s += w[i] * v[i];
        return s;
    };

    ZVec const & alpha = F.alpha(eps);
    ZMat B(2, r + 1);
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < r; j++)
            B(i, j) = F.phi(i, j);
        B(i, r) = -alpha[i];
    }
    ZMat K = kernel_basis(B);
    for (std::size_t j = 0; j < K.nc; j++) {
        ZVec k = K.col(j);
        if (k[r] == 0)
            continue;
        ZVec y(k.begin(), k.end() - 1);
        mpq_class norm(dot(y), k[r]);
        norm.canonicalize();
        REQUIRE(norm != 0);
        mpq_class L = mpq_class(dot(x)) / norm;
        L.canonicalize();
        return L;
    }
    FAIL("no relation phi y = t alpha with t != 0");
    return 0;
}

/* an integral x with phi x = target, combining the relations
 * phi y = t target until t = 1 */
ZVec preimage(FQuotient const & F, ZVec const & target)
{
    std::size_t r = F.phi.nc;
    ZMat B(2, r + 1);
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < r; j++)
            B(i, j) = F.phi(i, j);
        B(i, r) = -target[i];
    }
    ZMat K = kernel_basis(B);
    ZVec acc(r + 1);
    for (std::size_t j = 0; j < K.nc; j++) {
        ZVec k = K.col(j);
        mpz_class g, u, v;
        xgcd(g, u, v, acc[r], k[r]);
        if (g == 0)
            continue;
        acc = add(scaled(acc, u), scaled(k, v));
    }
    REQUIRE(abs(acc[r]) == 1);
    acc = scaled(acc, acc[r]);
    return ZVec(acc.begin(), acc.end() - 1);
}

struct Instance {
    long N, delta, c;
};

/* (N, delta_K, c) with small gamma_sigma; covers h+ = 1, 2, 3, 4 */
std::vector<Instance> const instances = {
    {11, 5, 1}, {11, 5, 2}, {11, 12, 1}, {11, 37, 1}, {11, 37, 2}, {11, 53, 1},
    {11, 56, 1}, {11, 60, 1}, {11, 69, 1}, {37, 12, 1}, {37, 21, 1}, {37, 28, 1},
};

} // namespace

TEST_CASE("cyclotomic polynomials")
{
    for (long n = 1; n <= 40; n++) {
        auto p = cyclotomic_polynomial(n);
        auto q = cyclo_oracle(n);
        REQUIRE(p.size() == q.size());
        for (std::size_t i = 0; i < p.size(); i++)
            CHECK(p[i] == q[i]);
        CHECK((long) p.size() - 1 == euler_phi(n));
    }
    CHECK_THROWS_AS(cyclotomic_polynomial(0), internal_error);
}

TEST_CASE("cyclotomic arithmetic")
{
    std::mt19937_64 rng(7);
    for (long n : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 9L, 12L, 15L}) {
        CHECK(CycloElement::zeta_power(n, n) == CycloElement::integer(n, 1));
        CHECK(CycloElement::zeta_power(n, -1) * CycloElement::zeta_power(n, 1) == CycloElement::integer(n, 1));
        if (n > 1) {
            CycloElement s(n);
            for (long k = 0; k < n; k++)
                s = s + CycloElement::zeta_power(n, k);
            CHECK(s.is_zero());
        }
        for (int t = 0; t < 20; t++) {
            CycloElement x = random_cyclo(rng, n), y = random_cyclo(rng, n), z = random_cyclo(rng, n);
            CHECK(x * y == y * x);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(std::abs(embed(x * y) - embed(x) * embed(y)) < 1e-6);
            for (long a = 1; a < n; a++) {
                if (gcd(a, n) != 1)
                    continue;
                CHECK(x.galois(a) * y.galois(a) == (x * y).galois(a));
                for (long b = 1; b < n; b++)
                    if (gcd(b, n) == 1)
                        CHECK(x.galois(a).galois(b) == x.galois(a * b));
            }
            CHECK((x.scaled(7) + y.scaled(14)).congruent(CycloElement(n), 7));
            CHECK(x.mod(5).congruent(x, 5));
        }
        if (n > 2)
            CHECK_THROWS_AS(CycloElement::integer(n, 1).galois(n), precondition_error);
    }
    CHECK(CycloElement::zeta_power(4, 2).str() == "-1");
    CHECK((CycloElement::zeta_power(3, 2)).str() == "-1 - z");
}

TEST_CASE("I_chi: trivial cases and independence of representatives")
{
    std::mt19937_64 rng(11);
    for (auto const & in : instances) {
        ModularSymbols H(in.N);
        EmbeddingFamily fam(QuadOrder(in.delta, in.c), in.N);
        auto chis = characters(fam.G);
        auto gs = gammas_of(fam);

        /* trivial character: the plain sum */
        TwistedClass I0 = i_chi(H, fam, chis[0]);
        REQUIRE(I0.comps.size() == 1);
        ZVec s(H.rank());
        for (auto const & g : gs)
            s = add(s, H.gamma_class(g));
        CHECK(I0.comps[0] == s);
        if (fam.G.h_plus == 1)
            CHECK(I0.comps[0] == H.gamma_class(gs[0]));

        for (auto const & chi : chis) {
            TwistedClass I = i_chi(H, fam, chi);
            std::vector<M2> conj;
            for (auto const & g : gs) {
                M2 h = random_gamma0(rng, in.N);
                conj.push_back(h * g * h.inverse());
            }
            CHECK(twisted_sum(H, conj, chi) == I);
        }
    }
    ModularSymbols H37(37);
    EmbeddingFamily fam(QuadOrder(5, 1), 11);
    CHECK_THROWS_AS(i_chi(H37, fam, characters(fam.G)[0]), internal_error);
}

TEST_CASE("parity of I_chi for every character")
{
    std::size_t pairs = 0;
    for (auto const & in : instances) {
        ModularSymbols H(in.N);
        EmbeddingFamily fam(QuadOrder(in.delta, in.c), in.N);
        for (auto const & chi : characters(fam.G)) {
            TwistedClass I = i_chi(H, fam, chi);
            int s = character_sign(fam.G, chi);
            CHECK(s == (chi.even ? 1 : -1));
            CHECK(parity_check(H, fam.G, I, chi));
            CHECK(I.apply(H.tau()) == I.scaled(CycloElement::integer(I.n, s)));
        }
        pairs++;
    }
    CHECK(pairs >= 5);

    ModularSymbols H(11);
    EmbeddingFamily fam(QuadOrder(5, 1), 11);
    TwistedClass I = i_chi(H, fam, characters(fam.G)[0]);
    CHECK(H.tau() * I.comps[0] == I.comps[0]);
}

TEST_CASE("algebraic part against the left-kernel oracle")
{
    for (auto const & in : instances) {
        EllipticCurve E = curve(in.N);
        ModularSymbols H(in.N);
        FQuotient F = f_isotypic(H, E);
        EmbeddingFamily fam(QuadOrder(in.delta, in.c), in.N);
        for (auto const & chi : characters(fam.G)) {
            int eps = character_sign(fam.G, chi);
            TwistedClass I = i_chi(H, fam, chi);
            AlgebraicLValue L = algebraic_part(F, I, eps);
            CHECK(L.eps == eps);
            CHECK(L.S == F.S);
            for (std::size_t k = 0; k < I.comps.size(); k++)
                CHECK(lvalue_oracle(H, E, F, I.comps[k], eps) == mpq_class(L.value.c[k]));
        }
    }

    EllipticCurve E = curve(11);
    ModularSymbols H(11);
    FQuotient F = f_isotypic(H, E);
    EmbeddingFamily fam(QuadOrder(5, 1), 11);
    AlgebraicLValue L = algebraic_part(F, i_chi(H, fam, characters(fam.G)[0]), 1);
    CHECK(L.value == CycloElement::integer(1, -1));

    TwistedClass zero{1, {ZVec(H.rank())}};
    CHECK(algebraic_part(F, zero, 1).value.is_zero());
    CHECK(algebraic_part(F, zero, -1).value.is_zero());

    /* synthetic input mapping onto alpha^eps */
    for (int eps : {1, -1}) {
        ZVec x = preimage(F, F.alpha(eps));
        REQUIRE(F.apply(x) == F.alpha(eps));
        CHECK(algebraic_part(F, TwistedClass{1, {x}}, eps).value == CycloElement::integer(1, 1));
        CHECK(algebraic_part(F, TwistedClass{1, {scaled(x, 5)}}, eps).value == CycloElement::integer(1, 5));
    }

    /* off the eigenline */
    ZVec e(H.rank());
    e[0] = 1;
    ZVec im = F.apply(e);
    bool on_line = false;
    for (int eps : {1, -1}) {
        ZVec const & a = F.alpha(eps);
        on_line = on_line || a[0] * im[1] == a[1] * im[0];
    }
    if (!on_line)
        CHECK_THROWS_AS(algebraic_part(F, TwistedClass{1, {e}}, 1), internal_error);
}

TEST_CASE("Galois equivariance")
{
    std::size_t tested = 0;
    for (auto const & in : instances) {
        EllipticCurve E = curve(in.N);
        ModularSymbols H(in.N);
        FQuotient F = f_isotypic(H, E);
        EmbeddingFamily fam(QuadOrder(in.delta, in.c), in.N);
        for (auto const & chi : characters(fam.G)) {
            if (chi.n < 3)
                continue;
            int eps = character_sign(fam.G, chi);
            TwistedClass I = i_chi(H, fam, chi);
            AlgebraicLValue L = algebraic_part(F, I, eps);
            for (long a = 2; a < chi.n; a++) {
                if (gcd(a, chi.n) != 1)
                    continue;
                RingClassCharacter chia = chi;
                for (auto & e : chia.exps)
                    e = mod(e * a, chi.n);
                TwistedClass Ia = twisted_sum(H, gammas_of(fam), chia);
                for (std::size_t j = 0; j < H.rank(); j++)
                    CHECK(Ia.coordinate(j) == I.coordinate(j).galois(a));
                CHECK(algebraic_part(F, Ia, eps).value == L.value.galois(a));
                tested++;
            }
        }
    }
    CHECK(tested >= 2);
}

TEST_CASE("numeric periods agree with the algebraic part")
{
    std::size_t zeros = 0, nonzeros = 0;
    for (auto const & in : instances) {
        EllipticCurve E = curve(in.N);
        ModularSymbols H(in.N);
        FQuotient F = f_isotypic(H, E);
        EmbeddingFamily fam(QuadOrder(in.delta, in.c), in.N);
        double unit[2] = {0, 0};
        for (auto const & chi : characters(fam.G)) {
            int eps = character_sign(fam.G, chi);
            AlgebraicLValue L = algebraic_part(F, i_chi(H, fam, chi), eps);
            NumericLValue num = numeric_lvalue(E, gammas_of(fam), chi);
            CAPTURE(in.delta);
            CAPTURE(in.c);
            CHECK(num.verdict != "inconclusive");
            CHECK((num.verdict == "nonzero") == !L.value.is_zero());
            (L.value.is_zero() ? zeros : nonzeros)++;
            /* |S| = |L| |period of alpha^eps| */
            double l = std::abs(embed(L.value));
            if (l > 0.5) {
                double &u = unit[eps > 0];
                if (u == 0)
                    u = num.abs / l;
                CHECK(std::abs(num.abs / l - u) < 1e-20 * u + 1e-9);
            }
        }
    }
    CHECK(zeros >= 1);
    CHECK(nonzeros >= 5);
}

TEST_CASE("numeric periods: degenerate paths and resource bounds")
{
    EllipticCurve E = curve(11);
    RingClassCharacter triv;
    triv.exps = {0};
    NumericLValue id = numeric_lvalue(E, {M2()}, triv);
    CHECK(id.verdict == "zero");
    CHECK(id.abs == 0);
    NumericLValue tr = numeric_lvalue(E, {M2::ints(1, 5, 0, 1)}, triv);
    CHECK(tr.verdict == "zero");

    /* [g] + [g^-1] = 0 in homology, and the periods cancel */
    M2 g = M2::ints(4, -1, 33, -8);
    RingClassCharacter two;
    two.exps = {0, 0};
    NumericLValue pair = numeric_lvalue(E, {g, g.inverse()}, two);
    CHECK(pair.verdict == "zero");
    NumericLValue single = numeric_lvalue(E, {g}, triv);
    CHECK(single.verdict == "nonzero");

    setenv("DARMON_MAX_TERMS", "10", 1);
    CHECK_THROWS_AS(numeric_lvalue(E, {g}, triv), resource_error);
    unsetenv("DARMON_MAX_TERMS");
    CHECK_THROWS_AS(numeric_lvalue(E, {g}, two), internal_error);
}
