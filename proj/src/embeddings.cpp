#include "darmon/embeddings.hpp"
#include "darmon/errors.hpp"
#include "darmon/nt.hpp"

#include <algorithm>

namespace darmon {

Orientation fixed_orientation(QuadOrder const & O, long M)
{
    if (M < 1)
        throw config_error("level M must be positive");
    if (gcd(O.c, mpz_class(M) * O.delta_K) != 1)
        throw precondition_error("Heegner hypothesis: gcd(c, M delta_K) != 1");
    Orientation o;
    long t0 = O.t0();
    mpz_class modulus = 1, lift = 0;
    for (auto [q, e] : factor(M)) {
        if (kronecker(O.disc, q) != 1)
            throw precondition_error("Heegner hypothesis: the prime " + std::to_string(q)
                    + " dividing M does not split in K");
        mpz_class nq;
        mpz_fdiv_r_ui(nq.get_mpz_t(), O.n0().get_mpz_t(), q);
        auto roots = quadratic_roots_mod(-t0, nq.get_si(), q);
        DARMON_ASSERT_ALWAYS(!roots.empty());
        long r = roots.front();
        o.roots.emplace_back(q, r);
        long qe = 1;
        for (int i = 0; i < e; i++)
            qe *= q;
        mpz_class nqe;
        mpz_fdiv_r_ui(nqe.get_mpz_t(), O.n0().get_mpz_t(), qe);
        long R = hensel_lift(r, -t0, nqe.get_si(), q, e);
        /* CRT: lift = R mod qe */
        mpz_class g, u, v;
        xgcd(g, u, v, modulus, mpz_class(qe));
        mpz_class x = lift + (R - lift) * u * modulus;
        modulus *= qe;
        mpz_fdiv_r(lift.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    }
    o.o_M = lift.get_si();
    return o;
}

Form heegner_form_in_class(NarrowClassGroup const & G, long M, Orientation const & o, std::size_t cls)
{
    Form R = G.reps.at(cls);
    long beta = mod(G.order.t0() - 2 * o.o_M, 2 * M);
    long limit = env_bound("DARMON_MAX_SEARCH", 1000000);
    long tried = 0;
    for (long s = 1;; s++) {
        for (long x = -s; x <= s; x++)
            for (long y = -s; y <= s; y++) {
                if (std::max(std::abs(x), std::abs(y)) != s || gcd(x, y) != 1)
                    continue;
                if (++tried > limit)
                    throw resource_error("heegner_form_in_class: search bound exceeded");
                mpz_class A = R.eval(x, y);
                if (A == 0 || !mpz_divisible_p(A.get_mpz_t(), mpz_class(M).get_mpz_t()))
                    continue;
                mpz_class g, s1, s2;
                xgcd(g, s1, s2, mpz_class(x), mpz_class(y));
                /* x s1 + y s2 = 1: [[x, -s2], [y, s1]] */
                Form f = R.act(M2(x, mpq_class(-s2), y, mpq_class(s1)));
                DARMON_ASSERT_ALWAYS(f.a == A);
                mpz_class diff = f.b - beta;
                if (!mpz_divisible_p(diff.get_mpz_t(), mpz_class(2 * M).get_mpz_t()))
                    continue;
                /* translate B into (-|A|, |A|] */
                mpz_class m = 2 * abs(A), t, b = f.b;
                mpz_fdiv_r(b.get_mpz_t(), f.b.get_mpz_t(), m.get_mpz_t());
                if (b > abs(A))
                    b -= m;
                t = (b - f.b) / (2 * f.a);
                Form h = f.act(M2(1, mpq_class(t), 0, 1));
                DARMON_ASSERT_ALWAYS(h.b == b);
                return h;
            }
    }
}

OrientedEmbedding embedding_from_form(QuadOrder const & O, long M, Form const & f)
{
    DARMON_ASSERT_ALWAYS(f.disc() == O.disc);
    OrientedEmbedding e;
    e.order = O;
    e.M = M;
    e.form = f;
    long t0 = O.t0();
    mpz_class a = (t0 - f.b) / 2, d = (t0 + f.b) / 2;
    e.W = M2(mpq_class(a), mpq_class(-f.c), mpq_class(f.a), mpq_class(d));
    QuadUnit u = fundamental_unit(O);
    e.gamma = e.image(mpq_class(u.x) / 2, mpq_class(u.y) / 2);
    return e;
}

M2 OrientedEmbedding::image(mpq_class const & x, mpq_class const & y) const
{
    /* sqrt(delta_K) = (2 omega_c - t0)/c */
    mpq_class s = y / mpq_class(order.c);
    long t0 = order.t0();
    return M2(x + s * (2 * W.a - t0), s * 2 * W.b, s * 2 * W.c, x + s * (2 * W.d - t0));
}

QuadNumber OrientedEmbedding::z() const
{
    mpq_class C = W.c;
    return QuadNumber((mpq_class(order.t0()) / 2 - W.d) / C, mpq_class(order.c) / (2 * C), order.delta_K);
}

std::size_t embedding_class(NarrowClassGroup const & G, OrientedEmbedding const & e)
{
    return G.class_of(e.form);
}

bool is_oriented_optimal(OrientedEmbedding const & e, Orientation const & o)
{
    M2 const & W = e.W;
    if (!W.is_integral() || W.trace() != e.order.t0() || W.det() != mpq_class(e.order.n0()))
        return false;
    mpz_class C = num_of(W.c);
    if (!mpz_divisible_p(C.get_mpz_t(), mpz_class(e.M).get_mpz_t()))
        return false;
    Form f(C, num_of(W.d - W.a), num_of(-W.b));
    if (!(f == e.form) || !f.is_primitive())
        return false;
    mpz_class a = num_of(W.a), r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), e.M);
    if (r != o.o_M)
        return false;
    if (!e.gamma.is_integral() || e.gamma.det() != 1)
        return false;
    return true;
}

OrientedEmbedding star_involution(OrientedEmbedding const & e)
{
    OrientedEmbedding s = e;
    s.W = M2(e.W.a, -e.W.b, -e.W.c, e.W.d);
    s.gamma = M2(e.gamma.a, -e.gamma.b, -e.gamma.c, e.gamma.d);
    s.form = Form(-e.form.a, e.form.b, -e.form.c);
    return s;
}

EmbeddingFamily::EmbeddingFamily(QuadOrder const & O, long M_)
    : order(O), M(M_), G(O), orient(fixed_orientation(O, M_)), eps(fundamental_unit(O))
{
    for (std::size_t i = 1; i < G.h_plus; i++)
        if (G.reps[i] < G.reps[base_class])
            base_class = i;
    for (std::size_t s = 0; s < G.h_plus; s++) {
        std::size_t cls = G.mul(base_class, s);
        psi.push_back(embedding_from_form(O, M, heegner_form_in_class(G, M, orient, cls)));
        DARMON_ASSERT_ALWAYS(is_oriented_optimal(psi.back(), orient));
        DARMON_ASSERT_ALWAYS(embedding_class(G, psi.back()) == cls);
    }
}

OrientedEmbedding EmbeddingFamily::pic_action(OrientedEmbedding const & e, std::size_t a) const
{
    std::size_t cls = G.class_of(compose(e.form, G.reps.at(a)));
    return embedding_from_form(order, M, heegner_form_in_class(G, M, orient, cls));
}

std::size_t EmbeddingFamily::index_of(OrientedEmbedding const & e) const
{
    return G.mul(G.inv[base_class], embedding_class(G, e));
}

std::vector<OrientedEmbedding> enumerate_embeddings(QuadOrder const & O, long M)
{
    return EmbeddingFamily(O, M).psi;
}

} // namespace darmon
