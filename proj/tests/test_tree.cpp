#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "darmon/embeddings.hpp"
#include "darmon/errors.hpp"
#include "darmon/modsym.hpp"
#include "darmon/nt.hpp"
#include "darmon/tree.hpp"

#include <random>
#include <set>
#include <thread>

using namespace darmon;

namespace {

M2 random_gamma0(std::mt19937_64 & rng, long M, int len = 3)
{
    std::uniform_int_distribution<long> e(-3, 3);
    M2 k = M2::ints(1, 0, 0, 1);
    for (int i = 0; i < len; i++)
        k = k * M2::ints(1, e(rng), 0, 1) * M2::ints(1, 0, M * e(rng), 1);
    return k;
}

/* a word of length <= 6 in Gamma_0(M) and omega Gamma_0(M) omega^-1 */
M2 random_gamma_ell(std::mt19937_64 & rng, long M, long ell)
{
    M2 w = omega_ell(M, ell), wi = w.inverse();
    std::uniform_int_distribution<int> len(1, 6);
    M2 g = M2::ints(1, 0, 0, 1);
    int n = len(rng);
    for (int i = 0; i < n; i++) {
        M2 h = random_gamma0(rng, M, 1);
        g = g * (i % 2 ? w * h * wi : h);
    }
    return g;
}

bool in_gamma_ell(M2 const & g, long M, long ell)
{
    for (auto const * q : {&g.a, &g.b, &g.c, &g.d}) {
        mpz_class den = q->get_den();
        while (den % ell == 0)
            den /= ell;
        if (den != 1)
            return false;
    }
    mpz_class c = g.c.get_num();
    return g.det() == 1 && c % M == 0;
}

/* all vertices within distance r of v*, by breadth first search on the
 * neighbour lists only */
std::vector<TreeVertex> ball(long ell, int r)
{
    std::set<TreeVertex> seen{vstar(ell)};
    std::vector<TreeVertex> layer{vstar(ell)};
    for (int i = 0; i < r; i++) {
        std::vector<TreeVertex> next;
        for (auto const & v : layer)
            for (auto const & w : neighbors(v))
                if (seen.insert(w).second)
                    next.push_back(w);
        layer = next;
    }
    return {seen.begin(), seen.end()};
}

long count_ball(long ell, int r)
{
    long n = 1, s = ell + 1;
    for (int i = 1; i <= r; i++, s *= ell)
        n += s;
    return n;
}

} // namespace

TEST_CASE("normal form")
{
    for (long ell : {2L, 3L, 5L, 7L}) {
        for (auto const & v : ball(ell, 4)) {
            CHECK(vertex_of_basis(v.basis(), ell) == v);
            /* homothety and change of basis do not move the vertex */
            CHECK(vertex_of_basis(mpq_class(ell * ell, 3) * v.basis(), ell) == v);
            CHECK(vertex_of_basis(v.basis() * M2::ints(2, 1, 5, 3), ell) == v);
            CHECK(mpz_class(0) <= v.b);
        }
        CHECK(ball(ell, 4).size() == (std::size_t) count_ball(ell, 4));
    }
}

TEST_CASE("neighbours and parity")
{
    for (long ell : {2L, 3L, 5L}) {
        for (auto const & v : ball(ell, 3)) {
            auto nb = neighbors(v);
            CHECK(nb.size() == (std::size_t) ell + 1);
            CHECK(std::set<TreeVertex>(nb.begin(), nb.end()).size() == (std::size_t) ell + 1);
            for (auto const & w : nb) {
                CHECK(adjacent(v, w));
                CHECK(adjacent(w, v));
                CHECK(w.parity() != v.parity());
                auto back = neighbors(w);
                CHECK(std::find(back.begin(), back.end(), v) != back.end());
            }
            CHECK(!adjacent(v, v));
            if (v.dist() > 0) {
                CHECK(parent(v).dist() == v.dist() - 1);
                CHECK(std::find(nb.begin(), nb.end(), parent(v)) != nb.end());
            }
        }
    }
}

TEST_CASE("geodesics")
{
    long ell = 3;
    auto w = act(M2::ints(3, 0, 0, 1), vstar(ell));
    CHECK(distance(vstar(ell), w) == 1);
    CHECK(even_path(vstar(ell), w).size() == 1);
    CHECK(even_path(vstar(ell), vstar(ell)).empty());
    auto B = ball(ell, 3);
    for (std::size_t i = 0; i < B.size(); i += 7)
        for (std::size_t j = 0; j < B.size(); j += 11) {
            auto p = geodesic_vertices(B[i], B[j]);
            auto q = geodesic_vertices(B[j], B[i]);
            std::reverse(q.begin(), q.end());
            CHECK(p == q);
            CHECK(p.front() == B[i]);
            CHECK(p.back() == B[j]);
            for (std::size_t k = 1; k < p.size(); k++)
                CHECK(adjacent(p[k - 1], p[k]));
            /* reduced: no backtracking */
            for (std::size_t k = 2; k < p.size(); k++)
                CHECK(p[k - 2] != p[k]);
            CHECK((int) p.size() - 1 <= B[i].dist() + B[j].dist());
            auto e = even_path(B[i], B[j]);
            CHECK(e.size() + 1 == p.size());
            for (auto const & x : e)
                CHECK(x.even());
        }
    /* the even path from v* alternates sources and targets */
    auto far = B.back();
    auto e = even_path(vstar(ell), far);
    for (std::size_t i = 0; i + 1 < e.size(); i++) {
        if (i % 2 == 0)
            CHECK(e[i].t == e[i + 1].t);
        else
            CHECK(e[i].s == e[i + 1].s);
    }
}

TEST_CASE("equivariance under Gamma_ell")
{
    std::mt19937_64 rng(7);
    for (auto [M, ell] : std::vector<std::pair<long, long>>{{11, 3}, {11, 2}, {15, 7}, {37, 5}}) {
        auto B = ball(ell, 3);
        for (int trial = 0; trial < 20; trial++) {
            M2 g1 = random_gamma_ell(rng, M, ell), g2 = random_gamma_ell(rng, M, ell);
            CHECK(g1.det() == 1);
            auto const & v = B[(std::size_t) trial * 3 % B.size()];
            auto const & w = B[(std::size_t) trial * 5 % B.size()];
            CHECK(act(g1 * g2, v) == act(g1, act(g2, v)));
            CHECK(act(g1, v).parity() == v.parity());
            CHECK(distance(act(g1, v), act(g1, w)) == distance(v, w));
            for (auto const & n : neighbors(v))
                CHECK(adjacent(act(g1, v), act(g1, n)));
        }
    }
}

TEST_CASE("reduction of Heegner points")
{
    for (auto [d, M, ell] : std::vector<std::tuple<long, long, long>>{{5, 11, 2}, {5, 11, 3}, {5, 11, 7}, {12, 11, 5}, {12, 11, 7}, {13, 3, 5}}) {
        QuadOrder O(d, 1);
        REQUIRE(kronecker(O.disc, ell) == -1);
        EmbeddingFamily fam(O, M);
        for (std::size_t s = 0; s < fam.size(); s++) {
            auto z = fam[s].z();
            CHECK(reduce_point(z, ell) == vstar(ell));
            CHECK(reduce_point(z.conj(), ell) == vstar(ell));
            /* reduction is equivariant */
            M2 h = M2::ints(ell, 1, 0, 1);
            CHECK(reduce_point(z.moved(h), ell) == act(h, vstar(ell)));
        }
    }
    CHECK_THROWS_AS(reduce_point(QuadNumber(1, 0, 5), 3), precondition_error);
    CHECK_THROWS_AS(reduce_point(QuadNumber(0, 1, 5), 11), precondition_error);
}

TEST_CASE("coset representatives")
{
    for (auto [M, ell] : std::vector<std::pair<long, long>>{{1, 2}, {11, 3}, {11, 2}, {14, 5}, {15, 7}, {37, 3}}) {
        auto g = coset_reps(M, ell);
        REQUIRE(g.size() == (std::size_t) ell + 1);
        for (std::size_t i = 0; i < g.size(); i++) {
            CHECK(g[i].det() == 1);
            CHECK(in_gamma0(g[i], M));
            /* parabolic or the identity */
            CHECK(g[i].trace() == 2);
            for (std::size_t j = 0; j < i; j++)
                CHECK(!in_gamma0(g[i] * g[j].inverse(), M * ell));
        }
    }
    CHECK_THROWS_AS(coset_reps(11, 11), precondition_error);
}

TEST_CASE("radial system")
{
    for (auto [M, ell] : std::vector<std::pair<long, long>>{{11, 3}, {11, 2}, {14, 5}, {37, 3}}) {
        for (std::uint64_t seed : {0ULL, 99ULL}) {
            RadialSystem Y(M, ell, seed);
            auto omega = omega_ell(M, ell);
            /* omega swaps the ends of e* */
            CHECK(act(omega, estar(ell)) == estar(ell).reversed());
            for (auto const & x : Y.ghat)
                CHECK(act(x, vhat(ell)) == vhat(ell));
            auto B = ball(ell, 6);
            std::mt19937_64 rng(seed + 3);
            std::vector<TreeEdge> edges;
            for (int i = 0; i < 50; i++) {
                auto const & v = B[rng() % B.size()];
                auto nb = neighbors(v);
                TreeEdge e{v, nb[rng() % nb.size()]};
                edges.push_back(e.even() ? e : e.reversed());
            }
            for (auto const & e : edges) {
                M2 ge = Y.gamma_edge(e);
                CHECK(ge.det() == 1);
                CHECK(in_gamma_ell(ge, M, ell));
                CHECK(act(ge, e) == estar(ell));
            }
            for (auto const & v : ball(ell, 3)) {
                M2 gv = Y.gamma_vertex(v);
                CHECK(act(gv, v) == (v.even() ? vstar(ell) : vhat(ell)));
                CHECK(Y.word(v).size() == (std::size_t) v.dist());
                if (!v.even())
                    continue;
                /* the edges out of v are represented by g_i gamma_v */
                std::set<std::string> lhs, rhs;
                for (auto const & w : neighbors(v))
                    lhs.insert(Y.gamma_edge({v, w}).str());
                for (auto const & x : Y.g)
                    rhs.insert((x * gv).str());
                CHECK(lhs == rhs);
            }
            CHECK_THROWS_AS(Y.gamma_edge(estar(ell).reversed()), precondition_error);
        }
    }
}

TEST_CASE("radial system cache is shared safely between threads")
{
    RadialSystem Y(11, 3);
    auto B = ball(3, 5);
    std::vector<std::thread> ts;
    std::vector<int> bad(4, 0);
    for (int t = 0; t < 4; t++)
        ts.emplace_back([&, t] {
            for (std::size_t i = (std::size_t) t; i < B.size(); i += 2)
                if (act(Y.gamma_vertex(B[i]), B[i]) != (B[i].even() ? vstar(3) : vhat(3)))
                    bad[(std::size_t) t]++;
        });
    for (auto & t : ts)
        t.join();
    for (int b : bad)
        CHECK(b == 0);
    CHECK(Y.cache_size() == B.size() - 1);
}
