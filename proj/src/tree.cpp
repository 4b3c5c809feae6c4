#include "darmon/tree.hpp"

#include "darmon/errors.hpp"
#include "darmon/modsym.hpp"
#include "darmon/nt.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace darmon {

namespace {

mpz_class ipow(long ell, int e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long) ell, (unsigned long) e);
    return r;
}

mpq_class qpow(long ell, int e)
{
    return e >= 0 ? mpq_class(ipow(ell, e)) : mpq_class(mpz_class(1), ipow(ell, -e));
}

} // namespace

M2 TreeVertex::basis() const
{
    return M2(mpq_class(ipow(ell, a)), mpq_class(b), 0, mpq_class(ipow(ell, d)));
}

std::string TreeVertex::str() const
{
    std::ostringstream os;
    os << "[" << ipow(ell, a) << "," << b << ";0," << ipow(ell, d) << "]";
    return os.str();
}

bool TreeVertex::operator<(TreeVertex const & o) const
{
    if (ell != o.ell)
        return ell < o.ell;
    if (a != o.a)
        return a < o.a;
    if (d != o.d)
        return d < o.d;
    return b < o.b;
}

std::string TreeEdge::str() const
{
    return s.str() + "->" + t.str();
}

TreeVertex vstar(long ell)
{
    TreeVertex v;
    v.ell = ell;
    return v;
}

TreeVertex vhat(long ell)
{
    TreeVertex v;
    v.ell = ell;
    v.d = 1;
    return v;
}

TreeEdge estar(long ell)
{
    return {vstar(ell), vhat(ell)};
}

TreeVertex vertex_of_span(std::vector<std::pair<mpq_class, mpq_class>> const & gens, long ell)
{
    std::vector<std::pair<mpq_class, mpq_class>> cols;
    int mv = 0;
    bool any = false;
    for (auto const & [x, y] : gens) {
        if (x == 0 && y == 0)
            continue;
        cols.push_back({x, y});
        for (auto const * q : {&x, &y})
            if (*q != 0) {
                int v = valuation(*q, ell);
                mv = any ? std::min(mv, v) : v;
                any = true;
            }
    }
    if (!any)
        throw internal_error("vertex_of_span: zero lattice");
    mpq_class s = qpow(ell, -mv);
    for (auto & [x, y] : cols) {
        x *= s;
        y *= s;
    }
    /* pivot on the smallest bottom valuation */
    std::size_t piv = cols.size();
    int dv = 0;
    for (std::size_t j = 0; j < cols.size(); j++)
        if (cols[j].second != 0) {
            int v = valuation(cols[j].second, ell);
            if (piv == cols.size() || v < dv) {
                piv = j;
                dv = v;
            }
        }
    if (piv == cols.size())
        throw internal_error("vertex_of_span: lattice is not of full rank");
    auto [xp, yp] = cols[piv];
    int av = 0;
    bool top = false;
    for (std::size_t j = 0; j < cols.size(); j++) {
        if (j == piv)
            continue;
        mpq_class x = cols[j].first - cols[j].second / yp * xp;
        if (x != 0) {
            int v = valuation(x, ell);
            av = top ? std::min(av, v) : v;
            top = true;
        }
    }
    if (!top)
        throw internal_error("vertex_of_span: lattice is not of full rank");
    TreeVertex r;
    r.ell = ell;
    r.a = av;
    r.d = dv;
    r.b = reduce_mod(xp * mpq_class(ipow(ell, dv)) / yp, ipow(ell, av));
    /* the span contains a vector outside ell Z_ell^2, so it is primitive */
    DARMON_ASSERT_ALWAYS(r.a == 0 || r.d == 0 || (r.b != 0 && valuation(r.b, ell) == 0));
    return r;
}

TreeVertex vertex_of_basis(M2 const & B, long ell)
{
    if (B.det() == 0)
        throw internal_error("vertex_of_basis: singular basis");
    return vertex_of_span({{B.a, B.c}, {B.b, B.d}}, ell);
}

TreeVertex act(M2 const & g, TreeVertex const & v)
{
    return vertex_of_basis(g * v.basis(), v.ell);
}

TreeEdge act(M2 const & g, TreeEdge const & e)
{
    return {act(g, e.s), act(g, e.t)};
}

std::vector<TreeVertex> neighbors(TreeVertex const & v)
{
    std::vector<TreeVertex> out;
    M2 B = v.basis();
    for (long j = 0; j < v.ell; j++)
        out.push_back(vertex_of_basis(B * M2::ints(v.ell, j, 0, 1), v.ell));
    out.push_back(vertex_of_basis(B * M2::ints(1, 0, 0, v.ell), v.ell));
    return out;
}

bool adjacent(TreeVertex const & v, TreeVertex const & w)
{
    if (v.ell != w.ell || std::abs(v.dist() - w.dist()) != 1)
        return false;
    auto const & far = v.dist() > w.dist() ? v : w;
    auto const & near = v.dist() > w.dist() ? w : v;
    return parent(far) == near;
}

TreeVertex parent(TreeVertex const & v)
{
    int n = v.dist();
    if (n == 0)
        throw internal_error("parent: v* has no parent");
    M2 B = v.basis();
    mpq_class t = mpq_class(ipow(v.ell, n - 1));
    return vertex_of_span({{B.a, B.c}, {B.b, B.d}, {t, 0}, {0, t}}, v.ell);
}

std::vector<TreeVertex> path_from_vstar(TreeVertex const & v)
{
    std::vector<TreeVertex> p{v};
    while (p.back().dist() > 0)
        p.push_back(parent(p.back()));
    std::reverse(p.begin(), p.end());
    return p;
}

std::vector<TreeVertex> geodesic_vertices(TreeVertex const & v, TreeVertex const & w)
{
    auto pv = path_from_vstar(v), pw = path_from_vstar(w);
    std::size_t k = 0;
    while (k < pv.size() && k < pw.size() && pv[k] == pw[k])
        k++;
    std::vector<TreeVertex> out(pv.rbegin(), pv.rend() - (long) (k - 1));
    out.insert(out.end(), pw.begin() + (long) k, pw.end());
    return out;
}

int distance(TreeVertex const & v, TreeVertex const & w)
{
    return (int) geodesic_vertices(v, w).size() - 1;
}

std::vector<TreeEdge> even_path(TreeVertex const & v, TreeVertex const & w)
{
    auto p = geodesic_vertices(v, w);
    std::vector<TreeEdge> out;
    for (std::size_t i = 1; i < p.size(); i++) {
        TreeEdge e{p[i - 1], p[i]};
        out.push_back(e.even() ? e : e.reversed());
    }
    return out;
}

TreeVertex reduce_point(QuadNumber const & tau, long ell)
{
    if (kronecker(tau.delta, ell) != -1 || (ell == 2 && mod(mpz_class(tau.delta % 8).get_si(), 8) != 5))
        throw precondition_error("reduce_point: ell = " + std::to_string(ell) + " is not inert in Q(sqrt " + tau.delta.get_str() + ")");
    if (tau.y == 0)
        throw precondition_error("reduce_point: tau lies in Q_ell");
    mpq_class a = tau.x, b = tau.y;
    if (ell == 2) {
        a = tau.x - tau.y;
        b = 2 * tau.y;
    }
    return vertex_of_basis(M2(b, a, 0, 1), ell);
}

std::vector<M2> coset_reps(long M, long ell)
{
    if (!is_prime(ell) || M % ell == 0)
        throw precondition_error("coset_reps: ell must be a prime not dividing M");
    std::vector<M2> g{M2::ints(1, 0, 0, 1)};
    for (long k = 1; k < ell; k++)
        g.push_back(M2::ints(1, 0, M * k, 1));
    mpz_class m = mod(-invmod(mod(M, ell), ell), ell);
    mpz_class MM = M;
    g.push_back(M2(mpq_class(1 - m * MM), mpq_class(m), mpq_class(-m * MM * MM), mpq_class(1 + m * MM)));
    return g;
}

RadialSystem::RadialSystem(long M, long ell, std::uint64_t perturb)
    : M(M), ell(ell), omega(omega_ell(M, ell)), g(coset_reps(M, ell))
{
    if (perturb != 0) {
        std::uint64_t st = perturb;
        long N = M * ell;
        for (std::size_t i = 1; i < g.size(); i++) {
            M2 k = M2::ints(1, 0, 0, 1);
            for (int r = 0; r < 3; r++) {
                st = splitmix64(st);
                long e = (long) (st % 5) - 2;
                k = k * M2::ints(1, e, 0, 1);
                st = splitmix64(st);
                e = (long) (st % 3) - 1;
                k = k * M2::ints(1, 0, N * e, 1);
            }
            g[i] = k * g[i];
        }
    }
    M2 wi = omega.inverse();
    for (auto const & x : g) {
        ghat.push_back(omega * x * wi);
        nbr_star.push_back(act(x.inverse(), vhat(ell)));
        nbr_hat.push_back(act(ghat.back().inverse(), vstar(ell)));
    }
    for (std::size_t i = 0; i < g.size(); i++)
        for (std::size_t j = 0; j < i; j++)
            DARMON_ASSERT_ALWAYS(nbr_star[i] != nbr_star[j] && nbr_hat[i] != nbr_hat[j]);
}

std::size_t RadialSystem::step_index(TreeVertex const & u, M2 const & gu, TreeVertex const & w) const
{
    TreeVertex x = act(gu, w);
    auto const & nb = u.even() ? nbr_star : nbr_hat;
    for (std::size_t i = 0; i < nb.size(); i++)
        if (nb[i] == x)
            return i;
    throw internal_error("RadialSystem: " + w.str() + " is not adjacent to " + u.str());
}

M2 RadialSystem::gamma_vertex(TreeVertex const & v) const
{
    if (v.ell != ell)
        throw internal_error("RadialSystem: vertex of the wrong tree");
    if (v.dist() == 0)
        return M2::ints(1, 0, 0, 1);
    {
        std::shared_lock lk(memo->mx);
        auto it = memo->gv.find(v);
        if (it != memo->gv.end())
            return it->second;
    }
    auto p = path_from_vstar(v);
    std::size_t k = 0;
    M2 gu = M2::ints(1, 0, 0, 1);
    {
        std::shared_lock lk(memo->mx);
        for (std::size_t i = p.size() - 1; i > 0; i--) {
            auto it = memo->gv.find(p[i]);
            if (it != memo->gv.end()) {
                k = i;
                gu = it->second;
                break;
            }
        }
    }
    std::vector<std::pair<TreeVertex, M2>> fresh;
    for (std::size_t i = k + 1; i < p.size(); i++) {
        std::size_t s = step_index(p[i - 1], gu, p[i]);
        gu = (p[i - 1].even() ? g[s] : ghat[s]) * gu;
        fresh.push_back({p[i], gu});
    }
    DARMON_ASSERT_ALWAYS(act(gu, v) == (v.even() ? vstar(ell) : vhat(ell)));
    std::unique_lock lk(memo->mx);
    for (auto & [w, m] : fresh)
        memo->gv.emplace(w, m);
    return gu;
}

M2 RadialSystem::gamma_edge(TreeEdge const & e) const
{
    if (!e.even())
        throw precondition_error("gamma_edge: the edge " + e.str() + " is odd");
    if (!adjacent(e.s, e.t))
        throw internal_error("gamma_edge: " + e.str() + " is not an edge");
    M2 gs = gamma_vertex(e.s);
    return g[step_index(e.s, gs, e.t)] * gs;
}

std::vector<std::string> RadialSystem::word(TreeVertex const & v) const
{
    auto p = path_from_vstar(v);
    std::vector<std::string> out;
    for (std::size_t i = 1; i < p.size(); i++) {
        std::size_t s = step_index(p[i - 1], gamma_vertex(p[i - 1]), p[i]);
        out.push_back((p[i - 1].even() ? "" : "~") + std::to_string(s));
    }
    return out;
}

std::size_t RadialSystem::cache_size() const
{
    std::shared_lock lk(memo->mx);
    return memo->gv.size();
}

} // namespace darmon
