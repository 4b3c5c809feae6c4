#include "darmon/report.hpp"

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"
#include "darmon/tree.hpp"

#include <cstdio>
#include <set>

namespace darmon {

namespace {

std::string dec(mpz_class const & x) { return x.get_str(); }
std::string dec(long x) { return std::to_string(x); }

std::string rat(mpq_class const & x) { return x.get_str(); }

std::string sci(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

long get_long(json const & j, char const * key)
{
    json const & v = j.at(key);
    if (v.is_number_integer())
        return v.get<long>();
    if (v.is_string()) {
        std::string const & s = v.get_ref<std::string const &>();
        std::size_t pos = 0;
        long r = 0;
        try {
            r = std::stol(s, &pos);
        } catch (std::exception const &) {
            pos = 0;
        }
        if (pos == s.size() && !s.empty())
            return r;
    }
    throw config_error(std::string("config: '") + key + "' must be an integer");
}

json zvec(ZVec const & x)
{
    json c = json::array();
    for (auto const & v : x)
        c.push_back(dec(v));
    return c;
}

json cyclo_coords_mod(CycloElement const & x)
{
    json c = json::array();
    for (auto const & v : x.c)
        c.push_back(dec(v));
    return c;
}

} // namespace

std::optional<EllipticCurve> builtin_curve(std::string const & label)
{
    if (label == "11a1")
        return EllipticCurve({0, -1, 1, -10, -20}, 11, "11a1");
    if (label == "14a1")
        return EllipticCurve({1, 0, 1, 4, -6}, 14, "14a1");
    if (label == "15a1")
        return EllipticCurve({1, 1, 1, -10, -10}, 15, "15a1");
    if (label == "37a1")
        return EllipticCurve({0, 0, 1, -1, 0}, 37, "37a1");
    return std::nullopt;
}

EllipticCurve curve_from_json(json const & j)
{
    if (j.is_string()) {
        auto E = builtin_curve(j.get<std::string>());
        if (!E)
            throw config_error("config: unknown curve label '" + j.get<std::string>() + "'");
        return *E;
    }
    if (!j.is_object())
        throw config_error("config: 'curve' must be a label or an object");
    for (auto const & [k, v] : j.items())
        if (k != "label" && k != "ainvs" && k != "conductor")
            throw config_error("config: unknown key 'curve." + k + "'");
    if (!j.contains("ainvs") || !j.contains("conductor"))
        throw config_error("config: 'curve' needs 'ainvs' and 'conductor'");
    json const & a = j.at("ainvs");
    if (!a.is_array() || a.size() != 5)
        throw config_error("config: 'curve.ainvs' must be a list of 5 integers");
    std::vector<long> ai;
    for (std::size_t i = 0; i < 5; i++) {
        json w = json::object();
        w["v"] = a[i];
        ai.push_back(get_long(w, "v"));
    }
    long N = get_long(j, "conductor");
    if (N < 1)
        throw config_error("config: 'curve.conductor' must be positive");
    std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>() : "";
    return EllipticCurve(ai, N, label);
}

InstanceConfig config_from_json(json const & j)
{
    if (!j.is_object())
        throw config_error("config: the instance must be a JSON object");
    static std::set<std::string> const keys = {"curve", "delta_K", "c", "character", "ell", "p", "seed",
        "sieve_bound", "p_bound", "splitting_pairs", "tree_radius", "comment"};
    for (auto const & [k, v] : j.items())
        if (!keys.count(k))
            throw config_error("config: unknown key '" + k + "'");
    if (!j.contains("curve") || !j.contains("delta_K"))
        throw config_error("config: 'curve' and 'delta_K' are required");
    InstanceConfig cfg;
    cfg.E = curve_from_json(j.at("curve"));
    cfg.delta_K = get_long(j, "delta_K");
    if (j.contains("c"))
        cfg.c = get_long(j, "c");
    if (j.contains("character")) {
        long k = get_long(j, "character");
        if (k < 0)
            throw config_error("config: 'character' must be nonnegative");
        cfg.chi = (std::size_t) k;
    }
    if (j.contains("ell"))
        cfg.ell = get_long(j, "ell");
    if (j.contains("p"))
        cfg.p = get_long(j, "p");
    if (j.contains("seed")) {
        long s = get_long(j, "seed");
        if (s < 0)
            throw config_error("config: 'seed' must be nonnegative");
        cfg.seed = (std::uint64_t) s;
    }
    if (j.contains("sieve_bound"))
        cfg.sieve_bound = get_long(j, "sieve_bound");
    if (j.contains("p_bound"))
        cfg.p_bound = get_long(j, "p_bound");
    if (j.contains("splitting_pairs"))
        cfg.splitting_pairs = (int) get_long(j, "splitting_pairs");
    if (j.contains("tree_radius"))
        cfg.tree_radius = (int) get_long(j, "tree_radius");
    if (cfg.sieve_bound < 2 || cfg.p_bound < 2 || cfg.splitting_pairs < 0 || cfg.tree_radius < 0 || cfg.tree_radius > 6)
        throw config_error("config: bounds out of range");
    /* validates the order */
    QuadOrder O(cfg.delta_K, cfg.c);
    (void) O;
    return cfg;
}

json config_to_json(InstanceConfig const & cfg)
{
    json j;
    json a = json::array({cfg.E.a1, cfg.E.a2, cfg.E.a3, cfg.E.a4, cfg.E.a6});
    j["curve"] = {{"label", cfg.E.label}, {"ainvs", a}, {"conductor", cfg.E.N}};
    j["delta_K"] = cfg.delta_K;
    j["c"] = cfg.c;
    j["character"] = cfg.chi;
    if (cfg.ell)
        j["ell"] = *cfg.ell;
    if (cfg.p)
        j["p"] = *cfg.p;
    j["seed"] = cfg.seed;
    j["sieve_bound"] = cfg.sieve_bound;
    j["p_bound"] = cfg.p_bound;
    j["splitting_pairs"] = cfg.splitting_pairs;
    j["tree_radius"] = cfg.tree_radius;
    return j;
}

json to_json(CycloElement const & x)
{
    return {{"n", dec(x.n)}, {"coords", cyclo_coords_mod(x)}, {"str", x.str()}};
}

json to_json(M2 const & g)
{
    return json::array({json::array({rat(g.a), rat(g.b)}), json::array({rat(g.c), rat(g.d)})});
}

json to_json(Form const & f)
{
    return json::array({dec(f.a), dec(f.b), dec(f.c)});
}

json to_json(QuadNumber const & z)
{
    return {{"x", rat(z.x)}, {"y", rat(z.y)}, {"delta", dec(z.delta)}};
}

json to_json(RingClassCharacter const & chi)
{
    json e = json::array();
    for (long x : chi.exps)
        e.push_back(dec(x));
    return {{"order", dec(chi.n)}, {"exponents", e}, {"even", chi.even}};
}

json to_json(PrimeReport const & r)
{
    json conds = json::array();
    for (auto const & c : r.conditions)
        conds.push_back({{"index", c.index}, {"pass", c.pass}, {"heuristic", c.heuristic}, {"method", c.method}});
    json ells = json::array();
    for (auto const & a : r.ells)
        ells.push_back({{"ell", dec(a.ell)}, {"delta", a.delta}, {"a_ell", dec(a.a_ell)},
                {"t_computed", a.t_computed}, {a.t_computed ? "t_ell" : "t_ell_bound", dec(a.t_ell)}});
    return {{"p", dec(r.p)}, {"r", dec(r.r)}, {"conditions", conds}, {"exact_pass", r.exact_pass()},
            {"all_pass", r.all_pass()}, {"admissible", ells}};
}

json classgroup_report(NarrowClassGroup const & G)
{
    json reps = json::array();
    for (auto const & f : G.reps)
        reps.push_back(to_json(f));
    json chars = json::array();
    for (auto const & chi : characters(G))
        chars.push_back(to_json(chi));
    QuadUnit u = fundamental_unit(G.order);
    return {
        {"delta_K", dec(G.order.delta_K)},
        {"c", dec(G.order.c)},
        {"disc", dec(G.order.disc)},
        {"h_plus", dec((long) G.h_plus)},
        {"h", dec((long) G.h)},
        {"reps", reps},
        {"dk_class", dec((long) G.dk_class)},
        {"fundamental_unit", {{"x", dec(u.x)}, {"y", dec(u.y)}, {"norm", u.norm}}},
        {"characters", chars},
    };
}

json embeddings_report(EmbeddingFamily const & fam)
{
    json psis = json::array();
    for (std::size_t s = 0; s < fam.psi.size(); s++) {
        auto const & e = fam.psi[s];
        OrientedEmbedding es = star_involution(e);
        psis.push_back({
            {"sigma", dec((long) s)},
            {"class", dec((long) embedding_class(fam.G, e))},
            {"W", to_json(e.W)},
            {"gamma", to_json(e.gamma)},
            {"form", to_json(e.form)},
            {"z", to_json(e.z())},
            {"star_class", dec((long) embedding_class(fam.G, es))},
            {"star_is_dk_translate", embedding_class(fam.G, es) == fam.G.mul(fam.G.dk_class, embedding_class(fam.G, e))},
        });
    }
    json roots = json::array();
    for (auto [q, o] : fam.orient.roots)
        roots.push_back(json::array({dec(q), dec(o)}));
    return {
        {"M", dec(fam.M)},
        {"delta_K", dec(fam.order.delta_K)},
        {"c", dec(fam.order.c)},
        {"h_plus", dec((long) fam.G.h_plus)},
        {"orientation", {{"roots", roots}, {"o_M", dec(fam.orient.o_M)}}},
        {"base_class", dec((long) fam.base_class)},
        {"embeddings", psis},
        {"conjugacy_classes", dec((long) enumerate_embeddings(fam.order, fam.M).size())},
    };
}

json lvalue_report(EllipticCurve const & E, QuadOrder const & O)
{
    ModularSymbols H(E.N);
    FQuotient F = f_isotypic(H, E);
    EmbeddingFamily fam(O, E.N);
    std::vector<M2> gs;
    for (auto const & e : fam.psi)
        gs.push_back(e.gamma);
    json list = json::array();
    auto chis = characters(fam.G);
    for (std::size_t k = 0; k < chis.size(); k++) {
        auto const & chi = chis[k];
        int s = character_sign(fam.G, chi);
        TwistedClass I = i_chi(H, fam, chi);
        bool parity = parity_check(H, fam.G, I, chi);
        AlgebraicLValue L = algebraic_part(F, I, s);
        NumericLValue num = numeric_lvalue(E, gs, chi);
        json S = json::array();
        for (long q : L.S)
            S.push_back(dec(q));
        list.push_back({
            {"index", dec((long) k)},
            {"character", to_json(chi)},
            {"sign", s},
            {"parity", parity},
            {"L", to_json(L.value)},
            {"eps", L.eps},
            {"S", S},
            {"numeric", {{"re", num.re}, {"im", num.im}, {"abs2", num.abs2}, {"bound", sci(num.bound)},
                         {"terms", dec(num.terms)}, {"verdict", num.verdict}}},
            {"popa_agrees", (num.verdict == "nonzero") == !L.value.is_zero() && num.verdict != "inconclusive"},
        });
    }
    return {
        {"curve", E.label},
        {"N", dec(E.N)},
        {"delta_K", dec(O.delta_K)},
        {"c", dec(O.c)},
        {"h_plus", dec((long) fam.G.h_plus)},
        {"alpha_plus", zvec(F.alpha_plus)},
        {"alpha_minus", zvec(F.alpha_minus)},
        {"characters", list},
    };
}

json sieve_report(InstanceConfig const & cfg)
{
    EllipticCurve const & E = cfg.E;
    QuadOrder O(cfg.delta_K, cfg.c);
    ModularSymbols H(E.N);
    FQuotient F = f_isotypic(H, E);
    EmbeddingFamily fam(O, E.N);
    auto chis = characters(fam.G);
    if (cfg.chi >= chis.size())
        throw config_error("sieve: character index out of range");
    auto const & chi = chis[cfg.chi];
    int s = character_sign(fam.G, chi);
    AlgebraicLValue L = algebraic_part(F, i_chi(H, fam, chi), s);
    std::vector<long> ps;
    if (cfg.p)
        ps.push_back(*cfg.p);
    else
        for (long p = 2; p <= cfg.p_bound; p++)
            if (is_prime(p))
                ps.push_back(p);
    json reports = json::array();
    for (long p : ps) {
        PrimeReport R = check_p(E, F, fam.G, L.value, p);
        if (R.exact_pass())
            R.ells = sieve_ell(E, H, O, p, cfg.sieve_bound);
        reports.push_back(to_json(R));
    }
    return {
        {"curve", E.label},
        {"N", dec(E.N)},
        {"delta_K", dec(O.delta_K)},
        {"c", dec(O.c)},
        {"character", dec((long) cfg.chi)},
        {"L", to_json(L.value)},
        {"sieve_bound", dec(cfg.sieve_bound)},
        {"primes", reports},
    };
}

json reciprocity_report(ReciprocityReport const & R, bool timings)
{
    auto const & in = R.inst;
    json j = {
        {"curve", in.E.label},
        {"N", dec(in.E.N)},
        {"delta_K", dec(in.delta_K)},
        {"c", dec(in.c)},
        {"character_index", dec((long) in.chi)},
        {"character", to_json(R.chi)},
        {"h_plus", dec((long) R.h_plus)},
        {"ell", dec(in.ell)},
        {"p", dec(in.p)},
        {"delta", R.delta},
        {"eps", R.eps},
        {"t_ell", dec(R.t_ell)},
        {"rank_H", dec((long) R.rank_H)},
        {"L", to_json(R.L.value)},
        {"prime", to_json(R.prime)},
        {"lhs", to_json(R.lhs)},
        {"rhs", to_json(R.rhs)},
        {"verdict", R.verdict},
        {"checks", {
            {"reductions_at_vstar", R.reductions_at_vstar},
            {"stable_under_Y", R.stable_under_Y},
            {"stable_under_conjugation", R.stable_under_conjugation},
            {"stable_under_factorization", R.stable_under_factorization},
            {"splitting_checked", R.splitting_checked},
            {"splitting_failures", R.splitting_failures},
            {"splitting_nonzero", R.splitting_nonzero},
        }},
        {"seed", std::to_string(in.seed)},
    };
    if (timings)
        j["timings_ms"] = {{"lhs", R.ms_lhs}, {"rhs", R.ms_rhs}};
    return j;
}

json tree_report(long M, long ell, int radius, std::uint64_t perturb)
{
    RadialSystem Y(M, ell, perturb);
    std::vector<TreeVertex> layer{vstar(ell)};
    std::set<TreeVertex> seen{vstar(ell)};
    json verts = json::array();
    for (int r = 0; r <= radius; r++) {
        std::vector<TreeVertex> next;
        for (auto const & v : layer) {
            json w = json::array();
            for (auto const & x : Y.word(v))
                w.push_back(x);
            M2 g = Y.gamma_vertex(v);
            verts.push_back({{"vertex", v.str()}, {"dist", v.dist()}, {"parity", v.parity()}, {"word", w},
                             {"gamma", to_json(g)}, {"image", act(g, v).str()}});
            if (r < radius)
                for (auto const & u : neighbors(v))
                    if (seen.insert(u).second)
                        next.push_back(u);
        }
        layer = next;
    }
    json g = json::array(), gh = json::array();
    for (auto const & x : Y.g)
        g.push_back(to_json(x));
    for (auto const & x : Y.ghat)
        gh.push_back(to_json(x));
    return {
        {"M", dec(M)},
        {"ell", dec(ell)},
        {"radius", radius},
        {"perturb", std::to_string(perturb)},
        {"omega", to_json(Y.omega)},
        {"coset_reps", g},
        {"coset_reps_hat", gh},
        {"vstar", vstar(ell).str()},
        {"estar", estar(ell).str()},
        {"vertices", verts},
    };
}

json envelope(std::string const & kind, json body)
{
    return {{"schema", report_schema}, {"kind", kind}, {"report", std::move(body)}};
}

std::string dump_canonical(json const & j)
{
    return j.dump(2) + "\n";
}

} // namespace darmon
