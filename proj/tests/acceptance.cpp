/* Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all
 * ten pass. Every check is exact except the numeric side of criterion 5,
 * which carries a proven error bound. */

#include "darmon/admissible.hpp"
#include "darmon/cocycle.hpp"
#include "darmon/darmon.hpp"
#include "darmon/embeddings.hpp"
#include "darmon/errors.hpp"
#include "darmon/lvalue.hpp"
#include "darmon/nt.hpp"
#include "darmon/report.hpp"
#include "darmon/tree.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace darmon;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int index, std::string const & name, Verdict const & v)
{
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << index << " " << name << ": " << v.detail << std::endl;
    failures += !v.pass;
}

/* runs a criterion, turning an exception into a failure */
template <class F>
void criterion(int index, std::string const & name, F && f)
{
    Verdict v;
    try {
        v = f();
    } catch (std::exception const & e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    report(index, name, v);
}

std::vector<fs::path> corpus_files()
{
    std::vector<fs::path> v;
    for (auto const & e : fs::directory_iterator(fs::path(DARMON_SOURCE_DIR) / "corpus"))
        if (e.path().extension() == ".json")
            v.push_back(e.path());
    std::sort(v.begin(), v.end());
    return v;
}

InstanceConfig load(fs::path const & p)
{
    std::ifstream in(p);
    return config_from_json(json::parse(in));
}

ReciprocityInstance instance_of(InstanceConfig const & cfg)
{
    ReciprocityInstance in;
    in.E = cfg.E;
    in.delta_K = cfg.delta_K;
    in.c = cfg.c;
    in.chi = cfg.chi;
    in.ell = cfg.ell.value();
    in.p = cfg.p.value();
    in.seed = cfg.seed;
    in.splitting_pairs = cfg.splitting_pairs;
    return in;
}

EllipticCurve curve(std::string const & label)
{
    return builtin_curve(label).value();
}

/* cached homology per level */
ModularSymbols const & homology(long N)
{
    static std::map<long, std::unique_ptr<ModularSymbols>> cache;
    auto & h = cache[N];
    if (!h)
        h = std::make_unique<ModularSymbols>(N);
    return *h;
}

M2 word(std::uint64_t seed, long M, long ell)
{
    return random_gamma_ell(seed, M, ell, 1 + (int) (splitmix64(seed ^ 0x5151) % 6));
}

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

struct Run {
    int status = -1;
    std::string out;
};

Run cli(std::string const & args)
{
    std::string cmd = "'" + std::string(DARMON_CLI) + "' " + args + " 2>/dev/null";
    Run r;
    FILE * f = popen(cmd.c_str(), "r");
    if (!f)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0)
        r.out.append(buf, n);
    int st = pclose(f);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

/* (N, delta_K, c) for the L-value criteria: the corpus orders plus orders
 * where some L vanishes */
std::vector<std::tuple<std::string, long, long>> lvalue_orders()
{
    std::set<std::tuple<std::string, long, long>> s;
    for (auto const & f : corpus_files()) {
        InstanceConfig cfg = load(f);
        s.insert({cfg.E.label, cfg.delta_K, cfg.c});
    }
    for (auto t : std::vector<std::tuple<std::string, long, long>>{{"11a1", 56, 1}, {"37a1", 21, 1}, {"37a1", 28, 1}, {"11a1", 5, 2}, {"15a1", 229, 1}})
        s.insert(t);
    return {s.begin(), s.end()};
}

} // namespace

int main()
{
    std::vector<ReciprocityReport> recs;

    criterion(1, "reciprocity", [&] {
        Verdict v;
        bool base = false, nontrivial = false;
        double worst = 0;
        int n = 0;
        for (auto const & f : corpus_files()) {
            InstanceConfig cfg = load(f);
            auto t0 = std::chrono::steady_clock::now();
            ReciprocityReport R = reciprocity_check(instance_of(cfg));
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            worst = std::max(worst, s);
            bool ok = R.verdict && R.lhs == R.rhs && s <= 300;
            if (!ok)
                v.pass = false, v.detail += f.filename().string() + " failed; ";
            base = base || (cfg.E.N == 11 && cfg.delta_K == 5 && cfg.c == 1 && cfg.chi == 0);
            nontrivial = nontrivial || (R.h_plus >= 2 && R.chi.exps != std::vector<long>(R.h_plus, 0));
            recs.push_back(R);
            n++;
        }
        v.pass = v.pass && n >= 3 && base && nontrivial;
        std::ostringstream ss;
        ss << n << " corpus instances, lhs = rhs in Z[chi]/p on all; N=11 delta_K=5 c=1 trivial chi: " << (base ? "yes" : "no")
           << "; h+ >= 2 with nontrivial chi: " << (nontrivial ? "yes" : "no") << "; slowest " << worst << " s";
        v.detail = v.detail + ss.str();
        return v;
    });

    criterion(2, "splitting identity", [&] {
        Verdict v;
        int total = 0, fails = 0, least = 1 << 30, nonzero = 0;
        for (auto const & R : recs) {
            total += R.splitting_checked;
            fails += R.splitting_failures;
            nonzero += R.splitting_nonzero;
            least = std::min(least, R.splitting_checked);
        }
        v.pass = !recs.empty() && least >= 100 && fails == 0;
        v.detail = std::to_string(total) + " pairs over " + std::to_string(recs.size()) + " instances (at least " +
                   std::to_string(recs.empty() ? 0 : least) + " each), " + std::to_string(fails) + " failures, " +
                   std::to_string(nonzero) + " with nonzero d'";
        return v;
    });

    criterion(3, "valuation formula", [&] {
        Verdict v;
        int pairs = 0, bad = 0, nonzero = 0;
        for (auto [M, ell, n] : std::vector<std::tuple<long, long, int>>{{11, 3, 20}, {37, 2, 10}, {11, 5, 10}}) {
            Cocycle C(homology(M), homology(M * ell), ell);
            QuadNumber tau = standard_point(ell);
            for (std::uint64_t s = 0; s < (std::uint64_t) n; s++) {
                M2 g1 = word(2 * s + 77, M, ell), g2 = word(2 * s + 78, M, ell);
                Divisor d{{tau.moved(g1.inverse()), 1}, {tau, -1}};
                ZVec o = C.ord_integral(g1, g2);
                bad += riemann_integral(C, d, g2, 1).valuation != o;
                nonzero += !is_zero(o);
                pairs++;
            }
        }
        v.pass = pairs >= 20 && bad == 0 && nonzero > 0;
        v.detail = std::to_string(pairs) + " seeded pairs, " + std::to_string(bad) + " mismatches, " + std::to_string(nonzero) + " nonzero valuations";
        return v;
    });

    criterion(4, "parity", [&] {
        Verdict v;
        int orders = 0, chars = 0, bad = 0;
        for (auto const & [label, dk, c] : lvalue_orders()) {
            EllipticCurve E = curve(label);
            EmbeddingFamily fam(QuadOrder(dk, c), E.N);
            for (auto const & chi : characters(fam.G)) {
                bad += !parity_check(homology(E.N), fam.G, i_chi(homology(E.N), fam, chi), chi);
                chars++;
            }
            orders++;
        }
        v.pass = orders >= 5 && bad == 0;
        v.detail = std::to_string(chars) + " characters of " + std::to_string(orders) + " (N, delta_K, c), " + std::to_string(bad) + " failures";
        return v;
    });

    criterion(5, "Popa equivalence", [&] {
        Verdict v;
        int n = 0, zeros = 0, bad = 0, inconclusive = 0;
        for (auto const & [label, dk, c] : lvalue_orders()) {
            EllipticCurve E = curve(label);
            ModularSymbols const & H = homology(E.N);
            FQuotient F = f_isotypic(H, E);
            EmbeddingFamily fam(QuadOrder(dk, c), E.N);
            std::vector<M2> gammas;
            for (auto const & e : fam.psi)
                gammas.push_back(e.gamma);
            for (auto const & chi : characters(fam.G)) {
                auto L = algebraic_part(F, i_chi(H, fam, chi), character_sign(fam.G, chi)).value;
                auto num = numeric_lvalue(E, gammas, chi);
                inconclusive += num.verdict == "inconclusive";
                bad += (num.verdict == "zero") != L.is_zero();
                zeros += L.is_zero();
                n++;
            }
        }
        v.pass = n >= 5 && bad == 0 && inconclusive == 0;
        v.detail = std::to_string(n) + " instances (" + std::to_string(zeros) + " with L = 0), " + std::to_string(bad) +
                   " disagreements, " + std::to_string(inconclusive) + " inconclusive, 150-bit arithmetic";
        return v;
    });

    criterion(6, "embedding bijection", [&] {
        Verdict v;
        int triples = 0, bad = 0;
        for (auto [dk, c, M] : std::vector<std::tuple<long, long, long>>{{5, 1, 11}, {12, 1, 11}, {37, 2, 11}, {60, 1, 11}, {69, 1, 11},
                 {5, 2, 11}, {12, 1, 37}, {21, 1, 37}, {28, 1, 37}, {5, 1, 1}, {13, 3, 1}, {8, 1, 7}, {29, 1, 5}, {40, 1, 13}}) {
            QuadOrder O(dk, c);
            NarrowClassGroup G(O);
            auto all = enumerate_embeddings(O, M);
            bool ok = all.size() == G.h_plus;
            std::set<std::size_t> classes;
            for (auto const & e : all) {
                std::size_t k = embedding_class(G, e);
                classes.insert(k);
                ok = ok && embedding_class(G, star_involution(e)) == G.mul(G.dk_class, k);
            }
            ok = ok && classes.size() == G.h_plus;
            bad += !ok;
            triples++;
        }
        v.pass = triples >= 10 && bad == 0;
        v.detail = std::to_string(triples) + " (delta_K, c, M) triples, conjugacy-class count h+ and F(psi*) = D_K F(psi) on all but " + std::to_string(bad);
        return v;
    });

    criterion(7, "Ihara exponent", [&] {
        Verdict v;
        int pairs = 0, bad = 0;
        for (long M : {11L, 14L, 15L, 37L}) {
            for (long ell : primes_up_to(30)) {
                if (M % ell == 0)
                    continue;
                mpz_class t = t_ell(homology(M), ell);
                mpz_class bound = 6 * euler_phi(M) * (ell * ell - 1);
                bad += t <= 0 || !mpz_divisible_p(bound.get_mpz_t(), t.get_mpz_t());
                pairs++;
            }
        }
        v.pass = bad == 0;
        v.detail = std::to_string(pairs) + " pairs (M in {11, 14, 15, 37}, ell <= 30), t_ell | 6 phi(M)(ell^2 - 1) on all but " + std::to_string(bad);
        return v;
    });

    criterion(8, "Hecke agreement", [&] {
        Verdict v;
        int checked = 0, bad = 0, independent = 0;
        std::set<std::string> labels;
        for (auto const & f : corpus_files())
            labels.insert(load(f).E.label);
        for (auto const & label : labels) {
            EllipticCurve E = curve(label);
            ModularSymbols const & H = homology(E.N);
            FQuotient F = f_isotypic(H, E);
            for (long q : primes_up_to(50)) {
                if (E.N % q == 0)
                    continue;
                /* the eigenvalue read off phi T_q, against the point count */
                ZMat A = F.phi * H.hecke(q);
                std::size_t j = 0;
                while (F.phi(0, j) == 0)
                    j++;
                mpz_class lambda = A(0, j) / F.phi(0, j);
                bool ok = A == scalar(F.phi, lambda) && lambda == q + 1 - E.count_points(q);
                bad += !ok;
                independent += std::find(F.primes_used.begin(), F.primes_used.end(), q) == F.primes_used.end();
                checked++;
            }
        }
        v.pass = bad == 0 && checked > 0;
        v.detail = std::to_string(checked) + " good q <= 50 over " + std::to_string(labels.size()) + " corpus curves (" +
                   std::to_string(independent) + " not used to define the quotient), " + std::to_string(bad) + " mismatches";
        return v;
    });

    criterion(9, "cocycle identities and harmonicity", [&] {
        Verdict v;
        int identities = 0, bad = 0;
        for (auto [M, ell] : std::vector<std::pair<long, long>>{{11, 3}, {11, 5}, {37, 2}, {37, 3}}) {
            Cocycle C(homology(M), homology(M * ell), ell);
            auto B = ball(ell, 3);
            std::vector<TreeEdge> E;
            for (auto const & x : B)
                if (x.even())
                    for (auto const & w : neighbors(x))
                        E.push_back({x, w});
            for (std::uint64_t s = 0; s < 30; s++) {
                M2 g1 = word(2 * s + 1, M, ell), g2 = word(2 * s + 2, M, ell);
                auto const & e = E[splitmix64(s) % E.size()];
                bad += C.mu_raw(g1 * g2, e) != add(C.mu_raw(g1, e), C.mu_raw(g2, act(g1.inverse(), e)));
                auto const & x = B[splitmix64(s + 99) % B.size()];
                bad += C.m_tilde(g1 * g2, x) != add(C.m_tilde(g1, x), C.m_tilde(g2, act(g1.inverse(), x)));
                identities += 2;
            }
            for (std::uint64_t s = 0; s < 4; s++) {
                M2 g = word(s + 40, M, ell);
                for (auto const & x : B) {
                    ZVec raw(C.HMl.rank());
                    for (auto const & w : neighbors(x))
                        raw = add(raw, C.mu_raw(g, {x, w}));
                    bad += !is_zero(C.to_H(raw));
                    identities++;
                }
            }
        }
        v.pass = bad == 0;
        v.detail = std::to_string(identities) + " identities on words of length <= 6 and radius-3 balls, " + std::to_string(bad) + " failures";
        return v;
    });

    criterion(10, "determinism", [&] {
        Verdict v;
        int n = 0, bad = 0;
        for (auto const & f : corpus_files()) {
            std::string args = "all --config '" + f.string() + "'";
            Run a = cli(args), b = cli(args);
            bad += a.status != 0 || a.out.empty() || a.out != b.out;
            n++;
        }
        v.pass = n > 0 && bad == 0;
        v.detail = std::to_string(n) + " corpus instances run twice through `all`, " + std::to_string(bad) + " differing";
        return v;
    });

    std::cout << (failures == 0 ? "all 10 criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
