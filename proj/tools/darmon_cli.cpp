/* Command line driver. Every subcommand writes one canonical JSON report;
 * nothing is written unless the whole computation succeeds.
 *
 * Exit status: 0 ok, 2 configuration error, 3 precondition failure,
 * 4 reciprocity verdict false, 5 internal error, 6 resource bound. */

#include "darmon/errors.hpp"
#include "darmon/nt.hpp"
#include "darmon/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace darmon;

namespace {

struct Options {
    std::string config, curve, out;
    std::optional<long> disc, cond, chr, ell, prime, seed, bound, pbound, level, radius, pairs;
    bool timings = false;
};

json read_json_file(std::string const & path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (json::parse_error const & e) {
        throw config_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

/* the instance from --config with the individual flags laid over it */
json raw_config(Options const & o)
{
    json j = o.config.empty() ? json::object() : read_json_file(o.config);
    if (!j.is_object())
        throw config_error("the instance must be a JSON object");
    if (!o.curve.empty()) {
        if (std::filesystem::exists(o.curve)) {
            json c = read_json_file(o.curve);
            j["curve"] = c.is_object() && c.contains("curve") ? c["curve"] : c;
        } else {
            j["curve"] = o.curve;
        }
    }
    auto put = [&](char const * k, std::optional<long> const & v) {
        if (v)
            j[k] = *v;
    };
    put("delta_K", o.disc);
    put("c", o.cond);
    put("character", o.chr);
    put("ell", o.ell);
    put("p", o.prime);
    put("seed", o.seed);
    put("sieve_bound", o.bound);
    put("p_bound", o.pbound);
    put("splitting_pairs", o.pairs);
    put("tree_radius", o.radius);
    return j;
}

InstanceConfig make_config(Options const & o)
{
    return config_from_json(raw_config(o));
}

long int_field(json const & j, char const * key, std::optional<long> dflt = std::nullopt)
{
    if (!j.contains(key)) {
        if (dflt)
            return *dflt;
        throw config_error(std::string("missing '") + key + "'");
    }
    if (!j.at(key).is_number_integer())
        throw config_error(std::string("'") + key + "' must be an integer");
    return j.at(key).get<long>();
}

QuadOrder order_of(json const & j)
{
    return QuadOrder(int_field(j, "delta_K"), int_field(j, "c", 1));
}

/* --level, else the conductor of the curve */
long level_of(Options const & o, json const & j)
{
    if (o.level)
        return *o.level;
    if (!j.contains("curve"))
        throw config_error("give --level or a curve");
    return curve_from_json(j.at("curve")).N;
}

void emit(Options const & o, json const & j)
{
    std::string s = dump_canonical(j);
    if (o.out.empty()) {
        std::cout << s;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        throw config_error("cannot write '" + o.out + "'");
    f << s;
}

ReciprocityInstance instance_of(InstanceConfig const & cfg)
{
    if (!cfg.ell || !cfg.p)
        throw config_error("reciprocity needs 'ell' and 'p'");
    ReciprocityInstance in;
    in.E = cfg.E;
    in.delta_K = cfg.delta_K;
    in.c = cfg.c;
    in.chi = cfg.chi;
    in.ell = *cfg.ell;
    in.p = *cfg.p;
    in.seed = cfg.seed;
    in.splitting_pairs = cfg.splitting_pairs;
    return in;
}

int run(std::string const & cmd, Options const & o)
{
    if (cmd == "classgroup") {
        NarrowClassGroup G(order_of(raw_config(o)));
        emit(o, envelope("classgroup", classgroup_report(G)));
        return 0;
    }
    if (cmd == "embeddings") {
        json j = raw_config(o);
        EmbeddingFamily fam(order_of(j), level_of(o, j));
        emit(o, envelope("embeddings", embeddings_report(fam)));
        return 0;
    }
    if (cmd == "lvalue") {
        InstanceConfig cfg = make_config(o);
        emit(o, envelope("lvalue", lvalue_report(cfg.E, QuadOrder(cfg.delta_K, cfg.c))));
        return 0;
    }
    if (cmd == "sieve") {
        InstanceConfig cfg = make_config(o);
        emit(o, envelope("sieve", sieve_report(cfg)));
        return 0;
    }
    if (cmd == "reciprocity") {
        InstanceConfig cfg = make_config(o);
        ReciprocityReport R = reciprocity_check(instance_of(cfg));
        emit(o, envelope("reciprocity", reciprocity_report(R, o.timings)));
        return R.verdict ? 0 : 4;
    }
    if (cmd == "tree-debug") {
        json j = raw_config(o);
        long M = level_of(o, j), ell = int_field(j, "ell");
        int radius = (int) int_field(j, "tree_radius", 2);
        if (M < 1 || !is_prime(ell) || M % ell == 0)
            throw config_error("tree-debug: ell must be a prime not dividing the level");
        if (radius < 0 || radius > 6)
            throw config_error("tree-debug: radius must lie in [0, 6]");
        emit(o, envelope("tree", tree_report(M, ell, radius, o.seed ? (std::uint64_t) *o.seed : 0)));
        return 0;
    }
    if (cmd == "all") {
        InstanceConfig cfg = make_config(o);
        ReciprocityInstance in = instance_of(cfg);
        QuadOrder O(cfg.delta_K, cfg.c);
        NarrowClassGroup G(O);
        EmbeddingFamily fam(O, cfg.E.N);
        ReciprocityReport R = reciprocity_check(in);
        json body = {
            {"config", config_to_json(cfg)},
            {"classgroup", classgroup_report(G)},
            {"embeddings", embeddings_report(fam)},
            {"lvalue", lvalue_report(cfg.E, O)},
            {"sieve", sieve_report(cfg)},
            {"reciprocity", reciprocity_report(R, o.timings)},
        };
        emit(o, envelope("all", body));
        return R.verdict ? 0 : 4;
    }
    throw config_error("unknown subcommand '" + cmd + "'");
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Darmon points for D = 1: class groups, embeddings, L-values, admissible primes and reciprocity"};
    app.require_subcommand(1);
    Options o;
    for (char const * name : {"classgroup", "embeddings", "lvalue", "sieve", "reciprocity", "tree-debug", "all"}) {
        CLI::App * s = app.add_subcommand(name);
        s->add_option("--config", o.config, "instance JSON file");
        s->add_option("--curve", o.curve, "curve JSON file or label (11a1, 14a1, 15a1, 37a1)");
        s->add_option("--disc", o.disc, "fundamental discriminant delta_K");
        s->add_option("--cond", o.cond, "conductor c of the order");
        s->add_option("--char", o.chr, "character index");
        s->add_option("--ell", o.ell, "admissible prime ell");
        s->add_option("--prime", o.prime, "the prime p");
        s->add_option("--seed", o.seed, "seed for the randomized cross-checks");
        s->add_option("--bound", o.bound, "sieve bound for ell");
        s->add_option("--p-bound", o.pbound, "bound for p when --prime is absent");
        s->add_option("--pairs", o.pairs, "number of splitting-identity pairs");
        s->add_option("--level", o.level, "level M (embeddings, tree-debug)");
        s->add_option("--radius", o.radius, "tree radius (tree-debug)");
        s->add_option("--out", o.out, "output file (default stdout)");
        s->add_flag("--timings", o.timings, "add wall-clock timings to the report");
    }
    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return run(cmd, o);
    } catch (darmon_error const & e) {
        std::cerr << "darmon_cli " << cmd << ": " << e.what() << "\n";
        return (int) e.kind();
    } catch (json::exception const & e) {
        std::cerr << "darmon_cli " << cmd << ": " << e.what() << "\n";
        return 2;
    } catch (std::exception const & e) {
        std::cerr << "darmon_cli " << cmd << ": internal error: " << e.what() << "\n";
        return 5;
    }
}
