#ifndef DARMON_REPORT_HPP_
#define DARMON_REPORT_HPP_

/* JSON reports and instance configuration.
 *
 * Reports are canonical: keys sorted, integers of mathematical content
 * written as decimal strings, Z[zeta_n] elements as {"n", "coords"}, and
 * nothing that depends on timing unless asked for. */

#include "darmon/admissible.hpp"
#include "darmon/darmon.hpp"
#include "darmon/embeddings.hpp"
#include "darmon/lvalue.hpp"
#include "darmon/quad.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace darmon {

using json = nlohmann::json;

inline constexpr char const * report_schema = "darmon-report/1";

struct InstanceConfig {
    EllipticCurve E;
    long delta_K = 0, c = 1;
    std::size_t chi = 0;
    std::optional<long> ell, p;
    std::uint64_t seed = 1;
    long sieve_bound = 100;
    long p_bound = 100;
    int splitting_pairs = 100;
    int tree_radius = 2;
};

/* {"label", "ainvs", "conductor"} */
EllipticCurve curve_from_json(json const & j);
/* one of the curves shipped in the corpus, by label */
std::optional<EllipticCurve> builtin_curve(std::string const & label);

/* validates types and ranges; throws config_error naming the field */
InstanceConfig config_from_json(json const & j);
json config_to_json(InstanceConfig const & cfg);

json to_json(CycloElement const & x);
json to_json(M2 const & g);
json to_json(Form const & f);
json to_json(QuadNumber const & z);
json to_json(RingClassCharacter const & chi);
json to_json(PrimeReport const & r);

json classgroup_report(NarrowClassGroup const & G);
json embeddings_report(EmbeddingFamily const & fam);
json lvalue_report(EllipticCurve const & E, QuadOrder const & O);
json sieve_report(InstanceConfig const & cfg);
json reciprocity_report(ReciprocityReport const & R, bool timings = false);
json tree_report(long M, long ell, int radius, std::uint64_t perturb);

/* wraps a body with the schema tag and the report kind */
json envelope(std::string const & kind, json body);
std::string dump_canonical(json const & j);

} // namespace darmon

#endif /* DARMON_REPORT_HPP_ */
