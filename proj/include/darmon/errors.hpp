#ifndef DARMON_ERRORS_HPP_
#define DARMON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace darmon {

/* Error categories map onto CLI exit statuses (see tools/darmon_cli.cpp). */
enum class error_kind {
    config = 2,
    precondition = 3,
    resource = 6,
    internal = 5,
};

class darmon_error : public std::runtime_error {
    error_kind k;
  public:
    darmon_error(error_kind k, std::string const & what)
        : std::runtime_error(what), k(k) {}
    error_kind kind() const { return k; }
};

struct config_error : darmon_error {
    explicit config_error(std::string const & w)
        : darmon_error(error_kind::config, w) {}
};

/* A mathematical hypothesis of some operation does not hold. The
 * message starts with the name of the violated condition. */
struct precondition_error : darmon_error {
    explicit precondition_error(std::string const & w)
        : darmon_error(error_kind::precondition, w) {}
};

struct resource_error : darmon_error {
    explicit resource_error(std::string const & w)
        : darmon_error(error_kind::resource, w) {}
};

struct internal_error : darmon_error {
    explicit internal_error(std::string const & w)
        : darmon_error(error_kind::internal, w) {}
};

#define DARMON_ASSERT_ALWAYS(cond)                                         \
    do {                                                                   \
        if (!(cond))                                                       \
            throw ::darmon::internal_error(std::string("assertion failed: ") \
                    + #cond + " at " + __FILE__ + ":"                      \
                    + std::to_string(__LINE__));                           \
    } while (0)

/* resource bounds, overridable through the environment */
long env_bound(char const * name, long dflt);

} // namespace darmon

#endif /* DARMON_ERRORS_HPP_ */
