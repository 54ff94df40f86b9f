#pragma once

#include <stdexcept>
#include <string>

namespace smallext {

/* Error taxonomy shared by the library and the command-line driver.
 *
 *   parse_error     -- malformed textual input (elements, groups, sessions)
 *   config_error    -- bad constant declarations or uses (unknown / duplicate
 *                      labels, non-isolating intervals, the refinement guard
 *                      that fires on suspected rational dependence)
 *   domain_error    -- structurally valid input outside an operation's domain
 *                      (mismatched index structures, empty cuts, zero vectors)
 *   contract_error  -- an external data source (a cut provider) answered
 *                      queries inconsistently
 *
 * The driver maps these to exit codes 2 / 2 / 3 / 4 respectively.
 */

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

struct config_error : parse_error {
    explicit config_error(const std::string& what) : parse_error(what) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& what) : error(what) {}
};

struct contract_error : error {
    explicit contract_error(const std::string& what) : error(what) {}
};

} // namespace smallext
