#pragma once

/* Command-line driver: text grammars for scalars, elements, groups, providers
 * and polynomials, plus the subcommand dispatcher that prints deterministic
 * JSON.  Exit codes: 0 success, 1 internal failure, 2 malformed input or
 * configuration, 3 violated precondition, 4 broken provider contract. */

#include "smallext/index_structure.hpp"
#include "smallext/ordered_group.hpp"
#include "smallext/scalar.hpp"
#include "smallext/slot_vector.hpp"
#include "smallext/valuation.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace smallext {

/* Named algebraic constants visible to one invocation.  sqrt2, sqrt3 and
 * cbrt2 are always present; a constants file may add more or replace them
 * (file definitions win, duplicates within one file are rejected). */
class Session {
public:
    Session();

    /// Reads `const name = root(poly, lo, hi)` lines; '#' starts a comment.
    void load_constants_text(const std::string& text);
    void load_constants_file(const std::string& path);  // parse_error if unreadable

    /// The constant registered under `name`, or nullptr.
    ConstantPtr find(const std::string& name) const;

private:
    std::map<std::string, ConstantPtr> table_;
};

/// "3/4", "sqrt2", "1/2 + 3*sqrt2", "1 - 2/3*sqrt3".  Consumes the whole string.
Scalar parse_scalar(const Session& s, const std::string& text);

/// "fin N" for N lexicographic coordinates, "omega" for the ascending chain.
StructurePtr parse_structure(const std::string& text);

/* Bracketed element text over a single-block structure:
 *   [1/2, sqrt2]                      plain coordinates
 *   [1, 2, ... ~3]                    ascending, eventually-constant tail
 *   [1/2 | +1 | 0]@S=1                threshold marker at the cut after @S=
 * Marker sections left of / right of the bar hold the coordinates inside /
 * outside the cut. */
SlotVector parse_element(const Session& s, const StructurePtr& structure,
                         const std::string& text);

/// The inverse of `parse_element`, and the grammar every command prints.
std::string format_element(const SlotVector& u);

/* "Q^n", "Z^n", or "group n=N gens=[(a,b),(c,d)d]" with a per-generator `d`
 * suffix (or a trailing `divisible` keyword) marking divisible rows. */
GeneratedGroup parse_group(const Session& s, const std::string& text);

/// "padic:P" or "lexqt:P" for a prime P.
ValuedField parse_field(const std::string& text);

/* Polynomial in x with coefficients built from rationals and t, e.g.
 * "x^2+9", "(t^2+1)/t*x - 2".  Division only by x-free factors. */
Poly parse_poly(const std::string& text);

/// An x-free expression: "0", "-5/3", "(t^2+1)/t".
FieldElem parse_field_elem(const std::string& text);

/* Runs one command line (without the program name).  JSON goes to `out` with
 * a trailing newline, diagnostics to `err`; returns the exit code. */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smallext
