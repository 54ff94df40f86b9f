#include "smallext/cli.hpp"

#include "smallext/classify.hpp"
#include "smallext/completion.hpp"
#include "smallext/errors.hpp"
#include "smallext/rational.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace smallext {

namespace {

using json = nlohmann::json;

/* ------------------------------------------------------------------ */
/*  Character-level scanning                                           */
/* ------------------------------------------------------------------ */

class Cursor {
public:
    explicit Cursor(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(uc(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error(what + " at offset " + std::to_string(pos_) + " in \"" + text_ +
                          "\"");
    }

    bool at_digit() const { return std::isdigit(uc(peek())) != 0; }
    bool at_name() const { return std::isalpha(uc(peek())) != 0 || peek() == '_'; }

    std::string name() {
        if (!at_name()) fail("expected a name");
        std::string out;
        while (at_name() || at_digit()) out += get();
        return out;
    }
    std::string digits() {
        if (!at_digit()) fail("expected digits");
        std::string out;
        while (at_digit()) out += get();
        if (peek() == '.') fail("decimal numbers are not supported");
        return out;
    }

private:
    static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

    std::string text_;
    std::size_t pos_ = 0;
};

long parse_count(Cursor& c, long max) {
    std::string d = c.digits();
    if (d.size() > 9) c.fail("number out of range");
    long n = std::stol(d);
    if (n > max) c.fail("number out of range");
    return n;
}

/// Unsigned rational literal: digits, optionally '/' digits.
Rational parse_rational_token(Cursor& c) {
    Integer num(c.digits());
    if (c.peek() == '/') {
        c.get();
        Integer den(c.digits());
        if (den == 0) c.fail("division by zero");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    return Rational(num);
}

ConstantPtr lookup_constant(const Session& s, const std::string& name) {
    ConstantPtr p = s.find(name);
    if (!p) throw parse_error("unknown constant '" + name + "'");
    return p;
}

/* Signed sum of terms; each term a rational, a constant name, or
 * rational '*' name.  Stops at the first character that opens no term. */
Scalar parse_scalar_body(Cursor& c, const Session& s) {
    Scalar acc;
    bool first = true;
    for (;;) {
        c.skip_ws();
        int sign = 1;
        bool have_sign = false;
        if (c.peek() == '+' || c.peek() == '-') {
            sign = c.get() == '-' ? -1 : 1;
            have_sign = true;
            c.skip_ws();
        }
        if (!first && !have_sign) break;
        if (c.at_digit()) {
            Rational mag = parse_rational_token(c);
            if (sign < 0) mag = -mag;
            c.skip_ws();
            if (c.eat('*')) {
                c.skip_ws();
                acc = acc + Scalar::constant(lookup_constant(s, c.name()), mag);
            } else {
                acc = acc + Scalar(mag);
            }
        } else if (c.at_name()) {
            acc = acc + Scalar::constant(lookup_constant(s, c.name()), Rational(sign));
        } else {
            c.fail("expected a number or constant name");
        }
        first = false;
    }
    return acc;
}

/* ------------------------------------------------------------------ */
/*  Elements                                                           */
/* ------------------------------------------------------------------ */

struct ElemItem {
    bool is_tail;
    Scalar value;
};

/// Everything between '[' and ']', split at top-level '|' bars.
std::vector<std::vector<ElemItem>> read_sections(Cursor& c, const Session& s) {
    std::vector<std::vector<ElemItem>> sections(1);
    for (;;) {
        c.skip_ws();
        if (c.eat(']')) return sections;
        if (c.eat('|')) {
            sections.emplace_back();
            continue;
        }
        if (c.peek() == '\0') c.fail("unterminated element");
        if (c.peek() == '.') {
            c.expect('.');
            c.expect('.');
            c.expect('.');
            c.skip_ws();
            c.expect('~');
            c.skip_ws();
            sections.back().push_back({true, parse_scalar_body(c, s)});
        } else {
            sections.back().push_back({false, parse_scalar_body(c, s)});
        }
        c.skip_ws();
        if (c.eat(',')) {
            c.skip_ws();
            if (c.peek() == ']' || c.peek() == '|') c.fail("dangling comma");
            continue;
        }
        if (c.eat(']')) return sections;
        if (c.eat('|')) {
            sections.emplace_back();
            continue;
        }
        c.fail("expected ',', '|' or ']' after an entry");
    }
}

InitialSegment parse_segment(Cursor& c, const IndexStructure& str) {
    std::vector<BlockCut> cuts;
    for (std::size_t bi = 0; bi < str.blocks.size(); ++bi) {
        if (bi) c.expect(',');
        c.skip_ws();
        if (c.at_name()) {
            std::string w = c.name();
            if (w == "none")
                cuts.push_back(BlockCut{BlockCut::Kind::None, 0});
            else if (w == "all")
                cuts.push_back(BlockCut{BlockCut::Kind::All, 0});
            else if (w == "cof") {
                c.expect(':');
                cuts.push_back(BlockCut{BlockCut::Kind::Cofinite, parse_count(c, 1000000)});
            } else
                c.fail("unknown cut '" + w + "'");
        } else if (c.at_digit()) {
            cuts.push_back(BlockCut{BlockCut::Kind::Finite, parse_count(c, 1000000)});
        } else {
            c.fail("expected a cut");
        }
    }
    return make_segment(str, cuts);
}

/* Writes one section's items at consecutive offsets from `start`.
 * `required` >= 0 pins the coordinate count; `allow_tail` admits one
 * trailing "... ~v" item. */
void fill_section(SlotVectorBuilder& b, const std::vector<ElemItem>& items, long start,
                  long required, bool allow_tail, bool* tail_seen = nullptr) {
    long offset = start;
    bool saw_tail = false;
    for (const ElemItem& item : items) {
        if (saw_tail) throw parse_error("entries after the tail");
        if (item.is_tail) {
            if (!allow_tail)
                throw parse_error("a '... ~' tail needs an ascending structure");
            b.set_tail(0, item.value);
            saw_tail = true;
        } else {
            b.set(Position{0, offset}, item.value);
            ++offset;
        }
    }
    if (required >= 0 && offset - start != required)
        throw parse_error("expected " + std::to_string(required) + " entries, got " +
                          std::to_string(offset - start));
    if (tail_seen) *tail_seen = saw_tail;
}

SlotVector parse_element_impl(const Session& s, const StructurePtr& structure,
                              const std::string& text) {
    const IndexStructure& str = *structure;
    if (str.blocks.size() != 1 || (str.blocks[0].kind != BlockKind::Fin &&
                                   str.blocks[0].kind != BlockKind::Omega))
        throw parse_error("element text covers single-block structures only");
    const bool is_fin = str.blocks[0].kind == BlockKind::Fin;
    const long r = is_fin ? str.blocks[0].size : -1;

    Cursor c(text);
    c.skip_ws();
    c.expect('[');
    auto sections = read_sections(c, s);

    std::optional<InitialSegment> seg;
    c.skip_ws();
    if (c.peek() == '@') {
        c.get();
        c.expect('S');
        c.expect('=');
        c.skip_ws();
        seg = parse_segment(c, str);
    }
    if (!c.done()) c.fail("unexpected trailing text");

    SlotVectorBuilder b(structure);
    if (sections.size() == 1) {
        if (seg) throw parse_error("a cut suffix needs the three-section marker form");
        fill_section(b, sections[0], 0, is_fin ? r : -1, !is_fin);
    } else if (sections.size() == 3) {
        if (!seg) throw parse_error("the marker form needs a cut suffix '@S=...'");
        const auto& mid = sections[1];
        if (mid.size() != 1 || mid[0].is_tail)
            throw parse_error("the marker section holds exactly one value");
        if (scalar_sign(mid[0].value) == 0)
            throw parse_error("the marker direction must be nonzero");

        const BlockCut& cut = seg->cuts[0];
        const bool left_infinite = cut.kind == BlockCut::Kind::All && !is_fin;
        if (cut.kind == BlockCut::Kind::Cofinite)
            throw parse_error("descending cuts have no element text form");
        const long k = cut.kind == BlockCut::Kind::None      ? 0
                       : cut.kind == BlockCut::Kind::Finite ? cut.k
                       : is_fin                             ? r
                                                            : -1;
        if (left_infinite) {
            fill_section(b, sections[0], 0, -1, true);
            if (!sections[2].empty())
                throw parse_error("nothing lies beyond an all-covering cut");
        } else {
            fill_section(b, sections[0], 0, k, false);
            fill_section(b, sections[2], k, is_fin ? r - k : -1, !is_fin);
        }
        b.set_marker(*seg, mid[0].value);
    } else {
        throw parse_error("element text has one or three sections");
    }
    return std::move(b).build();
}

/// "fin N" when the entries are countable off the text, "omega" on a '~'.
StructurePtr infer_structure(const std::string& text) {
    if (text.find('~') != std::string::npos)
        return make_structure({Block{BlockKind::Omega, 0}}, GroupMode::FullHahnSum);
    auto open = text.find('[');
    auto close = text.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw parse_error("cannot infer a shape from \"" + text + "\"");
    std::string body = text.substr(open + 1, close - open - 1);

    std::vector<std::string> parts(1);
    for (char ch : body) {
        if (ch == '|')
            parts.emplace_back();
        else
            parts.back() += ch;
    }
    if (parts.size() != 1 && parts.size() != 3)
        throw parse_error("element text has one or three sections");

    auto count = [](const std::string& sec) {
        long n = 0;
        bool any = false;
        std::string token;
        for (char ch : sec) {
            if (ch == ',') {
                ++n;
                any = true;
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                any = true;
                token += ch;
            }
        }
        if (!any || (n == 0 && token.empty())) return 0L;
        return n + 1;
    };
    long n = parts.size() == 1 ? count(parts[0]) : count(parts[0]) + count(parts[2]);
    return fin_structure(static_cast<int>(n));
}

std::string format_scalar_signed(const Scalar& v) {
    std::string s = scalar_to_string(v);
    if (!s.empty() && s[0] != '-') s = "+" + s;
    return s;
}

/* ------------------------------------------------------------------ */
/*  Groups                                                             */
/* ------------------------------------------------------------------ */

void expect_keyword(Cursor& c, const std::string& kw) {
    c.skip_ws();
    if (c.name() != kw) c.fail("expected '" + kw + "'");
}

GeneratedGroup parse_group_impl(const Session& s, const std::string& text) {
    Cursor c(text);
    c.skip_ws();
    if ((c.peek() == 'Q' || c.peek() == 'Z')) {
        char g = c.get();
        if (c.peek() == '^') {
            c.get();
            long n = parse_count(c, 1000);
            if (!c.done()) c.fail("unexpected trailing text");
            std::vector<std::vector<Scalar>> rows;
            for (long i = 0; i < n; ++i) {
                std::vector<Scalar> row(static_cast<std::size_t>(n), Scalar());
                row[static_cast<std::size_t>(i)] = Scalar(Rational(1));
                rows.push_back(std::move(row));
            }
            return make_group(static_cast<int>(n), std::move(rows),
                              std::vector<bool>(static_cast<std::size_t>(n), g == 'Q'));
        }
        c.fail("expected '^'");
    }
    expect_keyword(c, "group");
    expect_keyword(c, "n");
    c.skip_ws();
    c.expect('=');
    c.skip_ws();
    long n = parse_count(c, 1000);
    expect_keyword(c, "gens");
    c.skip_ws();
    c.expect('=');
    c.skip_ws();
    c.expect('[');

    std::vector<std::vector<Scalar>> gens;
    std::vector<bool> divisible;
    for (;;) {
        c.skip_ws();
        c.expect('(');
        std::vector<Scalar> row;
        for (;;) {
            row.push_back(parse_scalar_body(c, s));
            c.skip_ws();
            if (c.eat(',')) continue;
            c.expect(')');
            break;
        }
        if (static_cast<long>(row.size()) != n)
            throw parse_error("each generator needs " + std::to_string(n) + " entries");
        bool d = false;
        c.skip_ws();
        if (c.peek() == 'd') {
            c.get();
            if (c.at_name() || c.at_digit()) c.fail("unexpected word after a generator");
            d = true;
        }
        gens.push_back(std::move(row));
        divisible.push_back(d);
        c.skip_ws();
        if (c.eat(',')) continue;
        c.expect(']');
        break;
    }
    if (!c.done()) {
        if (c.name() == "divisible")
            divisible.assign(divisible.size(), true);
        else
            c.fail("unexpected trailing text");
        if (!c.done()) c.fail("unexpected trailing text");
    }
    return make_group(static_cast<int>(n), std::move(gens), std::move(divisible));
}

/* ------------------------------------------------------------------ */
/*  Field expressions                                                  */
/* ------------------------------------------------------------------ */

Poly poly_const(FieldElem v) { return Poly(std::vector<FieldElem>{std::move(v)}); }

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : c_(text) {}

    Poly parse() {
        Poly v = expr();
        if (!c_.done()) c_.fail("unexpected trailing text");
        return v;
    }

private:
    Cursor c_;

    Poly expr() {
        Poly v = term();
        for (;;) {
            c_.skip_ws();
            if (c_.eat('+'))
                v = v + term();
            else if (c_.eat('-'))
                v = v - term();
            else
                return v;
        }
    }

    Poly term() {
        Poly v = factor();
        for (;;) {
            c_.skip_ws();
            char p = c_.peek();
            if (p == '*') {
                c_.get();
                v = v * factor();
            } else if (p == '/') {
                c_.get();
                v = divide(v, factor());
            } else if (std::isalnum(static_cast<unsigned char>(p)) || p == '(') {
                v = v * factor();  // juxtaposition: 9t^2, 2x, x(x-1)
            } else {
                return v;
            }
        }
    }

    Poly factor() {
        c_.skip_ws();
        if (c_.eat('-')) return poly_const(FieldElem(-1)) * factor();
        Poly b = base();
        c_.skip_ws();
        if (c_.eat('^')) {
            c_.skip_ws();
            long e = parse_count(c_, 512);
            Poly out = poly_const(FieldElem(1));
            for (long i = 0; i < e; ++i) out = out * b;
            return out;
        }
        return b;
    }

    Poly base() {
        c_.skip_ws();
        if (c_.eat('(')) {
            Poly v = expr();
            c_.skip_ws();
            c_.expect(')');
            return v;
        }
        if (c_.at_digit()) return poly_const(FieldElem(Rational(Integer(c_.digits()))));
        if (c_.at_name()) {
            std::string n = c_.name();
            if (n == "x") return Poly(std::vector<FieldElem>{FieldElem(0), FieldElem(1)});
            if (n == "t")
                return poly_const(FieldElem::t_polynomial({Rational(0), Rational(1)}));
            c_.fail("unknown symbol '" + n + "' in an expression");
        }
        c_.fail("expected a number, x, t, or parentheses");
    }

    Poly divide(const Poly& a, const Poly& b) {
        if (b.is_zero()) c_.fail("division by zero");
        if (b.degree() > 0) c_.fail("division by an expression involving x");
        return a * poly_const(FieldElem(1) / b.coeff(0));
    }
};

/* ------------------------------------------------------------------ */
/*  Providers                                                          */
/* ------------------------------------------------------------------ */

/// One bracketed element, with any '@S=' suffix, copied verbatim.
std::string read_balanced_element(Cursor& c) {
    c.skip_ws();
    if (c.peek() != '[') c.fail("expected an element");
    std::string out;
    out += c.get();
    while (c.peek() != ']') {
        if (c.peek() == '\0') c.fail("unterminated element");
        out += c.get();
    }
    out += c.get();
    if (c.peek() == '@') {
        while (c.peek() != '\0' && c.peek() != ',' && c.peek() != ']' &&
               !std::isspace(static_cast<unsigned char>(c.peek())))
            out += c.get();
    }
    return out;
}

std::string read_token(Cursor& c) {
    c.skip_ws();
    std::string out;
    while (c.peek() != '\0' && !std::isspace(static_cast<unsigned char>(c.peek())))
        out += c.get();
    if (out.empty()) c.fail("expected a value");
    return out;
}

Position parse_position(const std::string& text, const IndexStructure& str) {
    Cursor c(text);
    c.skip_ws();
    long first = parse_count(c, 1000000);
    if (c.eat(':')) {
        long second = parse_count(c, 1000000);
        if (!c.done()) c.fail("unexpected trailing text");
        return Position{static_cast<int>(first), second};
    }
    if (!c.done()) c.fail("unexpected trailing text");
    if (str.blocks.size() == 1 && str.blocks[0].kind == BlockKind::Fin) {
        if (first < 1 || first > str.blocks[0].size)
            throw parse_error("position out of range");
        return Position{0, first - 1};  // written 1-based
    }
    return Position{0, first};
}

struct ProviderSpec {
    ProviderPtr provider;
    StructurePtr structure;
};

ProviderSpec parse_provider(const Session& s, const std::string& text,
                            const std::string& structure_hint) {
    Cursor c(text);
    c.skip_ws();
    std::string kw = c.name();

    auto resolve = [&](const std::string& elem_text) {
        if (!structure_hint.empty()) return parse_structure(structure_hint);
        return infer_structure(elem_text);
    };

    if (kw == "finite") {
        c.skip_ws();
        c.expect('[');
        std::vector<std::string> elems;
        for (;;) {
            c.skip_ws();
            if (c.eat(']')) break;
            elems.push_back(read_balanced_element(c));
            c.skip_ws();
            if (c.eat(',')) continue;
            c.expect(']');
            break;
        }
        if (!c.done()) c.fail("unexpected trailing text");
        if (elems.empty()) throw parse_error("finite providers need at least one element");
        StructurePtr str = resolve(elems[0]);
        std::vector<SlotVector> members;
        for (const auto& e : elems) members.push_back(parse_element_impl(s, str, e));
        return {make_finite_set(std::move(members)), str};
    }
    if (kw == "lowercut" || kw == "uppercut") {
        std::string rest = read_balanced_element(c);
        if (!c.done()) c.fail("unexpected trailing text");
        StructurePtr str = resolve(rest);
        SlotVector v = parse_element_impl(s, str, rest);
        return {kw == "lowercut" ? make_lower_cut(v) : make_upper_cut(v), str};
    }
    if (kw == "prefixchain") {
        if (c.done()) {
            StructurePtr str =
                structure_hint.empty()
                    ? make_structure({Block{BlockKind::Omega, 0}}, GroupMode::FullHahnSum)
                    : parse_structure(structure_hint);
            SlotVectorBuilder b(str);
            b.set_tail(0, Scalar(Rational(1)));
            return {make_prefix_chain(std::move(b).build()), str};
        }
        std::string rest = read_balanced_element(c);
        if (!c.done()) c.fail("unexpected trailing text");
        StructurePtr str = resolve(rest);
        return {make_prefix_chain(parse_element_impl(s, str, rest)), str};
    }
    if (kw == "ray") {
        std::string prefix_text, pos_text, sup_text;
        bool attained = false;
        while (!c.done()) {
            std::string key = c.name();
            if (key == "attained") {
                attained = true;
                continue;
            }
            c.skip_ws();
            c.expect('=');
            c.skip_ws();
            if (key == "prefix")
                prefix_text = read_balanced_element(c);
            else if (key == "pos")
                pos_text = read_token(c);
            else if (key == "sup")
                sup_text = read_token(c);
            else
                c.fail("unknown ray attribute '" + key + "'");
        }
        if (prefix_text.empty() || pos_text.empty() || sup_text.empty())
            throw parse_error("a ray needs prefix=, pos= and sup=");
        StructurePtr str = resolve(prefix_text);
        SlotVector prefix = parse_element_impl(s, str, prefix_text);
        Position pos = parse_position(pos_text, *str);
        RayAnswer up = sup_text == "unbounded"
                           ? ray_unbounded()
                           : ray_bounded(parse_scalar(s, sup_text), attained);
        return {make_coordinate_ray(std::move(prefix), pos, up), str};
    }
    c.fail("unknown provider '" + kw + "'");
}

/* ------------------------------------------------------------------ */
/*  Subcommand bodies                                                  */
/* ------------------------------------------------------------------ */

struct Opts {
    std::string constants_path;
    int indent = -1;
    std::string group, structure, elem, first, second, provider, ext;
    std::string field, center, delta, eps, poly;
    int trials = 50;
    unsigned seed = 20240817u;
};

StructurePtr resolve_structure(const Session& s, const Opts& o,
                               const std::string& elem_hint) {
    if (!o.structure.empty()) return parse_structure(o.structure);
    if (!o.group.empty())
        return fin_structure(normalize(parse_group(s, o.group)).rank);
    return infer_structure(elem_hint);
}

json components_json(const std::vector<ComponentInfo>& components) {
    json out = json::array();
    for (const auto& comp : components) out.push_back(component_label(comp));
    return out;
}

json cmd_normalize(const Session& s, const Opts& o) {
    NormalizedGroup g = normalize(parse_group(s, o.group));
    json basis = json::array();
    for (const auto& row : g.basis) {
        json r = json::array();
        for (const auto& q : row) r.push_back(rational_to_string(q));
        basis.push_back(std::move(r));
    }
    json j;
    j["rank"] = g.rank;
    j["basis"] = std::move(basis);
    j["components"] = components_json(g.components);
    j["embedding"] = g.leading;
    return j;
}

json cmd_skeleton(const Session& s, const Opts& o) {
    Skeleton sk = skeleton(normalize(parse_group(s, o.group)));
    json j;
    j["index_count"] = sk.index_count;
    j["components"] = components_json(sk.components);
    return j;
}

json cmd_classify(const Session& s, const Opts& o) {
    StructurePtr str = resolve_structure(s, o, o.elem);
    SmeElement e = classify(parse_element_impl(s, str, o.elem));
    json j;
    j["stratum"] = stratum_name(e.stratum);
    j["canonical"] = format_element(e.canonical);
    j["segment"] = segment_to_string(*str, e.segment);
    return j;
}

json cmd_equiv(const Session& s, const Opts& o) {
    StructurePtr str = resolve_structure(s, o, o.first);
    json j;
    j["equivalent"] = sme_equivalent(parse_element_impl(s, str, o.first),
                                     parse_element_impl(s, str, o.second));
    return j;
}

json cmd_between(const Session& s, const Opts& o) {
    StructurePtr str = resolve_structure(s, o, o.first);
    auto q = rational_between(parse_element_impl(s, str, o.first),
                              parse_element_impl(s, str, o.second));
    json j;
    j["between"] = q ? json(format_element(*q)) : json(nullptr);
    return j;
}

json cmd_extreme(const Session& s, const Opts& o, bool is_sup) {
    ProviderSpec spec = parse_provider(s, o.provider, o.structure);
    SupremumResult r = is_sup ? supremum(*spec.provider) : infimum(*spec.provider);
    json j;
    j["case"] = r.fired == CompletionCase::GlobalMax ? "max" : completion_case_name(r.fired);
    j[is_sup ? "sup" : "inf"] = format_element(r.value.canonical);
    return j;
}

json cmd_small(const Session& s, const Opts& o) {
    SmallnessReport rep =
        is_small_extension(parse_group(s, o.group), parse_group(s, o.ext));
    json j;
    j["small"] = rep.small;
    j["kind"] = rep.kind ? json(small_kind_name(*rep.kind)) : json(nullptr);
    j["rr_sub"] = rep.rr_sub;
    j["rr_ext"] = rep.rr_ext;
    j["prin_sub"] = rep.prin_sub;
    j["prin_ext"] = rep.prin_ext;
    j["reason"] = rep.reason;
    return j;
}

std::optional<SlotVector> parse_delta(const Session& s, const ValuedField& K,
                                      const std::string& text) {
    Cursor probe(text);
    probe.skip_ws();
    if (probe.at_name()) {
        std::string w = probe.name();
        if ((w == "inf" || w == "infinity") && probe.done()) return std::nullopt;
    }
    if (text.find('[') != std::string::npos)
        return parse_element_impl(s, K.value_structure(), text);
    const IndexStructure& str = *K.value_structure();
    if (str.blocks.size() != 1 || str.blocks[0].size != 1)
        throw parse_error("a rank-" + std::to_string(str.blocks[0].size) +
                          " radius needs the bracket form");
    SlotVectorBuilder b(K.value_structure());
    b.set(Position{0, 0}, parse_scalar(s, text));
    return std::move(b).build();
}

SlotVector parse_finite_delta(const Session& s, const ValuedField& K,
                              const std::string& text) {
    auto d = parse_delta(s, K, text);
    if (!d) throw parse_error("this command needs a finite radius");
    return *std::move(d);
}

json cmd_val_eval(const Session& s, const Opts& o) {
    ValuedField K = parse_field(o.field);
    DepthZeroValuation w =
        make_depth_zero(K, parse_field_elem(o.center), parse_delta(s, K, o.delta));
    ExtendedValue ev = dz_eval(K, w, parse_poly(o.poly));
    json j;
    if (ev.infinite) {
        j["infinity"] = true;
    } else {
        j["infinity"] = false;
        j["m"] = ev.m;
        j["g"] = format_element(ev.g);
    }
    return j;
}

json cmd_val_compare(const Session& s, const Opts& o, bool strict_equal) {
    ValuedField K = parse_field(o.field);
    FieldElem a = parse_field_elem(o.first);
    FieldElem b = parse_field_elem(o.second);
    SlotVector da = parse_finite_delta(s, K, o.delta);
    SlotVector db = o.eps.empty() ? da : parse_finite_delta(s, K, o.eps);
    json j;
    if (strict_equal)
        j["equal"] = dz_equal(K, a, da, b, db);
    else
        j["equivalent"] = dz_equivalent(K, a, da, b, db);
    return j;
}

json cmd_ball_check(const Session& s, const Opts& o) {
    ValuedField K = parse_field(o.field);
    BallCheckReport rep =
        ball_inf_check(K, parse_field_elem(o.center), parse_finite_delta(s, K, o.delta),
                       parse_poly(o.poly), o.trials, o.seed);
    json j;
    j["part"] = rep.part;
    if (rep.part == 1) {
        j["mu"] = rep.mu ? json(rational_to_string(*rep.mu)) : json(nullptr);
        j["witness"] = rep.witness ? json(field_elem_to_string(*rep.witness)) : json(nullptr);
        j["witness_value"] =
            rep.witness_value ? json(rational_to_string(*rep.witness_value)) : json(nullptr);
        j["sampled"] = rep.sampled;
        j["all_at_least"] = rep.all_at_least;
    } else {
        j["skipped"] = rep.skipped;
        j["s0"] = rep.s0;
        j["epsilon"] = rep.epsilon ? json(rational_to_string(*rep.epsilon)) : json(nullptr);
        j["all_exact"] = rep.all_exact;
        json probes = json::array();
        for (const auto& pr : rep.probes) {
            json q;
            q["rho"] = pr.rho;
            q["expected"] = rational_to_string(pr.expected);
            q["got"] = pr.got ? json(rational_to_string(*pr.got)) : json(nullptr);
            q["ok"] = pr.ok;
            probes.push_back(std::move(q));
        }
        j["probes"] = std::move(probes);
    }
    return j;
}

}  // namespace

/* ------------------------------------------------------------------ */
/*  Session                                                            */
/* ------------------------------------------------------------------ */

Session::Session() {
    table_["sqrt2"] = make_constant("sqrt2", {Integer(-2), Integer(0), Integer(1)},
                                    Rational(1), Rational(2));
    table_["sqrt3"] = make_constant("sqrt3", {Integer(-3), Integer(0), Integer(1)},
                                    Rational(1), Rational(2));
    table_["cbrt2"] = make_constant("cbrt2",
                                    {Integer(-2), Integer(0), Integer(0), Integer(1)},
                                    Rational(1), Rational(2));
}

void Session::load_constants_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::set<std::string> declared;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        Cursor c(line);
        if (c.done()) continue;
        try {
            expect_keyword(c, "const");
            c.skip_ws();
            std::string name = c.name();
            c.skip_ws();
            c.expect('=');
            expect_keyword(c, "root");
            c.skip_ws();
            c.expect('(');

            // split the argument list at top-level commas
            std::vector<std::string> parts(1);
            int depth = 0;
            for (;;) {
                char ch = c.peek();
                if (ch == '\0') c.fail("unterminated root(...)");
                if (ch == '(') ++depth;
                if (ch == ')') {
                    if (depth == 0) {
                        c.get();
                        break;
                    }
                    --depth;
                }
                if (ch == ',' && depth == 0) {
                    c.get();
                    parts.emplace_back();
                    continue;
                }
                parts.back() += c.get();
            }
            if (!c.done()) c.fail("unexpected trailing text");
            if (parts.size() != 3) c.fail("root takes a polynomial and two endpoints");

            Poly p = ExprParser(parts[0]).parse();
            std::vector<Integer> coeffs;
            for (long d = 0; d <= p.degree(); ++d) {
                FieldElem fe = p.coeff(d);
                if (!fe.is_rational() || fe.as_rational().get_den() != 1)
                    throw parse_error("root polynomials take integer coefficients");
                coeffs.push_back(fe.as_rational().get_num());
            }
            auto endpoint = [](const std::string& part) {
                Cursor pc(part);
                pc.skip_ws();
                bool neg = pc.eat('-');
                Rational q = parse_rational_token(pc);
                if (!pc.done()) pc.fail("unexpected trailing text");
                return neg ? Rational(-q) : q;
            };
            if (declared.count(name))
                throw config_error("constant '" + name + "' declared twice");
            declared.insert(name);
            table_[name] =
                make_constant(name, std::move(coeffs), endpoint(parts[1]), endpoint(parts[2]));
        } catch (const parse_error& e) {
            throw parse_error("constants line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void Session::load_constants_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot read constants file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_constants_text(buf.str());
}

ConstantPtr Session::find(const std::string& name) const {
    auto it = table_.find(name);
    return it == table_.end() ? nullptr : it->second;
}

/* ------------------------------------------------------------------ */
/*  Public parsers and the formatter                                   */
/* ------------------------------------------------------------------ */

Scalar parse_scalar(const Session& s, const std::string& text) {
    Cursor c(text);
    Scalar v = parse_scalar_body(c, s);
    if (!c.done()) c.fail("unexpected trailing text");
    return v;
}

StructurePtr parse_structure(const std::string& text) {
    Cursor c(text);
    c.skip_ws();
    std::string kw = c.name();
    if (kw == "omega") {
        if (!c.done()) c.fail("unexpected trailing text");
        return make_structure({Block{BlockKind::Omega, 0}}, GroupMode::FullHahnSum);
    }
    if (kw == "fin") {
        c.skip_ws();
        long n = parse_count(c, 1000);
        if (!c.done()) c.fail("unexpected trailing text");
        return fin_structure(static_cast<int>(n));
    }
    c.fail("unknown structure '" + kw + "'");
}

SlotVector parse_element(const Session& s, const StructurePtr& structure,
                         const std::string& text) {
    return parse_element_impl(s, structure, text);
}

std::string format_element(const SlotVector& u) {
    const IndexStructure& str = *u.structure();
    if (str.blocks.size() != 1 || (str.blocks[0].kind != BlockKind::Fin &&
                                   str.blocks[0].kind != BlockKind::Omega))
        return slot_vector_to_string(u);  // no bracket grammar for these shapes
    const bool is_fin = str.blocks[0].kind == BlockKind::Fin;
    const long r = is_fin ? str.blocks[0].size : -1;

    long last = -1;
    for (const auto& [pos, _] : u.coords()) last = std::max(last, pos.offset);

    auto entry = [&](long o) { return scalar_to_string(u.value_at(Position{0, o})); };
    Scalar tail_value = u.tail() ? u.tail()->value : Scalar();

    std::ostringstream out;
    out << '[';
    auto write_range = [&](long from, long to, bool* any) {
        for (long o = from; o < to; ++o) {
            if (*any) out << ", ";
            out << entry(o);
            *any = true;
        }
    };
    auto write_tail = [&](bool any) {
        if (any) out << ", ";
        out << "... ~" << scalar_to_string(tail_value);
    };

    if (!u.marker()) {
        bool any = false;
        if (is_fin) {
            write_range(0, r, &any);
        } else {
            write_range(0, last + 1, &any);
            write_tail(any);
        }
        out << ']';
        return out.str();
    }

    const InitialSegment& seg = u.marker()->seg;
    const BlockCut& cut = seg.cuts[0];
    const bool left_infinite = cut.kind == BlockCut::Kind::All && !is_fin;
    const long k = cut.kind == BlockCut::Kind::None      ? 0
                   : cut.kind == BlockCut::Kind::Finite ? cut.k
                   : is_fin                             ? r
                                                        : -1;
    bool any = false;
    if (left_infinite) {
        write_range(0, last + 1, &any);
        write_tail(any);
    } else {
        write_range(0, k, &any);
    }
    out << " | " << format_scalar_signed(u.marker()->value) << " | ";
    if (!left_infinite) {
        any = false;
        if (is_fin) {
            write_range(k, r, &any);
        } else {
            write_range(k, std::max(last + 1, k), &any);
            write_tail(any);
        }
    }
    out << "]@S=" << segment_to_string(str, seg);
    return out.str();
}

GeneratedGroup parse_group(const Session& s, const std::string& text) {
    return parse_group_impl(s, text);
}

ValuedField parse_field(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw parse_error("field syntax: padic:P or lexqt:P");
    Cursor c(text.substr(colon + 1));
    c.skip_ws();
    long p = parse_count(c, 1000000000);
    if (!c.done()) c.fail("unexpected trailing text");
    Cursor k(text.substr(0, colon));
    k.skip_ws();
    std::string kind = k.name();
    if (!k.done()) k.fail("unexpected trailing text");
    if (kind == "padic") return ValuedField::padic(p);
    if (kind == "lexqt") return ValuedField::lex_composite(p);
    throw parse_error("unknown field '" + kind + "'");
}

Poly parse_poly(const std::string& text) { return ExprParser(text).parse(); }

FieldElem parse_field_elem(const std::string& text) {
    Poly p = ExprParser(text).parse();
    if (p.degree() > 0) throw parse_error("the value must not involve x");
    return p.is_zero() ? FieldElem() : p.coeff(0);
}

/* ------------------------------------------------------------------ */
/*  Driver                                                             */
/* ------------------------------------------------------------------ */

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    CLI::App app{"small extensions of ordered abelian groups: strata, completions, and "
                 "depth-zero valuations"};
    app.name("smallext");
    app.require_subcommand(1);
    app.add_option("--constants", o.constants_path,
                   "file of `const name = root(poly, lo, hi)` lines");
    app.add_option("--json-indent", o.indent, "pretty-print JSON with this indent");

    auto add_structure = [&](CLI::App* sc) {
        sc->add_option("--group", o.group, "base group (Q^n, Z^n, or group n=...)");
        sc->add_option("--structure", o.structure, "index shape: 'fin N' or 'omega'");
    };

    CLI::App* sc_normalize = app.add_subcommand("normalize", "echelon presentation of a group");
    sc_normalize->add_option("--group,group", o.group)->required();

    CLI::App* sc_skeleton = app.add_subcommand("skeleton", "component chain of a group");
    sc_skeleton->add_option("--group,group", o.group)->required();

    CLI::App* sc_classify = app.add_subcommand("classify", "stratum and canonical form");
    add_structure(sc_classify);
    sc_classify->add_option("--elem,elem", o.elem)->required();

    CLI::App* sc_equiv = app.add_subcommand("equiv", "hull equivalence of two elements");
    add_structure(sc_equiv);
    sc_equiv->add_option("--u,u", o.first)->required();
    sc_equiv->add_option("--v,v", o.second)->required();

    CLI::App* sc_between = app.add_subcommand("between", "base-group element between two");
    add_structure(sc_between);
    sc_between->add_option("--u,u", o.first)->required();
    sc_between->add_option("--v,v", o.second)->required();

    CLI::App* sc_sup = app.add_subcommand("sup", "supremum of a provider's member set");
    add_structure(sc_sup);
    sc_sup->add_option("--provider,provider", o.provider)->required();

    CLI::App* sc_inf = app.add_subcommand("inf", "infimum of a provider's member set");
    add_structure(sc_inf);
    sc_inf->add_option("--provider,provider", o.provider)->required();

    CLI::App* sc_small = app.add_subcommand("small", "is the extension small?");
    sc_small->add_option("--group,group", o.group)->required();
    sc_small->add_option("--ext,ext", o.ext)->required();

    CLI::App* sc_val_eval = app.add_subcommand("val-eval", "depth-zero value of a polynomial");
    sc_val_eval->add_option("--field", o.field)->required();
    sc_val_eval->add_option("--center", o.center)->required();
    sc_val_eval->add_option("--delta", o.delta)->required();
    sc_val_eval->add_option("--poly", o.poly)->required();

    CLI::App* sc_val_equal = app.add_subcommand("val-equal", "same depth-zero valuation?");
    sc_val_equal->add_option("--field", o.field)->required();
    sc_val_equal->add_option("--a", o.first)->required();
    sc_val_equal->add_option("--b", o.second)->required();
    sc_val_equal->add_option("--delta", o.delta)->required();
    sc_val_equal->add_option("--eps", o.eps);

    CLI::App* sc_val_equiv =
        app.add_subcommand("val-equiv", "equivalent depth-zero valuations?");
    sc_val_equiv->add_option("--field", o.field)->required();
    sc_val_equiv->add_option("--a", o.first)->required();
    sc_val_equiv->add_option("--b", o.second)->required();
    sc_val_equiv->add_option("--delta", o.delta)->required();
    sc_val_equiv->add_option("--eps", o.eps);

    CLI::App* sc_ball = app.add_subcommand("ball-check", "realize the value on a ball");
    sc_ball->add_option("--field", o.field)->required();
    sc_ball->add_option("--center", o.center)->required();
    sc_ball->add_option("--delta", o.delta)->required();
    sc_ball->add_option("--poly", o.poly)->required();
    sc_ball->add_option("--trials", o.trials);
    sc_ball->add_option("--seed", o.seed);

    for (CLI::App* sc : {sc_normalize, sc_skeleton, sc_classify, sc_equiv, sc_between,
                         sc_sup, sc_inf, sc_small, sc_val_eval, sc_val_equal, sc_val_equiv,
                         sc_ball})
        sc->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        Session session;
        if (!o.constants_path.empty()) session.load_constants_file(o.constants_path);

        json j;
        if (*sc_normalize)
            j = cmd_normalize(session, o);
        else if (*sc_skeleton)
            j = cmd_skeleton(session, o);
        else if (*sc_classify)
            j = cmd_classify(session, o);
        else if (*sc_equiv)
            j = cmd_equiv(session, o);
        else if (*sc_between)
            j = cmd_between(session, o);
        else if (*sc_sup)
            j = cmd_extreme(session, o, true);
        else if (*sc_inf)
            j = cmd_extreme(session, o, false);
        else if (*sc_small)
            j = cmd_small(session, o);
        else if (*sc_val_eval)
            j = cmd_val_eval(session, o);
        else if (*sc_val_equal)
            j = cmd_val_compare(session, o, true);
        else if (*sc_val_equiv)
            j = cmd_val_compare(session, o, false);
        else if (*sc_ball)
            j = cmd_ball_check(session, o);
        else
            throw error("no subcommand selected");

        out << (o.indent >= 0 ? j.dump(o.indent) : j.dump()) << "\n";
        return 0;
    } catch (const parse_error& e) {  // config_error included
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace smallext
