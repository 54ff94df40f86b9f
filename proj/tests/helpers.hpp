#pragma once

#include "smallext/classify.hpp"
#include "smallext/scalar.hpp"
#include "smallext/slot_vector.hpp"

#include <vector>

namespace smallext::testing {

inline std::vector<Integer> ipoly(std::initializer_list<long> cs) {
    std::vector<Integer> out;
    for (long c : cs) out.emplace_back(c);
    return out;
}

inline ConstantPtr sqrt2_const() {
    static ConstantPtr c = make_constant("sqrt2", ipoly({-2, 0, 1}), Rational(1), Rational(2));
    return c;
}

inline ConstantPtr sqrt3_const() {
    static ConstantPtr c = make_constant("sqrt3", ipoly({-3, 0, 1}), Rational(1), Rational(2));
    return c;
}

inline ConstantPtr cbrt2_const() {
    static ConstantPtr c = make_constant("cbrt2", ipoly({-2, 0, 0, 1}), Rational(1), Rational(2));
    return c;
}

inline Scalar rt2(const Rational& coeff = Rational(1)) {
    return Scalar::constant(sqrt2_const(), coeff);
}

inline Scalar rt3(const Rational& coeff = Rational(1)) {
    return Scalar::constant(sqrt3_const(), coeff);
}

inline Scalar cb2(const Rational& coeff = Rational(1)) {
    return Scalar::constant(cbrt2_const(), coeff);
}

inline Rational frac(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Plain vector over an FGNormalized FIN(r) structure (coords 0..r-1).
inline SlotVector vec(const StructurePtr& s, const std::vector<Scalar>& coords) {
    SlotVectorBuilder b(s);
    for (std::size_t i = 0; i < coords.size(); ++i)
        b.set(Position{0, static_cast<long>(i)}, coords[i]);
    return std::move(b).build();
}

/// Vector plus marker at the first-`cut`-coordinates segment (FGNormalized).
inline SlotVector vecm(const StructurePtr& s, const std::vector<Scalar>& coords, long cut,
                       const Scalar& marker) {
    SlotVectorBuilder b(s);
    for (std::size_t i = 0; i < coords.size(); ++i)
        b.set(Position{0, static_cast<long>(i)}, coords[i]);
    b.set_marker(fin_segment(*s, cut), marker);
    return std::move(b).build();
}

inline StructurePtr q2() {
    static StructurePtr s = fin_structure(2);
    return s;
}

inline StructurePtr q3() {
    static StructurePtr s = fin_structure(3);
    return s;
}

inline StructurePtr omega1() {
    static StructurePtr s = make_structure({Block{BlockKind::Omega, 0}}, GroupMode::FullHahnSum);
    return s;
}

inline StructurePtr opp1() {
    static StructurePtr s = make_structure({Block{BlockKind::OmegaOpp, 0}}, GroupMode::FullHahnSum);
    return s;
}

} // namespace smallext::testing
