#include <catch2/catch_amalgamated.hpp>

#include "nctorus/json_io.hpp"
#include "nctorus/nctorus.hpp"

using namespace nctorus;

TEST_CASE("scalar context round trip") {
    const Json j = Json::parse(R"({"mode": "field",
        "field": {"minpoly": ["-2", "0", "1"], "interval": ["1", "2"]}})");
    const auto ctx = parse_context(j);
    REQUIRE(ctx.mode == ScalarMode::Field);
    CHECK(ctx.field->degree() == 2);
    const Json back = emit_context(ctx);
    CHECK(parse_context(back) == ctx);

    CHECK(parse_context(Json::parse(R"({"mode": "rational"})")).mode == ScalarMode::Rational);
    CHECK(parse_context(Json::parse(R"({"mode": "symbolic"})")).mode == ScalarMode::Symbolic);
    CHECK_THROWS_AS(parse_context(Json::parse(R"({"mode": "octonion"})")), SchemaError);
}

TEST_CASE("scalar encodings round trip") {
    const auto rat = ScalarContext::rational();
    CHECK(parse_scalar(Json("3/4"), rat) == Scalar::rational(3, 4));
    CHECK(parse_scalar(Json(-7), rat) == Scalar::rational(-7));
    CHECK(emit_scalar(Scalar::rational(3, 4)) == Json("3/4"));

    const auto field = parse_context(Json::parse(
        R"({"mode": "field", "field": {"minpoly": ["-2", "0", "1"], "interval": ["1", "2"]}})"));
    const Scalar x = parse_scalar(Json::parse(R"({"coeffs": ["1/2", "-3"]})"), field);
    CHECK(parse_scalar(emit_scalar(x), field) == x);
    CHECK_THROWS_AS(parse_scalar(Json::parse(R"({"coeffs": ["1"]})"), field), SchemaError);

    const auto sym = ScalarContext::symbolic();
    const Scalar p = parse_scalar(
        Json::parse(R"({"terms": [{"monomial": [[1,2],[3,4]], "coeff": "2/3"},
                                   {"monomial": [], "coeff": "5"}]})"),
        sym);
    CHECK(p == Scalar(SymbolicPoly(Rat(5))) +
                   Scalar(SymbolicPoly(Rat(2, 3))) * Scalar::symbolic_entry(1, 2) *
                       Scalar::symbolic_entry(3, 4));
    CHECK(parse_scalar(emit_scalar(p), sym) == p);

    CHECK_THROWS_AS(parse_scalar(Json("1/0"), rat), ParseError);
    CHECK_THROWS_AS(
        parse_scalar(Json::parse(R"({"terms": [{"monomial": [[2,1]], "coeff": "1"}]})"), sym),
        SchemaError);
}

TEST_CASE("skew matrix encoding round trips and rejects bad keys") {
    const auto rat = ScalarContext::rational();
    const Json j = Json::parse(R"({"n": 3, "upper": {"1,2": "1/3", "2,3": "-2"}})");
    const SkewMatrix m = parse_skew_matrix(j, rat);
    CHECK(m.at(0, 1) == Scalar::rational(1, 3));
    CHECK(m.at(2, 1) == Scalar::rational(2));
    CHECK(m.at(0, 2).is_zero());
    const SkewMatrix again = parse_skew_matrix(emit_skew_matrix(m), rat);
    CHECK(m == again);

    CHECK_THROWS_AS(parse_skew_matrix(Json::parse(R"({"n": 2, "upper": {"2": "1"}})"), rat),
                    SchemaError);
    CHECK_THROWS_AS(parse_skew_matrix(Json::parse(R"({"upper": {}})"), rat), SchemaError);
}

TEST_CASE("integer matrices and block elements") {
    const Json j = Json::parse("[[0, -1], [1, 0]]");
    const IntMatrix w = parse_int_matrix(j);
    CHECK(w(0, 1) == -1);
    CHECK(emit_int_matrix(w) == j);

    const BlockElement g = make_g_I_sigma(IndexTuple({1, 3}), 4);
    CHECK(parse_block_element(emit_block_element(g)) == g);
}

TEST_CASE("range emission is canonical and deterministic") {
    const auto sym = ScalarContext::symbolic();
    const Scalar one(SymbolicPoly(Rat(1)));
    const Scalar t12 = Scalar::symbolic_entry(1, 2);
    const auto r = span({one, t12});
    const Json a = emit_range(r);
    const Json b = emit_range(span({t12, one + t12}));
    CHECK(a == b); // same submodule, bit-identical canonical form
    CHECK(a.at("labels") == Json::parse(R"(["1", "t12"])"));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("orbifold report emission") {
    const SkewMatrix theta = SkewMatrix::generic(2);
    IntMatrix w4(2, 2, Int(0));
    w4(0, 1) = -1;
    w4(1, 0) = 1;
    const auto act = CyclicAction::from_generator(w4, theta);
    const Json j = emit_orbifold_report(orbifold_range_bounds(theta, act));
    CHECK(j.at("order") == 4);
    CHECK(j.at("decided") == true);
    CHECK(j.at("admitted") == Json::parse(R"(["1,2"])"));
    CHECK(j.at("range").at("denominator") == "4");
}
