#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nctorus/errors.hpp"
#include "nctorus/group_action.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/scalar.hpp"
#include "nctorus/skew_matrix.hpp"
#include "nctorus/so_nn.hpp"
#include "nctorus/trace_range.hpp"

namespace nctorus {

using Json = nlohmann::ordered_json;

// ---- scalar context ---------------------------------------------------

inline ScalarContext parse_context(const Json& j) {
    if (!j.contains("mode")) throw SchemaError("missing \"mode\"");
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "rational") return ScalarContext::rational();
    if (mode == "symbolic") return ScalarContext::symbolic();
    if (mode == "field") {
        if (!j.contains("field")) throw SchemaError("field mode needs a \"field\" block");
        const Json& f = j.at("field");
        UniPoly minpoly;
        for (const auto& c : f.at("minpoly")) minpoly.push_back(parse_rational(c.get<std::string>()));
        const auto& iv = f.at("interval");
        if (iv.size() != 2) throw SchemaError("interval needs two endpoints");
        return ScalarContext::in_field(std::make_shared<NumberFieldSpec>(
            std::move(minpoly), parse_rational(iv[0].get<std::string>()),
            parse_rational(iv[1].get<std::string>())));
    }
    throw SchemaError("unknown mode \"" + mode + "\"");
}

inline Json emit_context(const ScalarContext& ctx) {
    Json j;
    j["mode"] = mode_name(ctx.mode);
    if (ctx.mode == ScalarMode::Field) {
        Json f;
        Json mp = Json::array();
        for (const auto& c : ctx.field->minpoly()) mp.push_back(format_rational(c));
        f["minpoly"] = mp;
        f["interval"] = {format_rational(ctx.field->lo()), format_rational(ctx.field->hi())};
        j["field"] = f;
    }
    return j;
}

// ---- scalars -----------------------------------------------------------

inline Scalar parse_scalar(const Json& j, const ScalarContext& ctx) {
    if (j.is_string())
        return Scalar::from_rational_in(ctx, parse_rational(j.get<std::string>()));
    if (j.is_number_integer())
        return Scalar::from_rational_in(ctx, Rat(j.get<long>()));
    if (j.is_object() && j.contains("coeffs")) {
        if (ctx.mode != ScalarMode::Field)
            throw SchemaError("coefficient vectors need field mode");
        FieldElement f{ctx.field, {}};
        for (const auto& c : j.at("coeffs")) f.coeffs.push_back(parse_rational(c.get<std::string>()));
        if (f.coeffs.size() != static_cast<std::size_t>(ctx.field->degree()))
            throw SchemaError("coefficient vector length must equal the field degree");
        return Scalar(std::move(f));
    }
    if (j.is_object() && j.contains("terms")) {
        if (ctx.mode != ScalarMode::Symbolic) throw SchemaError("term lists need symbolic mode");
        SymbolicPoly p;
        for (const auto& term : j.at("terms")) {
            SymbolicPoly mono(parse_rational(term.at("coeff").get<std::string>()));
            for (const auto& v : term.at("monomial")) {
                if (v.size() != 2) throw SchemaError("monomial entries are [i, j] pairs");
                const int i = v[0].get<int>(), jj = v[1].get<int>();
                if (i >= jj || i < 1) throw SchemaError("monomial pairs need 1 <= i < j");
                mono = mono * SymbolicPoly::variable(i, jj);
            }
            p = p + mono;
        }
        return Scalar(std::move(p));
    }
    throw SchemaError("unrecognized scalar encoding");
}

inline Json emit_scalar(const Scalar& s) {
    switch (s.mode()) {
        case ScalarMode::Rational: return format_rational(s.as_rational());
        case ScalarMode::Field: {
            Json coeffs = Json::array();
            for (const auto& c : s.as_field().coeffs) coeffs.push_back(format_rational(c));
            return Json{{"coeffs", coeffs}};
        }
        case ScalarMode::Symbolic: {
            Json terms = Json::array();
            for (const auto& [m, c] : s.as_symbolic().terms()) {
                Json mono = Json::array();
                for (const auto& [v, e] : m.factors)
                    for (int k = 0; k < e; ++k) mono.push_back({v.i, v.j});
                terms.push_back({{"monomial", mono}, {"coeff", format_rational(c)}});
            }
            return Json{{"terms", terms}};
        }
    }
    throw Error("INTERNAL", "bad mode");
}

// ---- matrices ----------------------------------------------------------

inline SkewMatrix parse_skew_matrix(const Json& j, const ScalarContext& ctx) {
    if (!j.contains("n")) throw SchemaError("skew matrix needs \"n\"");
    const std::size_t n = j.at("n").get<std::size_t>();
    SkewMatrix m(n, ctx);
    if (j.contains("upper")) {
        for (const auto& [key, value] : j.at("upper").items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw SchemaError("upper keys look like \"i,j\"");
            int i = 0, jj = 0;
            try {
                i = std::stoi(key.substr(0, comma));
                jj = std::stoi(key.substr(comma + 1));
            } catch (const std::exception&) {
                throw SchemaError("bad upper key \"" + key + "\"");
            }
            m.set_upper(i, jj, parse_scalar(value, ctx));
        }
    }
    return m;
}

inline Json emit_skew_matrix(const SkewMatrix& m) {
    Json upper = Json::object();
    for (std::size_t i = 1; i <= m.n(); ++i)
        for (std::size_t j = i + 1; j <= m.n(); ++j) {
            const Scalar& v = m.at(i - 1, j - 1);
            if (!v.is_zero())
                upper[std::to_string(i) + "," + std::to_string(j)] = emit_scalar(v);
        }
    return Json{{"n", m.n()}, {"upper", upper}};
}

inline IntMatrix parse_int_matrix(const Json& j) {
    if (!j.is_array() || j.empty()) throw SchemaError("integer matrix must be a nonempty array");
    const std::size_t rows = j.size(), cols = j[0].size();
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw SchemaError("ragged integer matrix");
        for (std::size_t jj = 0; jj < cols; ++jj) {
            if (j[i][jj].is_string())
                m(i, jj) = Int(j[i][jj].get<std::string>());
            else
                m(i, jj) = Int(j[i][jj].get<long>());
        }
    }
    return m;
}

inline Json emit_int_matrix(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).fits_slong_p())
                row.push_back(m(i, j).get_si());
            else
                row.push_back(m(i, j).get_str());
        }
        rows.push_back(row);
    }
    return rows;
}

inline Json emit_block_element(const BlockElement& g) {
    return Json{{"A", emit_int_matrix(g.A())},
                {"B", emit_int_matrix(g.B())},
                {"C", emit_int_matrix(g.C())},
                {"D", emit_int_matrix(g.D())}};
}

inline BlockElement parse_block_element(const Json& j) {
    return BlockElement(parse_int_matrix(j.at("A")), parse_int_matrix(j.at("B")),
                        parse_int_matrix(j.at("C")), parse_int_matrix(j.at("D")));
}

// ---- ranges ------------------------------------------------------------

inline Json emit_range(const ZModuleRange& r) {
    Json basis = Json::array();
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Json row = Json::array();
        for (std::size_t jj = 0; jj < r.labels().size(); ++jj)
            row.push_back(r.lattice()(i, jj).get_str());
        basis.push_back(row);
    }
    Json labels = Json::array();
    for (const auto& l : r.labels()) labels.push_back(l);
    return Json{{"denominator", r.denominator().get_str()}, {"basis", basis}, {"labels", labels}};
}

inline Json emit_orbifold_report(const OrbifoldRangeReport& rep) {
    Json admitted = Json::array();
    for (const auto& I : rep.admitted_minors) admitted.push_back(I.label());
    Json j;
    j["order"] = rep.order;
    j["decided"] = rep.decided;
    j["admitted"] = admitted;
    j["lower"] = emit_range(rep.lower);
    j["upper"] = emit_range(rep.upper);
    if (rep.decided) j["range"] = emit_range(rep.lower);
    return j;
}

inline IndexTuple parse_index_tuple(const Json& j) {
    std::vector<int> idx;
    for (const auto& v : j) idx.push_back(v.get<int>());
    return IndexTuple(std::move(idx));
}

} // namespace nctorus
