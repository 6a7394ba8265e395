// nctorus: batch CLI over the library. One subcommand per capability, JSON
// in, JSON or text out. Exit codes: 0 ok, 1 error, 2 unknown (a bounded
// search was exhausted).

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nctorus/json_io.hpp"
#include "nctorus/heisenberg.hpp"
#include "nctorus/nctorus.hpp"

using namespace nctorus;

namespace {

struct Flags {
    long t_max = 64;
    long coeff_bound = 10;
    long max_order = 24;
    double tolerance = 1e-6;
};

struct Outcome {
    Json payload;
    int exit_code = 0; // 0 ok, 2 unknown
    std::string status = "ok";
};

Json load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return j;
}

ScalarContext context_of(const Json& j) {
    if (j.contains("mode") || j.contains("field")) return parse_context(j);
    return ScalarContext::rational();
}

std::string scalar_text(const Scalar& s) { return s.str(); }

// ---- subcommand handlers ------------------------------------------------

Outcome run_pfaffian(const Json& in, const Flags&) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    const Scalar pf = pfaffian(theta);
    Json payload;
    payload["pfaffian"] = emit_scalar(pf);
    payload["text"] = scalar_text(pf);
    return {payload, 0, "ok"};
}

Outcome run_minors(const Json& in, const Flags&) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    Json list = Json::array();
    const auto minors = all_pfaffian_minors(theta);
    for (const auto& [tuple, pf] : minors)
        list.push_back(Json{{"I", tuple.label()}, {"pfaffian", emit_scalar(pf)}});
    return {Json{{"count", minors.size()}, {"minors", list}}, 0, "ok"};
}

Outcome run_find_t(const Json& in, const Flags& flags) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    const auto t = find_positive_t(theta, flags.t_max);
    Json payload;
    payload["found"] = t.has_value();
    if (t) payload["t"] = *t;
    return {payload, 0, "ok"};
}

Outcome run_check_symplectic(const Json& in, const Flags&) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    const IntMatrix w = parse_int_matrix(in.at("W"));
    return {Json{{"symplectic", check_theta_symplectic(w, theta)}}, 0, "ok"};
}

Outcome run_order(const Json& in, const Flags& flags) {
    const IntMatrix w = parse_int_matrix(in.at("W"));
    const auto ord = order_of(w, flags.max_order);
    Json payload;
    payload["finite"] = ord.has_value();
    if (ord) payload["order"] = *ord;
    return {payload, 0, "ok"};
}

Outcome run_freeness(const Json& in, const Flags& flags) {
    const IntMatrix w = parse_int_matrix(in.at("W"));
    long order;
    if (in.contains("order")) {
        order = in.at("order").get<long>();
    } else {
        const auto ord = order_of(w, flags.max_order);
        if (!ord)
            throw InvariantViolation("W has no finite order within max_order");
        order = *ord;
    }
    return {Json{{"order", order}, {"free", free_outside_origin(w, order)}}, 0, "ok"};
}

Outcome run_extension_check(const Json& in, const Flags&) {
    const IntMatrix w = parse_int_matrix(in.at("W"));
    const IndexTuple I = parse_index_tuple(in.at("I"));
    return {Json{{"I", I.label()}, {"admissible", extension_condition(w, I)}}, 0, "ok"};
}

Outcome run_trace_range(const Json& in, const Flags&) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    return {emit_range(torus_range(theta)), 0, "ok"};
}

Outcome run_orbifold_range(const Json& in, const Flags& flags) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    const IntMatrix w = parse_int_matrix(in.at("W"));
    const auto act = CyclicAction::from_generator(w, theta, flags.max_order);
    return {emit_orbifold_report(orbifold_range_bounds(theta, act)), 0, "ok"};
}

Outcome run_morita_lambda(const Json& in, const Flags& flags) {
    const auto ctx = context_of(in);
    auto parse_range = [&](const Json& j) {
        std::vector<Scalar> gens;
        for (const auto& g : j.at("generators")) gens.push_back(parse_scalar(g, ctx));
        return span(gens);
    };
    const auto r1 = parse_range(in.at("r1"));
    const auto r2 = parse_range(in.at("r2"));
    const auto res = morita_lambda_search(r1, r2, flags.coeff_bound);
    Json payload;
    switch (res.status) {
        case MoritaSearchResult::Status::Found:
            payload["status"] = "found";
            payload["lambda"] = emit_scalar(*res.lambda);
            payload["lambda_text"] = scalar_text(*res.lambda);
            return {payload, 0, "ok"};
        case MoritaSearchResult::Status::NotFound:
            payload["status"] = "not_found";
            payload["reason"] = "rank mismatch";
            return {payload, 0, "ok"};
        case MoritaSearchResult::Status::Unknown:
            payload["status"] = "unknown";
            payload["exhausted"] = "coeff_bound";
            payload["coeff_bound"] = flags.coeff_bound;
            return {payload, 2, "unknown"};
    }
    throw Error("INTERNAL", "bad status");
}

Outcome run_gl2_orbit(const Json& in, const Flags&) {
    const auto ctx = context_of(in);
    const Scalar t1 = parse_scalar(in.at("theta1"), ctx);
    const Scalar t2 = parse_scalar(in.at("theta2"), ctx);
    switch (gl2_orbit_equal(t1, t2)) {
        case OrbitAnswer::Equal: return {Json{{"equal", true}}, 0, "ok"};
        case OrbitAnswer::Different: return {Json{{"equal", false}}, 0, "ok"};
        case OrbitAnswer::Unknown:
            return {Json{{"status", "unknown"}, {"exhausted", "iteration_cap"}}, 2, "unknown"};
    }
    throw Error("INTERNAL", "bad answer");
}

Outcome run_verify_module(const Json& in, const Flags& flags) {
    const auto ctx = context_of(in);
    const SkewMatrix theta = parse_skew_matrix(in.at("theta"), ctx);
    const std::size_t p = in.value("p", std::size_t(1));
    const ModuleGeometry geom(theta, p);
    const Json& grid = in.at("grid");
    const double L = grid.at("L").get<double>();
    const double h = grid.at("h").get<double>();
    const long K = grid.value("K", 0L);
    const std::string fn = in.value("function", std::string("gaussian"));
    const GridFunction f = fn == "gaussian_delta"
                               ? make_gaussian_delta(p, geom.q(), L, h, K)
                               : make_gaussian(p, geom.q(), L, h, K);

    const double tol = in.value("tolerance", flags.tolerance);
    const long radius = in.value("lbox_radius", 1L);
    std::vector<std::vector<long>> lbox;
    {
        std::vector<long> v(geom.n(), -radius);
        while (true) {
            lbox.push_back(v);
            std::size_t pos = 0;
            while (pos < geom.n() && v[pos] == radius) v[pos++] = -radius;
            if (pos == geom.n()) break;
            ++v[pos];
        }
    }

    std::optional<IntMatrix> w;
    std::optional<MetaplecticOp> op;
    if (in.contains("W")) {
        w = parse_int_matrix(in.at("W"));
        const auto blocks = w->submatrix(0, 0, 2 * p, 2 * p);
        op = op_for(blocks, p);
    }

    Json results = Json::array();
    double worst = 0;
    auto add = [&](const std::string& name, const std::string& detail, double residual) {
        worst = std::max(worst, residual);
        results.push_back(Json{{"test", name},
                               {"detail", detail},
                               {"residual", residual},
                               {"pass", residual < tol}});
    };

    std::vector<std::string> tests;
    if (in.contains("tests"))
        for (const auto& t : in.at("tests")) tests.push_back(t.get<std::string>());
    else
        tests = {"ccr", "covariance", "unitarity", "inner"};

    for (const std::string& test : tests) {
        if (test == "ccr") {
            // (f U_j) U_k = e(theta_jk) (f U_k) U_j for all generator pairs
            for (std::size_t j = 0; j < geom.n(); ++j)
                for (std::size_t k = j + 1; k < geom.n(); ++k) {
                    std::vector<long> ej(geom.n(), 0), ek(geom.n(), 0);
                    ej[j] = 1;
                    ek[k] = 1;
                    const GridFunction lhs = act_U(act_U(f, ej, geom), ek, geom);
                    GridFunction rhs = act_U(act_U(f, ek, geom), ej, geom);
                    const Complex phase = unit_phase(theta.at(j, k).to_double());
                    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= phase;
                    add("ccr", std::to_string(j + 1) + "," + std::to_string(k + 1),
                        grid_distance(lhs, rhs) / f.norm());
                }
        } else if (test == "covariance") {
            if (!w) throw SchemaError("covariance test needs \"W\"");
            for (const auto& l : lbox) {
                std::string label;
                for (std::size_t i = 0; i < l.size(); ++i)
                    label += (i ? "," : "") + std::to_string(l[i]);
                add("covariance", label, verify_covariance(f, *w, l, geom, *op));
            }
        } else if (test == "unitarity") {
            if (!w) throw SchemaError("unitarity test needs \"W\"");
            std::vector<long> shift(geom.n(), 0);
            shift[0] = 1;
            const GridFunction g = act_U(f, shift, geom);
            add("unitarity", "", verify_unitarity(f, g, *w, geom, *op));
        } else if (test == "inner") {
            if (!w) throw SchemaError("inner test needs \"W\"");
            std::vector<long> shift(geom.n(), 0);
            shift[0] = 1;
            const GridFunction g = act_U(f, shift, geom);
            add("inner", "", verify_inner_compat(f, g, *w, lbox, geom, *op));
        } else {
            throw SchemaError("unknown test \"" + test + "\"");
        }
    }
    Json payload;
    payload["results"] = results;
    payload["max_residual"] = worst;
    payload["tolerance"] = tol;
    payload["pass"] = worst < tol;
    return {payload, 0, "ok"};
}

// ---- report assembly ----------------------------------------------------

std::string render_text(const Json& report, double elapsed_ms) {
    std::ostringstream out;
    out << "command: " << report.at("command").get<std::string>() << "\n";
    out << "status:  " << report.at("status").get<std::string>() << "\n";
    const Json& p = report.at("payload");
    if (p.contains("text")) out << "value:   " << p.at("text").get<std::string>() << "\n";
    if (p.contains("count")) out << "minors:  " << p.at("count") << "\n";
    if (p.contains("decided")) {
        out << "order:   " << p.at("order") << "\n";
        out << "decided: " << (p.at("decided").get<bool>() ? "yes" : "no") << "\n";
        std::string admitted;
        for (const auto& a : p.at("admitted")) {
            if (!admitted.empty()) admitted += " / ";
            admitted += a.get<std::string>();
        }
        out << "admitted minors: " << admitted << "\n";
        const Json& range = p.at(p.at("decided").get<bool>() ? "range" : "lower");
        out << "denominator: " << range.at("denominator").get<std::string>() << "\n";
        std::string labels;
        for (const auto& l : range.at("labels")) {
            if (!labels.empty()) labels += ", ";
            labels += l.get<std::string>();
        }
        out << "labels: " << labels << "\n";
    }
    if (p.contains("lambda_text")) out << "lambda:  " << p.at("lambda_text").get<std::string>() << "\n";
    if (p.contains("equal")) out << "equal:   " << (p.at("equal").get<bool>() ? "yes" : "no") << "\n";
    if (p.contains("symplectic"))
        out << "symplectic: " << (p.at("symplectic").get<bool>() ? "yes" : "no") << "\n";
    if (p.contains("free")) out << "free:    " << (p.at("free").get<bool>() ? "yes" : "no") << "\n";
    if (p.contains("admissible"))
        out << "admissible: " << (p.at("admissible").get<bool>() ? "yes" : "no") << "\n";
    if (p.contains("finite"))
        out << "order:   " << (p.at("finite").get<bool>() ? p.at("order").dump() : "infinite")
            << "\n";
    if (p.contains("found") && p.contains("t")) out << "t:       " << p.at("t") << "\n";
    if (p.contains("found") && !p.contains("t")) out << "t:       not found\n";
    if (p.contains("results")) {
        for (const auto& r : p.at("results"))
            out << (r.at("pass").get<bool>() ? "PASS " : "FAIL ") << r.at("test").get<std::string>()
                << " " << r.at("detail").get<std::string>() << "  residual "
                << r.at("residual").get<double>() << "\n";
        out << "max residual: " << p.at("max_residual").get<double>() << "\n";
    }
    if (p.contains("status") && p.at("status") == "unknown")
        out << "exhausted: " << p.value("exhausted", std::string("bound")) << "\n";
    out << "elapsed: " << elapsed_ms << " ms\n";
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations for noncommutative tori and their cyclic orbifolds"};
    app.require_subcommand(1);

    std::string input_path, output_path, format = "json";
    Flags flags;

    const std::vector<std::pair<std::string, Outcome (*)(const Json&, const Flags&)>> commands{
        {"pfaffian", run_pfaffian},
        {"minors", run_minors},
        {"find-t", run_find_t},
        {"check-symplectic", run_check_symplectic},
        {"order", run_order},
        {"freeness", run_freeness},
        {"extension-check", run_extension_check},
        {"trace-range", run_trace_range},
        {"orbifold-range", run_orbifold_range},
        {"morita-lambda", run_morita_lambda},
        {"gl2-orbit", run_gl2_orbit},
        {"verify-module", run_verify_module},
    };

    for (const auto& [name, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", input_path)->required();
        sub->add_option("--output", output_path);
        sub->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--t-max", flags.t_max);
        sub->add_option("--coeff-bound", flags.coeff_bound);
        sub->add_option("--max-order", flags.max_order);
        sub->add_option("--tolerance", flags.tolerance);
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    Json report;
    report["command"] = command;
    int exit_code = 0;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Json input = load_input(input_path);
        for (const auto& [name, handler] : commands) {
            if (name != command) continue;
            Outcome out = handler(input, flags);
            report["status"] = out.status;
            report["payload"] = std::move(out.payload);
            exit_code = out.exit_code;
        }
    } catch (const Error& e) {
        report["status"] = "error";
        report["payload"] = Json{{"code", e.code()}, {"message", e.what()}};
        exit_code = 1;
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["payload"] = Json{{"code", "INTERNAL"}, {"message", e.what()}};
        exit_code = 1;
    }
    report["flags"] = Json{{"t_max", flags.t_max},
                           {"coeff_bound", flags.coeff_bound},
                           {"max_order", flags.max_order},
                           {"tolerance", flags.tolerance}};
    report["version"] = version;
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    std::string rendered;
    if (format == "text") {
        rendered = render_text(report, elapsed_ms);
    } else {
        rendered = report.dump(2) + "\n";
    }
    if (output_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(output_path);
        out << rendered;
    }
    return exit_code;
}
