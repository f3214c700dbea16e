#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hardy/hardy_functionals.hpp"
#include "hardy/sharpness_probe.hpp"
#include "hardy/test_functions.hpp"

namespace hardy {

using json = nlohmann::json;

inline json to_json(const InequalityReport& r) {
    json j;
    j["kind"] = kind_name(r.params.kind);
    j["n"] = r.params.n;
    j["p"] = r.params.exponent();
    j["terms"] = {{"A", r.grad_term}, {"B", r.middle_term}, {"C", r.singular_term}};
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["deficit"] = r.deficit;
    j["quotient"] = r.quotient_defined ? json(r.quotient) : json();
    j["grid"] = {{"N", r.grid.resolution}, {"grading", r.grid.graded}, {"scheme", r.grid.scheme}};
    j["u_spec"] = r.u_spec.empty() ? json() : json::parse(r.u_spec);
    return j;
}

inline std::string profile_spec(const std::string& kind, int n, double p, double eps) {
    json j;
    j["kind"] = kind;
    j["n"] = n;
    if (p > 0.0) j["p"] = p;
    j["eps"] = eps;
    return j.dump();
}

inline std::string smooth_spec(const SmoothTestFunction& f) {
    json j;
    j["kind"] = "random_smooth";
    j["n"] = f.dimension();
    j["degree"] = f.degree();
    j["seed"] = f.seed();
    return j.dump();
}

inline json to_json(const SweepResult& s) {
    json j;
    j["kind"] = kind_name(s.params.kind);
    j["n"] = s.params.n;
    j["p"] = s.params.exponent();
    j["target"] = s.target;
    j["eps"] = s.eps;
    j["quotient"] = s.quotient;
    j["best"] = s.best;
    j["monotone"] = s.monotone;
    return j;
}

inline json to_json(const SearchTraceEntry& e) {
    json j;
    j["restart"] = e.restart;
    j["seed"] = e.restart_seed;
    j["initial_deficit"] = e.initial_deficit;
    j["initial_scale"] = e.initial_scale;
    j["best_deficit"] = e.best_deficit;
    j["best_scale"] = e.best_scale;
    j["best_objective"] = e.best_objective;
    j["accepted_steps"] = e.accepted_steps;
    return j;
}

inline json to_json(const SearchResult& s) {
    json j;
    j["iterations"] = s.iterations;
    j["seed"] = s.seed;
    j["n"] = s.params.n;
    j["p"] = s.params.p;
    j["min_deficit"] = s.min_deficit;
    j["min_objective"] = s.min_objective;
    j["argmin_restart"] = s.argmin_restart;
    j["counterexample_candidate"] = s.counterexample_candidate;
    json arg;
    arg["spec"] = json::parse(smooth_spec(s.argmin));
    json coefs = json::array();
    for (const auto& t : s.argmin.terms()) coefs.push_back(t.coef);
    arg["coefficients"] = coefs;
    j["argmin"] = arg;
    json tr = json::array();
    for (const auto& e : s.trace) tr.push_back(to_json(e));
    j["trace"] = tr;
    return j;
}

// Canonical file form: sorted keys (nlohmann default), two-space indent,
// trailing newline. Parsing and re-serializing a written file is
// byte-identical.
inline std::string json_file_text(const json& j) { return j.dump(2) + "\n"; }

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << json_file_text(j);
}

// Two-column CSV with a one-line header.
inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::pair<double, double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << header << "\n";
    out.precision(17);
    for (const auto& [a, b] : rows) out << a << "," << b << "\n";
}

}  // namespace hardy
