#include "su2pdo/io.hpp"

#include <fstream>
#include <sstream>

namespace su2pdo::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw InputError(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

void expect_kind(const json& j, const char* kind) {
    const json& k = field(j, "kind");
    if (!k.is_string() || k.get<std::string>() != kind)
        throw InputError(std::string("expected kind \"") + kind + "\"");
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, int n) {
    if (!j.is_array() || int(j.size()) != n) throw InputError("block has the wrong number of rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || int(j[i].size()) != n) throw InputError("block row has the wrong length");
        for (int k = 0; k < n; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json to_json(const Coefficients& c) {
    json blocks = json::array();
    for (const Matrix& b : c.blocks) blocks.push_back(to_json(b));
    return {{"kind", "coefficients"}, {"twice_max", c.twice_max()}, {"blocks", blocks}};
}

Coefficients coefficients_from_json(const json& j) {
    expect_kind(j, "coefficients");
    const int T = int_field(j, "twice_max");
    if (T < 0) throw InputError("twice_max must be non-negative");
    const json& blocks = field(j, "blocks");
    if (!blocks.is_array() || int(blocks.size()) != T + 1) throw InputError("expected twice_max + 1 blocks");
    Coefficients c(T);
    for (int t = 0; t <= T; ++t) c[t] = matrix_from_json(blocks[t], t + 1);
    return c;
}

json to_json(const Symbol& s) {
    json j{{"kind", "symbol"},
           {"left_invariant", s.is_left_invariant()},
           {"twice_max", s.twice_max()},
           {"reliable_twice", s.reliable_twice()}};
    if (s.is_left_invariant()) {
        j["blocks"] = to_json(s.blocks())["blocks"];
    } else {
        json terms = json::array();
        for (const SymbolTerm& t : s.terms()) terms.push_back({{"coeff", to_json(t.coeff)}, {"base", to_json(t.base)}});
        j["terms"] = terms;
    }
    return j;
}

Symbol symbol_from_json(const json& j) {
    expect_kind(j, "symbol");
    const int reliable = j.contains("reliable_twice") ? int_field(j, "reliable_twice") : -1;
    const json& li = field(j, "left_invariant");
    if (!li.is_boolean()) throw InputError("left_invariant must be a boolean");
    if (li.get<bool>()) {
        json c{{"kind", "coefficients"}, {"twice_max", int_field(j, "twice_max")}, {"blocks", field(j, "blocks")}};
        return Symbol::left_invariant(coefficients_from_json(c), reliable);
    }
    const json& terms = field(j, "terms");
    if (!terms.is_array() || terms.empty()) throw InputError("terms must be a non-empty array");
    std::vector<SymbolTerm> out;
    for (const json& t : terms) out.push_back({coefficients_from_json(field(t, "coeff")), coefficients_from_json(field(t, "base"))});
    return Symbol::x_dependent(std::move(out), reliable);
}

json to_json(const GroupFunction& f) {
    json samples = json::array();
    for (Eigen::Index i = 0; i < f.samples.size(); ++i) samples.push_back(to_json(f.samples(i)));
    return {{"kind", "function"}, {"twice_L", f.grid.twice_L}, {"samples", samples}};
}

GroupFunction function_from_json(const json& j, int default_twice_L) {
    expect_kind(j, "function");
    const int T = j.contains("twice_L") ? int_field(j, "twice_L") : default_twice_L;
    if (T < 0) throw InputError("twice_L must be non-negative");
    GroupFunction f;
    f.grid = build_grid(HalfInt(T));
    if (j.contains("constant")) {
        f.samples = Vector::Constant(f.grid.size(), complex_from_json(j.at("constant")));
        return f;
    }
    const json& s = field(j, "samples");
    if (!s.is_array() || int(s.size()) != f.grid.size())
        throw InputError("expected " + std::to_string(f.grid.size()) + " samples for twice_L = " + std::to_string(T));
    f.samples.resize(f.grid.size());
    for (int i = 0; i < f.grid.size(); ++i) f.samples(i) = complex_from_json(s[i]);
    return f;
}

json to_json(const ClassFit& f) {
    json slopes = json::array();
    for (const auto& s : f.slopes)
        slopes.push_back({{"alpha", s.alpha}, {"beta", s.beta}, {"slope", s.slope}, {"residual", s.residual},
                          {"vanishing", s.vanishing}});
    return {{"kind", "class_fit"},
            {"m", f.m},
            {"rho", f.rho},
            {"delta", f.delta},
            {"window", {{"twice_lo", f.window.lo}, {"twice_hi", f.window.hi}}},
            {"slopes", slopes}};
}

json to_json(const HypoReport& r) {
    json ratios = json::array();
    for (const auto& q : r.ratios)
        ratios.push_back({{"alpha", q.alpha},
                          {"beta", q.beta},
                          {"bound_exponent", q.bound_exponent},
                          {"fitted_exponent", q.fitted_exponent},
                          {"constant", q.constant},
                          {"ok", q.ok}});
    return {{"kind", "hypoellipticity"},
            {"verdict", r.verdict},
            {"reason", r.reason},
            {"twice_invertible_from", r.invertible_from.twice},
            {"m0_fit", r.m0_fit},
            {"singular_twice", r.singular_twice},
            {"ratios", ratios}};
}

json to_json(const GHVerdict& v) {
    json w = json::array();
    for (const Witness& x : v.witnesses) w.push_back({{"twice_ell", x.twice_ell}, {"twice_m", x.twice_m}});
    return {{"kind", "gh_verdict"},
            {"globally_hypoelliptic", v.globally_hypoelliptic},
            {"infinitely_many_singular", v.infinitely_many_singular},
            {"witnesses", w},
            {"inverse_bound", v.inverse_bound},
            {"certificate", v.certificate}};
}

json to_json(const ParametrixResult& r) {
    return {{"kind", "parametrix"}, {"residual_order", r.residual_order}, {"residual", r.residual}, {"norms", r.norms}};
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace su2pdo::io
