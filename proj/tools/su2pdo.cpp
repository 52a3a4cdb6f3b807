// su2pdo: command-line front end for the SU(2) symbol calculus.
// Exit codes: 0 pass, 1 verification failure, 2 input error, 3 band-limit error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "su2pdo/acceptance.hpp"
#include "su2pdo/io.hpp"

using namespace su2pdo;
using io::json;

namespace {

enum Exit { kPass = 0, kVerifyFail = 1, kInputError = 2, kBandLimit = 3 };

struct RunConfig {
    double lmax = 8.0;
    double tol = 1e-10;
    int depth = 2;
    std::string family = "qij";
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 20261016;

    int twice_lmax() const {
        const double t = 2.0 * lmax;
        if (lmax < 0 || t != std::floor(t)) throw io::InputError("--lmax must be a non-negative multiple of 1/2");
        if (t > kMaxTwiceEll) throw io::BandLimitError("--lmax exceeds the validated range ell <= " + std::to_string(kMaxTwiceEll / 2));
        return int(t);
    }
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw io::InputError("cannot write " + cfg.out);
    f << text << '\n';
}

void emit_json(const RunConfig& cfg, const json& j) {
    if (cfg.format != "json") throw io::InputError("this command only writes json");
    emit(cfg, j.dump(2));
}

std::string csv_escape(const std::string& s) {
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
}

std::vector<DifferenceOp> difference_family(const RunConfig& cfg) {
    if (cfg.family != "qij" && cfg.family != "tri") throw io::InputError("--family must be qij or tri");
    return family(cfg.family);
}

CatalogParams params(double c_re, double c_im, int k) { return {Complex(c_re, c_im), k}; }

// --in file or --builtin name
Symbol load_symbol(const RunConfig& cfg, const std::string& in, const std::string& name, const CatalogParams& p) {
    if (!in.empty() && !name.empty()) throw io::InputError("give either --in or --builtin");
    if (!in.empty()) return io::symbol_from_json(io::read_file(in));
    if (name.empty()) throw io::InputError("give --in or --builtin");
    try {
        return builtin(name, cfg.twice_lmax(), p);
    } catch (const std::invalid_argument& e) {
        throw io::InputError(e.what());
    }
}

DifferenceOp parse_difference(const std::string& op) {
    if (op.size() == 3 && op[0] == 'D' && (op[1] == '1' || op[1] == '2') && (op[2] == '1' || op[2] == '2'))
        return D(op[1] - '0', op[2] - '0');
    try {
        return difference(op);
    } catch (const std::invalid_argument&) {
        throw io::InputError("unknown difference operator " + op);
    }
}

}  // namespace

namespace cmd {

int transform(const RunConfig& cfg, bool lmax_given, const std::string& in, bool parseval, bool trim) {
    const json j = io::read_file(in);
    const GroupFunction f = io::function_from_json(j, lmax_given ? cfg.twice_lmax() : 0);
    const int T = lmax_given ? cfg.twice_lmax() : f.grid.twice_L;
    if (T > f.grid.twice_L)
        throw io::BandLimitError("samples on the twice_L = " + std::to_string(f.grid.twice_L) +
                                 " grid do not resolve twice_ell = " + std::to_string(T));
    Coefficients c = forward(f, HalfInt(T));
    if (trim) {
        int top = c.twice_max();
        while (top > 0 && c[top].cwiseAbs().maxCoeff() <= cfg.tol) --top;
        c.blocks.resize(top + 1);
    }
    json out = io::to_json(c);
    if (parseval) out["parseval_gap"] = parseval_gap(f, HalfInt(T));
    emit_json(cfg, out);
    return kPass;
}

int synthesize(const RunConfig& cfg, bool lmax_given, const std::string& in) {
    const Coefficients c = io::coefficients_from_json(io::read_file(in));
    int T = c.twice_max();
    if (lmax_given) {
        if (cfg.twice_lmax() < T) throw io::BandLimitError("--lmax is below the band limit of the coefficients");
        T = cfg.twice_lmax();
    }
    if (T > kMaxTwiceEll) throw io::BandLimitError("band limit beyond the validated range");
    emit_json(cfg, io::to_json(inverse(c, build_grid(HalfInt(T)))));
    return kPass;
}

int diff(const RunConfig& cfg, const std::string& in, const std::string& name, const CatalogParams& p,
         const std::vector<std::string>& ops) {
    Symbol s = load_symbol(cfg, in, name, p);
    if (ops.empty()) throw io::InputError("give at least one --op");
    for (const std::string& op : ops) {
        const DifferenceOp d = parse_difference(op);
        if (s.reliable_twice() - d.width() < 0) throw io::BandLimitError("band limit too small for " + op);
        s = apply(d, s);
    }
    json out = io::to_json(s);
    out["ops"] = ops;
    out["edge_twice"] = s.reliable_twice();  // blocks above this one are unreliable
    emit_json(cfg, out);
    return kPass;
}

int classify(const RunConfig& cfg, const std::string& in, const std::string& name, const CatalogParams& p,
             bool parametrix) {
    Symbol s = load_symbol(cfg, in, name, p);
    if (parametrix) s = invert_symbol(s).inverse;
    const ClassFit f = fit_symbol_class(s, difference_family(cfg), cfg.depth);
    if (cfg.format == "csv") {
        std::string t = "alpha,beta,slope,residual,vanishing\n";
        for (const auto& sl : f.slopes) {
            std::string a, b;
            for (int v : sl.alpha) a += std::to_string(v);
            for (int v : sl.beta) b += std::to_string(v);
            t += a + "," + b + "," + std::to_string(sl.slope) + "," + std::to_string(sl.residual) + "," +
                 (sl.vanishing ? "1" : "0") + "\n";
        }
        emit(cfg, t + "# m=" + std::to_string(f.m) + " rho=" + std::to_string(f.rho));
        return kPass;
    }
    emit_json(cfg, io::to_json(f));
    return kPass;
}

int hypoel(const RunConfig& cfg, const std::string& name, const CatalogParams& p, double m, double m0, double rho,
           double delta) {
    const Symbol s = load_symbol(cfg, "", name, p);
    const HypoReport r = hypoellipticity_check(s, m, m0, rho, delta, difference_family(cfg), cfg.depth);
    json out = io::to_json(r);
    out["name"] = name;
    try {
        out["global"] = io::to_json(gh_classify(name, p, cfg.twice_lmax()));
    } catch (const std::invalid_argument&) {
        // no exact classification for this entry
    }
    emit_json(cfg, out);
    return r.verdict ? kPass : kVerifyFail;
}

int parametrix(const RunConfig& cfg, const std::string& name, const CatalogParams& p, int terms, double a_scale,
               int a_twice) {
    if (!name.empty()) {
        const DifferentialExpression e = builtin_expression(name, p);
        if (!e.is_left_invariant()) throw io::InputError("--name takes a left-invariant catalog entry");
        const Inversion inv = parametrix_left_invariant(e.symbol(cfg.twice_lmax()));
        emit_json(cfg, {{"kind", "parametrix"}, {"name", name}, {"singular_twice", inv.singular_twice},
                        {"inverse", io::to_json(inv.inverse)}});
        return kPass;
    }
    // A = L + a(x) D3 with random a of the given band
    std::mt19937_64 g(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Coefficients a(a_twice);
    for (auto& b : a.blocks)
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = a_scale * Complex(u(g), u(g));
    const DifferentialExpression A = builtin_expression("Lap") + a * vector_field(algebra_D3());
    ParametrixOptions opt;
    opt.terms = terms;
    std::normal_distribution<double> n;
    for (int k = 0; k < 2; ++k) opt.points.push_back(normalized({n(g), n(g), n(g), n(g)}));
    for (int t = 16; t <= 48; t += 4) opt.twice_ells.push_back(t);
    const ParametrixResult r = su2pdo::parametrix(A, taylor_frame(difference_family(cfg), terms + 1), opt);
    if (cfg.format == "csv") {
        std::string t = "N,residual_order\n";
        for (std::size_t k = 0; k < r.residual_order.size(); ++k)
            t += std::to_string(k) + "," + std::to_string(r.residual_order[k]) + "\n";
        emit(cfg, t);
        return kPass;
    }
    emit_json(cfg, io::to_json(r));
    return kPass;
}

int catalog_cmd(const RunConfig& cfg, bool verify_all, int criterion) {
    if (verify_all || criterion > 0) {
        std::vector<CriterionResult> rs;
        if (criterion > 0) rs.push_back(run_criterion(criterion, {cfg.seed}));
        else rs = run_acceptance({cfg.seed});
        bool all = true;
        for (const auto& r : rs) all = all && r.pass;
        if (cfg.format == "csv") {
            std::string t = "id,name,pass,seconds,detail\n";
            for (const auto& r : rs)
                t += std::to_string(r.id) + "," + csv_escape(r.name) + "," + (r.pass ? "1" : "0") + "," +
                     std::to_string(r.seconds) + "," + csv_escape(r.detail) + "\n";
            emit(cfg, t);
        } else {
            json arr = json::array();
            for (const auto& r : rs)
                arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
            emit_json(cfg, {{"kind", "verification"}, {"all_pass", all}, {"criteria", arr}});
        }
        return all ? kPass : kVerifyFail;
    }
    json arr = json::array();
    for (const CatalogEntry& e : catalog()) {
        json j{{"name", e.name}, {"description", e.description}, {"diagonal", e.diagonal}, {"band", e.band},
               {"expected", e.expected}};
        try {
            j["global"] = io::to_json(gh_classify(e.name, {}, cfg.twice_lmax()));
        } catch (const std::invalid_argument&) {
        }
        arr.push_back(std::move(j));
    }
    emit_json(cfg, {{"kind", "catalog"}, {"entries", arr}});
    return kPass;
}

}  // namespace cmd

int main(int argc, char** argv) {
    CLI::App app{"Fourier analysis and pseudo-differential symbols on SU(2)"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--lmax", cfg.lmax, "band limit ell (half-integers allowed)")->envname("SU2PDO_LMAX");
    app.add_option("--tol", cfg.tol, "tolerance")->envname("SU2PDO_TOL")->check(CLI::PositiveNumber);
    app.add_option("--depth", cfg.depth, "difference depth for fits")->envname("SU2PDO_DEPTH")->check(CLI::Range(0, 4));
    app.add_option("--family", cfg.family, "difference family: qij or tri")->envname("SU2PDO_FAMILY");
    app.add_option("--out", cfg.out, "output file (default stdout)")->envname("SU2PDO_OUT");
    app.add_option("--format", cfg.format, "json or csv")->envname("SU2PDO_FORMAT")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", cfg.seed, "seed for randomised inputs")->envname("SU2PDO_SEED");
    app.fallthrough();

    std::string in, name;
    double c_re = 0.0, c_im = 0.0;
    int k = 1;
    auto add_builtin = [&](CLI::App* s) {
        s->add_option("--builtin,--name", name, "catalog entry");
        s->add_option("--c-re", c_re, "real part of c");
        s->add_option("--c-im", c_im, "imaginary part of c");
        s->add_option("--k", k, "power in dXk_plus_c");
    };

    bool parseval = false, trim = false;
    auto* transform = app.add_subcommand("transform", "function samples -> Fourier coefficients");
    transform->add_option("--in", in, "function JSON")->required();
    transform->add_flag("--parseval", parseval, "report the Parseval gap");
    transform->add_flag("--trim", trim, "drop trailing blocks below --tol");

    auto* synthesize = app.add_subcommand("synthesize", "Fourier coefficients -> samples on the quadrature grid");
    synthesize->add_option("--in", in, "coefficients JSON")->required();

    std::vector<std::string> ops;
    auto* diff = app.add_subcommand("diff", "apply difference operators to a symbol");
    diff->add_option("--in", in, "symbol JSON");
    add_builtin(diff);
    diff->add_option("--op", ops, "D11 D12 D21 D22 tri+ tri- tri0, applied in order");

    bool use_parametrix = false;
    auto* classify = app.add_subcommand("classify", "fit the symbol class (m, rho, delta)");
    classify->add_option("--in", in, "symbol JSON");
    add_builtin(classify);
    classify->add_flag("--parametrix", use_parametrix, "classify the inverse symbol");

    double m = 2.0, m0 = 1.0, rho = 0.5, delta = 0.0;
    auto* hypoel = app.add_subcommand("hypoel", "hypoellipticity check of a catalog operator");
    add_builtin(hypoel);
    hypoel->add_option("--m", m, "order of the symbol");
    hypoel->add_option("--m0", m0, "order of the inverse bound");
    hypoel->add_option("--rho", rho, "rho");
    hypoel->add_option("--delta", delta, "delta");

    int terms = 3, a_twice = 2;
    double a_scale = 0.05;
    auto* parametrix = app.add_subcommand("parametrix", "parametrix of a catalog operator or of L + a(x) D3");
    add_builtin(parametrix);
    parametrix->add_option("--terms", terms, "recursion terms N")->check(CLI::Range(0, 4));
    parametrix->add_option("--a-scale", a_scale, "size of the random coefficient a");
    parametrix->add_option("--a-twice", a_twice, "band limit of a (twice ell)")->check(CLI::Range(0, 4));

    bool verify_all = false;
    int criterion = 0;
    auto* catalog_app = app.add_subcommand("catalog", "list catalog entries or run the verification");
    catalog_app->add_flag("--verify-all", verify_all, "run every acceptance check");
    catalog_app->add_option("--criterion", criterion, "run one acceptance check")->check(CLI::Range(1, kCriteriaCount));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    const bool lmax_given = app.count("--lmax") > 0 || std::getenv("SU2PDO_LMAX") != nullptr;
    const CatalogParams p = params(c_re, c_im, k);
    try {
        cfg.twice_lmax();
        if (*transform) return cmd::transform(cfg, lmax_given, in, parseval, trim);
        if (*synthesize) return cmd::synthesize(cfg, lmax_given, in);
        if (*diff) return cmd::diff(cfg, in, name, p, ops);
        if (*classify) return cmd::classify(cfg, in, name, p, use_parametrix);
        if (*hypoel) return cmd::hypoel(cfg, name, p, m, m0, rho, delta);
        if (*parametrix) return cmd::parametrix(cfg, name, p, terms, a_scale, a_twice);
        return cmd::catalog_cmd(cfg, verify_all, criterion);
    } catch (const io::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const io::BandLimitError& e) {
        std::cerr << "band limit: " << e.what() << '\n';
        return kBandLimit;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBandLimit;
    }
}
