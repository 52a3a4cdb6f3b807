#include "su2pdo/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "su2pdo/opcatalog.hpp"
#include "su2pdo/torus.hpp"

namespace su2pdo {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(g); }
    Coefficients coefficients(int twice_max) {
        Coefficients c(twice_max);
        for (int t = 0; t <= twice_max; ++t)
            for (int i = 0; i <= t; ++i)
                for (int j = 0; j <= t; ++j) c[t](i, j) = Complex(uniform(), uniform());
        return c;
    }
    Quaternion element() {
        std::normal_distribution<double> n;
        return normalized({n(g), n(g), n(g), n(g)});
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Symbol field_symbol(const Eigen::Matrix2cd& x, int T) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t) c[t] = algebra_rep(t, x);
    return Symbol::left_invariant(c);
}

Symbol diag_symbol(int T, const std::function<Complex(double, double)>& f) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a) c[t](a, a) = f(0.5 * t, 0.5 * m_twice(t, a));
    return Symbol::left_invariant(c);
}

double max_entry(const Coefficients& c, int upto) {
    double e = 0.0;
    for (int t = 0; t <= std::min(upto, c.twice_max()); ++t) e = std::max(e, c[t].cwiseAbs().maxCoeff());
    return e;
}

double symbol_gap(const Symbol& a, const Symbol& b, int upto) {
    return max_abs_difference(a.blocks(), b.blocks(), std::min({upto, a.reliable_twice(), b.reliable_twice()}));
}

Symbol lin(const Symbol& a, Complex ca, const Symbol& b, Complex cb) { return add(scale(a, ca), scale(b, cb)); }

// ---- 1: round trip and Parseval ----
CriterionResult c1(Rng& rng) {
    const HalfInt L(32);
    const Coefficients c = rng.coefficients(32);
    const QuadratureGrid grid = build_grid(L);
    const GroupFunction f = inverse(c, grid);
    const Coefficients back = forward(f, L);
    double num = 0.0, den = 0.0;
    for (int t = 0; t <= 32; ++t) {
        num += (back[t] - c[t]).squaredNorm();
        den += c[t].squaredNorm();
    }
    const double rt = std::sqrt(num / den);
    const double pg = parseval_gap(f, L) / std::pow(l2_norm(f), 2);
    CriterionResult r;
    r.pass = rt <= 1e-10 && pg <= 1e-10;
    r.detail = "round trip " + fmt(rt) + ", Parseval " + fmt(pg);
    return r;
}

// ---- 2: difference table, compared with the printed entries ----
CriterionResult c2() {
    const int T = 20;
    const Symbol s0 = field_symbol(algebra_d0(), T), sp = field_symbol(algebra_dplus(), T),
                 sm = field_symbol(algebra_dminus(), T);
    const Symbol L = diag_symbol(T, [](double l, double) { return Complex(-l * (l + 1)); });
    const Symbol id = identity_symbol(T), zero = scale(id, 0.0);
    struct Entry {
        int i, j;
        const Symbol* arg;
        Symbol want;
        const char* label;
    };
    const std::vector<Entry> table{
        {1, 1, &s0, scale(id, 0.5), "D11 d0"},  {1, 1, &sp, zero, "D11 d+"},
        {1, 1, &sm, zero, "D11 d-"},            {1, 1, &L, lin(s0, -1.0, id, 0.25), "D11 L"},
        {1, 2, &s0, zero, "D12 d0"},            {1, 2, &sp, id, "D12 d+"},
        {1, 2, &sm, zero, "D12 d-"},            {1, 2, &L, scale(sm, -1.0), "D12 L"},
        {2, 1, &s0, zero, "D21 d0"},            {2, 1, &sp, zero, "D21 d+"},
        {2, 1, &sm, id, "D21 d-"},              {2, 1, &L, scale(sp, -1.0), "D21 L"},
        {2, 2, &s0, scale(id, -0.5), "D22 d0"}, {2, 2, &sp, zero, "D22 d+"},
        {2, 2, &sm, zero, "D22 d-"},            {2, 2, &L, lin(s0, 1.0, id, 0.25), "D22 L"},
    };
    int ok = 0;
    std::string bad;
    for (const Entry& e : table) {
        const double g = symbol_gap(apply(D(e.i, e.j), *e.arg), e.want, T);
        if (g <= 1e-10) ++ok;
        else bad += std::string(" ") + e.label + " (off by " + fmt(g) + ")";
    }
    // the values the transform produces for the two Laplacian diagonal entries
    const double alt = std::max(symbol_gap(apply(D(1, 1), L), lin(s0, -1.0, id, -0.75), T),
                                symbol_gap(apply(D(2, 2), L), lin(s0, 1.0, id, -0.75), T));
    CriterionResult r;
    r.pass = ok == 16;
    r.detail = std::to_string(ok) + "/16 printed entries" + (bad.empty() ? "" : ", mismatched:" + bad) +
               "; -+d0 - 3/4 I fits the L diagonal to " + fmt(alt);
    return r;
}

// ---- 3: finite Leibniz formula as displayed; grand differences commute ----
CriterionResult c3(Rng& rng) {
    const int T = 16;
    double literal = 0.0, exact = 0.0, comm = 0.0;
    for (int n = 0; n < 50; ++n) {
        const Symbol a = Symbol::left_invariant(rng.coefficients(T)), b = Symbol::left_invariant(rng.coefficients(T));
        const int i = 1 + n % 2, j = 1 + (n / 2) % 2;
        const Symbol rl = leibniz_residual(a, b, i, j, LeibnizForm::kTransposed);
        const Symbol re = leibniz_residual(a, b, i, j, LeibnizForm::kConvention);
        literal = std::max(literal, max_entry(rl.blocks(), rl.reliable_twice()));
        exact = std::max(exact, max_entry(re.blocks(), re.reliable_twice()));
        const Symbol x = apply(D(1, 1), apply(D(1, 2), a)), y = apply(D(1, 2), apply(D(1, 1), a));
        comm = std::max(comm, symbol_gap(x, y, T));
    }
    CriterionResult r;
    r.pass = literal <= 1e-9 && comm <= 1e-10;
    r.detail = "displayed order residual " + fmt(literal) + ", sum_k (D_kj a)(D_ik b) residual " + fmt(exact) +
               ", D11 D12 commutator " + fmt(comm);
    return r;
}

// ---- 4: sub-Laplacian, sigma^{-1} D12 sigma ----
CriterionResult c4() {
    const int T = 64;
    const Symbol ls = diag_symbol(T, [](double l, double m) { return Complex(m * m - l * (l + 1)); });
    const Symbol d = apply(D(1, 2), ls);
    double literal = 0.0, mirrored = 0.0, bound = 0.0;
    for (int t = 2; t <= d.reliable_twice(); ++t) {
        const double l = 0.5 * t;
        const Matrix inv = ls.blocks()[t].diagonal().cwiseInverse().asDiagonal();
        const Matrix q = inv * d.blocks()[t];
        Matrix disp = Matrix::Zero(t + 1, t + 1), mirr = Matrix::Zero(t + 1, t + 1);
        for (int b = 0; b <= t; ++b) {
            const double n = 0.5 * m_twice(t, b);
            if (b >= 1) disp(b - 1, b) = std::sqrt((l + n) * (l - n + 1)) / ((n - 1) * (n - 1) - l * (l + 1));
            if (b + 1 <= t) mirr(b + 1, b) = std::sqrt((l - n) * (l + n + 1)) / ((n + 1) * (n + 1) - l * (l + 1));
        }
        literal = std::max(literal, (q - disp).cwiseAbs().maxCoeff());
        mirrored = std::max(mirrored, (q - mirr).cwiseAbs().maxCoeff());
        bound = std::max(bound, std::sqrt(l / 2.0) * op_norm(q));
    }
    CriterionResult r;
    r.pass = literal <= 1e-12 && bound <= 1.0 + 1e-9;
    r.detail = "displayed closed form off by " + fmt(literal) + ", mirrored form (m = n+1) off by " + fmt(mirrored) +
               ", max sqrt(ell/2)||.|| = " + fmt(bound);
    return r;
}

// ---- 5: D3 + c ----
CriterionResult c5(Rng& rng) {
    std::vector<Complex> cs;
    for (int k = -2; k <= 2; ++k) cs.push_back(kI * (0.5 * k));
    for (int k = 0; k < 20; ++k) cs.emplace_back(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    int agree = 0;
    double worst = 0.0;
    for (const Complex c : cs) {
        const CatalogParams p{c};
        const GHVerdict v = gh_classify("D3_plus_c", p, 64);
        const Complex ic = kI * c;
        const bool singular = ic.imag() == 0.0 && std::floor(2.0 * ic.real()) == 2.0 * ic.real();
        if (v.globally_hypoelliptic != singular) ++agree;
        if (!v.globally_hypoelliptic) continue;
        const double dist = std::hypot(ic.real() - 0.5 * std::round(2.0 * ic.real()), ic.imag());
        const Symbol s = builtin("D3_plus_c", 64, p);
        for (int t = 0; t <= 64; ++t)
            worst = std::max(worst, s.blocks()[t].diagonal().cwiseInverse().cwiseAbs().maxCoeff() * dist);
    }
    CriterionResult r;
    r.pass = agree == int(cs.size()) && worst <= 1.0 + 1e-12;
    r.detail = std::to_string(agree) + "/" + std::to_string(cs.size()) + " verdicts agree, max ||sigma^{-1}|| dist = " +
               fmt(worst);
    return r;
}

// ---- 6: D'Alembertian ----
CriterionResult c6() {
    const Symbol w = builtin("DAlembert", 128);
    std::vector<long long> numeric;
    for (int t = 2; t <= 128; ++t) {
        const double smin = w.blocks()[t].diagonal().cwiseAbs().minCoeff();
        if (smin < 1e-9) {
            if (t % 2) numeric.push_back(-1);
            else numeric.push_back(t / 2);
        }
    }
    const PellSequence pell = pell_ells(3);
    const std::vector<long long> brute = triangular_square_ells(64);
    const double gap = halfint_gap_check(127);
    const Symbol w98 = builtin("DAlembert", 98);
    const Coefficients f = null_distribution("dalembert", 3);
    const double residual = max_entry(apply_symbol(w98, f), 98);
    const std::vector<long long> want{1, 8, 49};
    CriterionResult r;
    r.pass = numeric == want && pell.ell == want && brute == want && gap == 0.25 && residual <= 1e-9;
    std::string found;
    for (long long l : numeric) found += " " + std::to_string(l);
    r.detail = "singular ell in [1, 64]:" + found + "; half-integer gap " + fmt(gap) + "; Pell null residual " +
               fmt(residual);
    return r;
}


// ---- 7: null distributions ----
CriterionResult c7(Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Coefficients a = Complex(0.3) * rng.coefficients(2);
        worst = std::max(worst, nonhypo_witness(a, 16).second);
    }
    const double sp = max_entry(apply_symbol(builtin("Schrodinger+", 32), null_distribution("schrodinger+", 16)), 32);
    const double sm = max_entry(apply_symbol(builtin("Schrodinger-", 32), null_distribution("schrodinger-", 16)), 32);
    CriterionResult r;
    r.pass = worst <= 1e-12 && sp <= 1e-12 && sm <= 1e-12;
    r.detail = "D3^2 + a D3 on the zero mode " + fmt(worst) + ", S+ " + fmt(sp) + ", S- " + fmt(sm);
    return r;
}

// ---- 8: parametrix of L + a(x) D3 ----
CriterionResult c8(Rng& rng) {
    const DifferentialExpression A = builtin_expression("Lap") + Complex(0.05) * rng.coefficients(2) * vector_field(algebra_D3());
    ParametrixOptions opt;
    opt.terms = 3;
    opt.points = {rng.element(), rng.element()};
    for (int t = 16; t <= 48; t += 4) opt.twice_ells.push_back(t);
    const ParametrixResult res = parametrix(A, taylor_frame(family("qij"), 4), opt);
    bool ok = true;
    std::string orders;
    for (int k = 0; k <= 3; ++k) {
        orders += (k ? ", " : "") + fmt(res.residual_order[k]);
        if (k > 0) {
            const double drop = res.residual_order[k - 1] - res.residual_order[k];
            ok = ok && std::abs(drop - 1.0) <= 0.3;
        }
    }
    CriterionResult r;
    r.pass = ok;
    r.detail = "residual orders for N = 0..3: " + orders;
    return r;
}

// ---- 9: class fitter ----
CriterionResult c9() {
    const auto fam = family("qij");
    const Symbol ls = diag_symbol(64, [](double l, double m) { return Complex(m * m - l * (l + 1)); });
    const ClassFit a = fit_symbol_class(ls, fam, 2);
    // each first-order difference lowers the order by at least 1, and rho (the smallest drop) is 1
    double min_drop = 1e300;
    for (const auto& s : a.slopes) {
        int n = 0;
        for (int v : s.alpha) n += v;
        if (n == 1 && !s.vanishing) min_drop = std::min(min_drop, a.m - s.slope);
    }
    const Complex c(0.3, 0.1);
    const ClassFit b = fit_symbol_class(diag_symbol(64, [c](double, double m) { return 1.0 / (c - kI * m); }), fam, 2);
    const ClassFit p = fit_symbol_class(invert_symbol(ls).inverse, fam, 1);
    CriterionResult r;
    r.pass = std::abs(a.m - 2.0) <= 0.1 && std::abs(a.rho - 1.0) <= 0.15 && min_drop >= 0.85 && std::abs(b.m) <= 0.1 && std::abs(b.rho) <= 0.1 &&
             std::abs(p.m + 1.0) <= 0.1 && std::abs(p.rho - 0.5) <= 0.1;
    r.detail = "L_s m = " + fmt(a.m) + ", rho = " + fmt(a.rho) + ", smallest drop " + fmt(min_drop) + "; (D3+c)^{-1} m = " + fmt(b.m) + ", rho = " +
               fmt(b.rho) + "; L_s parametrix m = " + fmt(p.m) + ", rho = " + fmt(p.rho);
    return r;
}

// ---- 10: banding of the catalog ----
CriterionResult c10() {
    int ok = 0;
    std::string bad;
    for (const CatalogEntry& e : catalog()) {
        const DecayReport d = offdiag_decay_check(builtin(e.name, 32, {Complex(0.5, 0.25), 2}), 4);
        if (d.band == e.band && d.banded) ++ok;
        else bad += " " + e.name + "(" + std::to_string(d.band) + ")";
    }
    CriterionResult r;
    r.pass = ok == int(catalog().size());
    r.detail = std::to_string(ok) + "/" + std::to_string(catalog().size()) + " entries with the expected band" +
               (bad.empty() ? "" : ", off:" + bad);
    return r;
}

// ---- 11: admissibility ----
CriterionResult c11() {
    const AdmissibilityReport tri = admissibility_report(family("tri"));
    bool minus_e = false;
    for (const Quaternion& z : tri.common_zeros) minus_e = minus_e || group_distance(z, {-1, 0, 0, 0}) < 1e-6;
    const AdmissibilityReport q = admissibility_report(family("qij"));
    const torus::TorusAdmissibility t1 = torus::torus_admissibility(1), t2 = torus::torus_admissibility(2);
    CriterionResult r;
    r.pass = tri.admissible && !tri.strongly_admissible && minus_e && q.strongly_admissible &&
             t1.strongly_admissible && t2.strongly_admissible;
    r.detail = std::string("{q+,q-,q0}: ") + (tri.strongly_admissible ? "strong" : "not strong") +
               (minus_e ? ", zero at -e" : "") + "; {q_ij}: " + (q.strongly_admissible ? "strong" : "not strong") +
               "; torus: " + (t1.strongly_admissible && t2.strongly_admissible ? "strong" : "not strong");
    return r;
}

// ---- 12: torus backend ----
CriterionResult c12() {
    torus::TorusExpression e;
    e.terms[{1, 0}] = 1.0;
    e.terms[{0, 0}] = Complex(0.5, -1.0);
    const torus::TorusFit f = torus::torus_fit(torus::torus_symbol(e, 256), 3);
    const torus::TorusFit g =
        torus::torus_fit(torus::sample(1, 256, [](const torus::Index& xi) { return Complex(1.0 + double(xi[0] * xi[0])); }), 3);
    CriterionResult r;
    r.pass = std::abs(f.m - 1.0) <= 0.05 && std::abs(f.rho - 1.0) <= 0.05 && std::abs(g.m - 2.0) <= 0.05 &&
             std::abs(g.rho - 1.0) <= 0.1;
    r.detail = "d/dx + c: m = " + fmt(f.m) + ", rho = " + fmt(f.rho) + "; 1 + xi^2: m = " + fmt(g.m) + ", rho = " + fmt(g.rho);
    return r;
}

const char* const kNames[kCriteriaCount] = {
    "Fourier round trip and Parseval", "difference table", "finite Leibniz formula",
    "sub-Laplacian bound",             "D3 + c classification", "D'Alembertian",
    "null distributions",              "parametrix orders", "class fitter",
    "off-diagonal banding",            "admissibility", "torus backend",
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
    if (id < 1 || id > kCriteriaCount) throw std::invalid_argument("run_criterion: no such criterion");
    Rng rng(cfg.seed + std::uint64_t(id));
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = c1(rng); break;
            case 2: r = c2(); break;
            case 3: r = c3(rng); break;
            case 4: r = c4(); break;
            case 5: r = c5(rng); break;
            case 6: r = c6(); break;
            case 7: r = c7(rng); break;
            case 8: r = c8(rng); break;
            case 9: r = c9(); break;
            case 10: r = c10(); break;
            case 11: r = c11(); break;
            default: r = c12(); break;
        }
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    r.name = kNames[id - 1];
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteriaCount; ++id) out.push_back(run_criterion(id, cfg));
    return out;
}

}  // namespace su2pdo
