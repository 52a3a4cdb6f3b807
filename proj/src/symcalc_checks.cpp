#include <limits>
#include <stdexcept>

#include "su2pdo/symcalc.hpp"

namespace su2pdo {

namespace {

constexpr double kVanishing = 1e-12;

std::vector<Quaternion> probe_points(const Symbol& a, const std::vector<Quaternion>& xs) {
    if (a.is_left_invariant()) return {identity_element()};
    if (!xs.empty()) return xs;
    // fixed spread of points, away from the Euler chart singularities
    std::vector<Quaternion> out;
    for (int k = 0; k < 6; ++k) out.push_back(from_euler({0.7 + 0.9 * k, 0.3 + 0.45 * k, -1.1 + 1.3 * k}));
    return out;
}

Matrix inverse_of(const Matrix& m) {
    if (m.isDiagonal(0.0)) {
        Matrix r = Matrix::Zero(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i) r(i, i) = 1.0 / m(i, i);
        return r;
    }
    return m.partialPivLu().inverse();
}

bool singular_block(const Matrix& m, int t, double threshold, double m0) {
    return min_singular_value(m) <= threshold * std::pow(japanese(t), m0);
}

std::vector<MultiIndex> nonzero_indices(int size, int depth) {
    std::vector<MultiIndex> out;
    for (const MultiIndex& a : multi_indices_upto(size, depth)) {
        int n = 0;
        for (int v : a) n += v;
        if (n > 0) out.push_back(a);
    }
    return out;
}

std::vector<Word> words_upto(int depth) {
    std::vector<Word> out;
    std::vector<Word> layer{Word{}};
    for (int n = 1; n <= depth; ++n) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (int l = 0; l < 3; ++l) {
                Word v = w;
                v.push_back(l);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

Symbol apply_alpha(const std::vector<DifferenceOp>& family, const MultiIndex& alpha, const Symbol& s) {
    Symbol r = s;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int n = 0; n < alpha[j]; ++n) r = apply(family[j], r);
    return r;
}

int size_of(const MultiIndex& a) {
    int n = 0;
    for (int v : a) n += v;
    return n;
}

}  // namespace

Inversion invert_symbol(const Symbol& a, double threshold, double m0, int x_twice) {
    Inversion out;
    const int T = a.twice_max();
    if (a.is_left_invariant()) {
        Coefficients inv(T);
        for (int t = 0; t <= T; ++t) {
            if (singular_block(a.blocks()[t], t, threshold, m0))
                out.singular_twice.push_back(t);
            else
                inv[t] = inverse_of(a.blocks()[t]);
        }
        out.inverse = Symbol::left_invariant(inv, a.reliable_twice());
        return out;
    }
    const QuadratureGrid g = build_grid(HalfInt(x_twice));
    std::vector<Coefficients> per_node(g.size(), Coefficients(T));
    std::vector<bool> singular(T + 1, false);
    for (int i = 0; i < g.size(); ++i) {
        const Quaternion x = g.point(i);
        for (int t = 0; t <= T; ++t) {
            const Matrix m = a.at(x, t);
            if (singular_block(m, t, threshold, m0))
                singular[t] = true;
            else
                per_node[i][t] = inverse_of(m);
        }
    }
    for (int t = 0; t <= T; ++t)
        if (singular[t]) {
            out.singular_twice.push_back(t);
            for (auto& c : per_node) c[t].setZero();
        }
    out.inverse = symbol_from_samples(per_node, g).with_reliable(a.reliable_twice());
    return out;
}

Inversion parametrix_left_invariant(const Symbol& a, double m0) {
    if (!a.is_left_invariant()) throw std::invalid_argument("parametrix_left_invariant: x-dependent symbol");
    return invert_symbol(a, 1e-8, m0);
}

FitWindow fit_window(int reliable_twice, int lowest) {
    FitWindow w;
    w.hi = reliable_twice;
    w.lo = std::max(lowest, reliable_twice / 4);
    if (w.hi - w.lo < 4) throw std::invalid_argument("fit_window: too few edge-safe blocks");
    return w;
}

PowerFit fit_power(const std::vector<int>& twice, const std::vector<double>& values, double scale) {
    std::vector<double> w;
    for (int t : twice) w.push_back(japanese(t));
    return fit_loglog(w, values, scale);
}

PowerFit fit_loglog(const std::vector<double>& weights, const std::vector<double>& values, double scale) {
    PowerFit f;
    std::vector<double> xs, ys;
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, v);
    if (mx <= kVanishing * std::max(scale, 1e-300)) {
        f.vanishing = true;
        return f;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > kVanishing * std::max(scale, mx)) {
            xs.push_back(std::log(weights[i]));
            ys.push_back(std::log(values[i]));
        }
    if (xs.size() < 2) {
        f.vanishing = true;
        return f;
    }
    Eigen::MatrixXd A(xs.size(), 2);
    Eigen::VectorXd b(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        A(i, 0) = xs[i];
        A(i, 1) = 1.0;
        b(i) = ys[i];
    }
    const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
    f.slope = sol(0);
    f.intercept = sol(1);
    f.residual = std::sqrt((A * sol - b).squaredNorm() / double(xs.size()));
    return f;
}

EllipticityReport ellipticity_check(const Symbol& a, double m, const std::vector<Quaternion>& xs) {
    EllipticityReport r;
    const auto pts = probe_points(a, xs);
    const FitWindow w = fit_window(a.reliable_twice());
    std::vector<int> ts;
    std::vector<double> inv_norm;
    bool persistent = false;
    for (int t = 0; t <= a.reliable_twice(); ++t) {
        double worst = 0.0;
        bool sing = false;
        for (const auto& x : pts) {
            const double s = min_singular_value(a.at(x, t));
            if (s <= 1e-8 * std::pow(japanese(t), m)) sing = true;
            else worst = std::max(worst, 1.0 / s);
        }
        if (sing) {
            r.singular_twice.push_back(t);
            if (t >= w.lo) persistent = true;
            continue;
        }
        if (t >= w.lo) {
            ts.push_back(t);
            inv_norm.push_back(worst);
            r.constant = std::max(r.constant, worst * std::pow(japanese(t), m));
        }
    }
    if (persistent || ts.size() < 2) return r;
    const PowerFit f = fit_power(ts, inv_norm);
    r.fitted_order = -f.slope;
    r.elliptic = r.fitted_order >= m - 0.15;
    return r;
}

HypoReport hypoellipticity_check(const Symbol& a, double m, double m0, double rho, double delta,
                                 const std::vector<DifferenceOp>& family, int depth, double tol,
                                 const std::vector<Quaternion>& xs) {
    if (!(1.0 >= rho && rho > delta && delta >= 0.0)) throw std::invalid_argument("hypoellipticity_check: need 1 >= rho > delta >= 0");
    if (m < m0) throw std::invalid_argument("hypoellipticity_check: need m >= m0");
    HypoReport rep;
    const auto pts = probe_points(a, xs);

    int width = 0;
    for (const auto& d : family) width = std::max(width, d.width());
    const int edge = a.reliable_twice() - depth * width;
    const FitWindow w = fit_window(edge);

    // inverse at every probe point and block up to the edge
    std::vector<std::vector<Matrix>> inv(pts.size(), std::vector<Matrix>(edge + 1));
    std::vector<bool> singular(edge + 1, false);
    for (int t = 0; t <= edge; ++t)
        for (std::size_t p = 0; p < pts.size(); ++p) {
            const Matrix s = a.at(pts[p], t);
            if (singular_block(s, t, 1e-8, m0)) singular[t] = true;
            else inv[p][t] = inverse_of(s);
        }
    bool persistent = false;
    for (int t = 0; t <= edge; ++t)
        if (singular[t]) {
            rep.singular_twice.push_back(t);
            rep.invertible_from = HalfInt(t + 1);
            if (t >= w.lo) persistent = true;
        }
    if (persistent) {
        rep.reason = "singular blocks persist into the fit window";
        return rep;
    }
    std::vector<int> ts;
    for (int t = w.lo; t <= w.hi; ++t) ts.push_back(t);

    auto ratio_norms = [&](const Symbol& s) {
        std::vector<double> v;
        for (int t : ts) {
            double worst = 0.0;
            for (std::size_t p = 0; p < pts.size(); ++p) worst = std::max(worst, op_norm(inv[p][t] * s.at(pts[p], t)));
            v.push_back(worst);
        }
        return v;
    };

    std::vector<double> inv_norm, sym_norm;
    for (int t : ts) {
        double vi = 0.0, vs = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            vi = std::max(vi, op_norm(inv[p][t]));
            vs = std::max(vs, op_norm(a.at(pts[p], t)));
        }
        inv_norm.push_back(vi);
        sym_norm.push_back(vs);
    }
    rep.m0_fit = -fit_power(ts, inv_norm).slope;
    bool ok = rep.m0_fit >= m0 - tol;
    if (!ok) rep.reason = "inverse decays slower than <ell>^{-m0}";
    if (fit_power(ts, sym_norm).slope > m + tol) {
        ok = false;
        rep.reason = "symbol grows faster than <ell>^m";
    }

    std::vector<std::pair<MultiIndex, Word>> combos;
    for (const MultiIndex& al : multi_indices_upto(int(family.size()), depth))
        for (const Word& be : words_upto(a.is_left_invariant() ? 0 : depth)) {
            const int n = size_of(al) + int(be.size());
            if (n >= 1 && n <= depth) combos.push_back({al, be});
        }
    for (const auto& [al, be] : combos) {
        HypoRatio h;
        h.alpha = al;
        h.beta = be;
        h.bound_exponent = -rho * size_of(al) + delta * double(be.size());
        const Symbol d = apply_alpha(family, al, x_derivative(a, be));
        const std::vector<double> v = ratio_norms(d);
        const PowerFit f = fit_power(ts, v, 1.0);
        h.fitted_exponent = f.vanishing ? -std::numeric_limits<double>::infinity() : f.slope;
        for (std::size_t i = 0; i < ts.size(); ++i)
            h.constant = std::max(h.constant, v[i] * std::pow(japanese(ts[i]), -h.bound_exponent));
        h.ok = f.vanishing || f.slope <= h.bound_exponent + tol;
        if (!h.ok && rep.reason.empty()) rep.reason = "ratio bound fails";
        ok = ok && h.ok;
        rep.ratios.push_back(std::move(h));
    }
    rep.verdict = ok;
    return rep;
}

ClassFit fit_symbol_class(const Symbol& a, const std::vector<DifferenceOp>& family, int alpha_depth, int beta_depth,
                          const std::vector<Quaternion>& xs) {
    ClassFit cf;
    const auto pts = probe_points(a, xs);
    int width = 0;
    for (const auto& d : family) width = std::max(width, d.width());
    cf.window = fit_window(a.reliable_twice() - alpha_depth * width);
    std::vector<int> ts;
    for (int t = cf.window.lo; t <= cf.window.hi; ++t) ts.push_back(t);

    auto norms = [&](const Symbol& s) {
        std::vector<double> v;
        for (int t : ts) v.push_back(s.is_left_invariant() ? op_norm(s.blocks()[t]) : s.sup_norm(t, pts));
        return v;
    };
    const std::vector<double> base = norms(a);
    double scale = 0.0;
    for (double v : base) scale = std::max(scale, v);
    const PowerFit f0 = fit_power(ts, base, scale);
    cf.m = f0.slope;
    cf.slopes.push_back({MultiIndex(family.size(), 0), Word{}, f0.slope, f0.residual, f0.vanishing});

    double rho = 1.0;
    for (const MultiIndex& al : nonzero_indices(int(family.size()), alpha_depth)) {
        const PowerFit f = fit_power(ts, norms(apply_alpha(family, al, a)), scale);
        cf.slopes.push_back({al, Word{}, f.slope, f.residual, f.vanishing});
        if (!f.vanishing) rho = std::min(rho, (cf.m - f.slope) / size_of(al));
    }
    double delta = 0.0;
    if (!a.is_left_invariant())
        for (const Word& be : words_upto(beta_depth)) {
            const PowerFit f = fit_power(ts, norms(x_derivative(a, be)), scale);
            cf.slopes.push_back({MultiIndex(family.size(), 0), be, f.slope, f.residual, f.vanishing});
            if (!f.vanishing) delta = std::max(delta, (f.slope - cf.m) / double(be.size()));
        }
    cf.rho = rho;
    cf.delta = delta;
    return cf;
}

DecayReport offdiag_decay_check(const Symbol& a, int N, double tol) {
    if (!a.is_left_invariant()) throw std::invalid_argument("offdiag_decay_check: left-invariant symbols only");
    DecayReport r;
    const int T = a.reliable_twice();
    const FitWindow w = fit_window(T);
    std::vector<int> ts;
    std::vector<double> norms;
    int band_low = -1, band_high = -1;
    r.band = -1;
    for (int t = 0; t <= T; ++t) {
        const Matrix& m = a.blocks()[t];
        const double mx = m.cwiseAbs().maxCoeff();
        int band = -1;
        for (int i = 0; i <= t; ++i)
            for (int j = 0; j <= t; ++j)
                if (std::abs(m(i, j)) > tol * std::max(mx, 1.0)) band = std::max(band, std::abs(i - j));
        r.band = std::max(r.band, band);
        if (t >= w.lo && t < (w.lo + w.hi) / 2) band_low = std::max(band_low, band);
        if (t >= (w.lo + w.hi) / 2) band_high = std::max(band_high, band);
        if (t >= w.lo) {
            ts.push_back(t);
            norms.push_back(op_norm(m));
        }
    }
    r.banded = band_high <= band_low && band_high < (w.lo + w.hi) / 2;
    const PowerFit f = fit_power(ts, norms);
    r.fitted_order = f.vanishing ? 0.0 : f.slope;
    std::vector<double> weighted;
    for (int t : ts) {
        const Matrix& m = a.blocks()[t];
        double s = 0.0;
        for (int i = 0; i <= t; ++i)
            for (int j = 0; j <= t; ++j) s = std::max(s, std::pow(1.0 + std::abs(i - j), N) * std::abs(m(i, j)));
        s /= std::pow(japanese(t), r.fitted_order);
        weighted.push_back(s);
        r.decay_constant = std::max(r.decay_constant, s);
    }
    const PowerFit g = fit_power(ts, weighted);
    r.decays = g.vanishing || g.slope <= 0.15;
    return r;
}

}  // namespace su2pdo
