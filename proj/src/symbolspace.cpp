#include "su2pdo/symbolspace.hpp"

#include <cmath>

namespace su2pdo {

namespace {

bool is_constant(const Coefficients& c) { return c.twice_max() == 0; }

Coefficients coeff_product(const Coefficients& a, const Coefficients& b) {
    if (is_constant(a)) return a[0](0, 0) * b;
    if (is_constant(b)) return b[0](0, 0) * a;
    return product(a, b);
}

Coefficients truncated(const Coefficients& c, int twice_max) {
    Coefficients r(twice_max);
    for (int t = 0; t <= twice_max && t <= c.twice_max(); ++t) r[t] = c[t];
    return r;
}

}  // namespace

Symbol symbol_from_samples(const std::vector<Coefficients>& per_node, const QuadratureGrid& xg, double drop_tol) {
    const int T = per_node.front().twice_max(), TX = xg.twice_L;
    std::vector<Coefficients> bases;
    std::vector<std::array<int, 3>> labels;  // (t', r, s)
    for (int tp = 0; tp <= TX; ++tp)
        for (int r = 0; r <= tp; ++r)
            for (int s = 0; s <= tp; ++s) {
                bases.emplace_back(T);
                labels.push_back({tp, r, s});
            }
    GroupFunction f{xg, Vector(xg.size())};
    double scale = 0.0;
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a)
            for (int b = 0; b <= t; ++b) {
                for (int i = 0; i < xg.size(); ++i) f.samples(i) = per_node[i][t](a, b);
                scale = std::max(scale, f.samples.cwiseAbs().maxCoeff());
                const Coefficients c = forward(f, HalfInt(TX));
                for (std::size_t k = 0; k < labels.size(); ++k)
                    bases[k][t](a, b) = c[labels[k][0]](labels[k][1], labels[k][2]);
            }
    std::vector<SymbolTerm> terms;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        double mx = 0.0;
        for (int t = 0; t <= T; ++t) mx = std::max(mx, bases[k][t].cwiseAbs().maxCoeff());
        if (mx <= drop_tol * std::max(scale, 1.0)) continue;
        Coefficients coeff(labels[k][0]);
        coeff[labels[k][0]](labels[k][1], labels[k][2]) = 1.0;
        terms.push_back({coeff, bases[k]});
    }
    return simplify(Symbol::x_dependent(std::move(terms)));
}

Symbol Symbol::left_invariant(Coefficients blocks, int reliable_twice) {
    Symbol s;
    s.kind_ = Kind::LeftInvariant;
    s.twice_max_ = blocks.twice_max();
    s.reliable_ = reliable_twice < 0 ? s.twice_max_ : std::min(reliable_twice, s.twice_max_);
    s.terms_.push_back({constant_coefficients(1.0), std::move(blocks)});
    return s;
}

Symbol Symbol::x_dependent(std::vector<SymbolTerm> terms, int reliable_twice) {
    if (terms.empty()) throw std::invalid_argument("x_dependent symbol needs at least one term");
    Symbol s;
    s.kind_ = Kind::XDependent;
    s.twice_max_ = terms.front().base.twice_max();
    for (const auto& t : terms) s.twice_max_ = std::min(s.twice_max_, t.base.twice_max());
    s.reliable_ = reliable_twice < 0 ? s.twice_max_ : std::min(reliable_twice, s.twice_max_);
    s.terms_ = std::move(terms);
    return s;
}

const Coefficients& Symbol::blocks() const {
    if (!is_left_invariant()) throw std::logic_error("blocks() requires a left-invariant symbol");
    return terms_.front().base;
}

Symbol Symbol::with_reliable(int reliable_twice) const {
    Symbol s = *this;
    s.reliable_ = std::min(reliable_twice, twice_max_);
    return s;
}

int Symbol::coefficient_band() const {
    int b = 0;
    for (const auto& t : terms_) b = std::max(b, t.coeff.twice_max());
    return b;
}

Matrix Symbol::at(const Quaternion& x, int twice_ell) const {
    Matrix m = Matrix::Zero(twice_ell + 1, twice_ell + 1);
    for (const auto& t : terms_) {
        const Complex f = is_constant(t.coeff) ? t.coeff[0](0, 0) : evaluate(t.coeff, x);
        m += f * t.base[twice_ell];
    }
    return m;
}

double Symbol::sup_norm(int twice_ell, const std::vector<Quaternion>& xs) const {
    if (is_left_invariant()) return op_norm(blocks()[twice_ell]);
    double s = 0.0;
    for (const auto& x : xs) s = std::max(s, op_norm(at(x, twice_ell)));
    return s;
}

Symbol identity_symbol(int twice_max) { return Symbol::left_invariant(Coefficients::identity(twice_max)); }

Symbol scale(const Symbol& s, Complex c) {
    std::vector<SymbolTerm> terms = s.terms();
    for (auto& t : terms) t.base = c * t.base;
    if (s.is_left_invariant()) return Symbol::left_invariant(terms.front().base, s.reliable_twice());
    return Symbol::x_dependent(std::move(terms), s.reliable_twice());
}

Symbol add(const Symbol& a, const Symbol& b) {
    const int T = std::min(a.twice_max(), b.twice_max());
    const int rel = std::min(a.reliable_twice(), b.reliable_twice());
    if (a.is_left_invariant() && b.is_left_invariant())
        return Symbol::left_invariant(truncated(a.blocks() + b.blocks(), T), rel);
    std::vector<SymbolTerm> terms;
    for (const auto* s : {&a, &b})
        for (const auto& t : s->terms()) terms.push_back({t.coeff, truncated(t.base, T)});
    return simplify(Symbol::x_dependent(std::move(terms), rel));
}

Symbol multiply(const Symbol& a, const Symbol& b) {
    const int rel = std::min(a.reliable_twice(), b.reliable_twice());
    if (a.is_left_invariant() && b.is_left_invariant())
        return Symbol::left_invariant(blockwise_product(a.blocks(), b.blocks()), rel);
    std::vector<SymbolTerm> terms;
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms())
            terms.push_back({coeff_product(ta.coeff, tb.coeff), blockwise_product(ta.base, tb.base)});
    return simplify(Symbol::x_dependent(std::move(terms), rel));
}

Symbol simplify(const Symbol& s, double tol) {
    if (s.is_left_invariant()) return s;
    const int T = s.twice_max();
    Coefficients constant_part(T);
    bool has_constant = false;
    std::vector<SymbolTerm> rest;
    for (const auto& t : s.terms()) {
        double mx = 0.0;
        for (int k = 0; k <= T; ++k) mx = std::max(mx, t.base[k].cwiseAbs().maxCoeff());
        if (mx <= tol) continue;
        if (is_constant(t.coeff)) {
            constant_part = constant_part + t.coeff[0](0, 0) * truncated(t.base, T);
            has_constant = true;
        } else {
            rest.push_back({t.coeff, truncated(t.base, T)});
        }
    }
    if (rest.empty()) return Symbol::left_invariant(constant_part, s.reliable_twice());
    if (has_constant) rest.insert(rest.begin(), {constant_coefficients(1.0), constant_part});
    return Symbol::x_dependent(std::move(rest), s.reliable_twice());
}

Symbol times_function(const Coefficients& a, const Coefficients& base) {
    return Symbol::x_dependent({{a, base}});
}

std::vector<std::pair<Coefficients, Coefficients>> quantize_terms(const Symbol& sigma, const Coefficients& f) {
    const int T = f.twice_max();
    if (sigma.twice_max() < T) throw std::invalid_argument("quantize: symbol band limit below the data band limit");
    std::vector<std::pair<Coefficients, Coefficients>> out;
    for (const auto& t : sigma.terms()) {
        Coefficients g(T);
        for (int k = 0; k <= T; ++k) g[k].noalias() = t.base[k] * f[k];
        out.emplace_back(t.coeff, std::move(g));
    }
    return out;
}

GroupFunction quantize(const Symbol& sigma, const Coefficients& f, const QuadratureGrid& grid) {
    GroupFunction out{grid, Vector::Zero(grid.size())};
    for (const auto& [c, g] : quantize_terms(sigma, f)) {
        const Vector gs = inverse(g, grid).samples;
        if (is_constant(c))
            out.samples += c[0](0, 0) * gs;
        else
            out.samples += inverse(c, grid).samples.cwiseProduct(gs);
    }
    return out;
}

Symbol symbol_of(const GroupOperator& a, HalfInt L, const QuadratureGrid& grid, double variance_tol) {
    const int T = L.twice, n = grid.size();
    std::vector<Coefficients> per_node(n, Coefficients(T));
    GroupFunction entry{grid, Vector(n)};
    for (int t = 0; t <= T; ++t) {
        std::vector<Matrix> tx(n);
        for (int i = 0; i < n; ++i) tx[i] = wigner(HalfInt(t), grid.node(i));
        std::vector<Matrix> image(n, Matrix(t + 1, t + 1));
        for (int p = 0; p <= t; ++p)
            for (int q = 0; q <= t; ++q) {
                for (int i = 0; i < n; ++i) entry.samples(i) = tx[i](p, q);
                const GroupFunction r = a(entry);
                for (int i = 0; i < n; ++i) image[i](p, q) = r.samples(i);
            }
        for (int i = 0; i < n; ++i) per_node[i][t] = tx[i].adjoint() * image[i];
    }
    // weighted mean and variance across x
    Coefficients mean(T);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t <= T; ++t) mean[t] += grid.weight(i) * per_node[i][t];
    double var = 0.0;
    for (int t = 0; t <= T; ++t) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(t + 1, t + 1);
        for (int i = 0; i < n; ++i) v += grid.weight(i) * (per_node[i][t] - mean[t]).cwiseAbs2();
        var = std::max(var, v.maxCoeff());
    }
    if (var <= variance_tol) return Symbol::left_invariant(mean);
    return symbol_from_samples(per_node, grid, 1e-12);
}

KernelField kernel_of(const Symbol& sigma, const QuadratureGrid& y_grid, const std::optional<QuadratureGrid>& x_grid) {
    KernelField k{y_grid, std::nullopt, Matrix(), false};
    if (sigma.is_left_invariant()) {
        k.samples = inverse(sigma.blocks(), y_grid).samples.transpose();
        return k;
    }
    if (!x_grid) throw std::invalid_argument("kernel_of: x-dependent symbol needs an x grid");
    k.x_grid = x_grid;
    k.samples = Matrix::Zero(x_grid->size(), y_grid.size());
    for (const auto& t : sigma.terms()) {
        const Vector fx = inverse(t.coeff, *x_grid).samples;
        const Vector ry = inverse(t.base, y_grid).samples;
        k.samples += fx * ry.transpose();
    }
    return k;
}

Symbol symbol_from_kernel(KernelField& k, HalfInt L) {
    const int T = std::min(L.twice, k.y_grid.twice_L);
    GroupFunction row{k.y_grid, Vector(k.y_grid.size())};
    std::vector<Coefficients> per_node;
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < k.samples.rows(); ++i) {
        row.samples = k.samples.row(i).transpose();
        per_node.push_back(forward(row, HalfInt(T)));
        const Vector back = inverse(per_node.back(), k.y_grid).samples;
        err = std::max(err, (back - row.samples).cwiseAbs().maxCoeff());
        scale = std::max(scale, row.samples.cwiseAbs().maxCoeff());
    }
    k.truncated = err > 1e-9 * std::max(scale, 1.0);
    if (!k.x_grid) return Symbol::left_invariant(per_node.front());
    return symbol_from_samples(per_node, *k.x_grid, 1e-12);
}

Symbol conjugate(const Symbol& sigma, const Quaternion& u) {
    const EulerAngles e = to_euler(u);
    std::vector<SymbolTerm> terms;
    for (const auto& t : sigma.terms()) {
        SymbolTerm r{right_translate(t.coeff, u), t.base};
        for (int k = 0; k <= r.base.twice_max(); ++k) {
            const Matrix w = wigner(HalfInt(k), e);
            r.base[k] = w.adjoint() * t.base[k] * w;
        }
        terms.push_back(std::move(r));
    }
    if (sigma.is_left_invariant()) return Symbol::left_invariant(terms.front().base, sigma.reliable_twice());
    return Symbol::x_dependent(std::move(terms), sigma.reliable_twice());
}

double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.isDiagonal(0.0)) return m.diagonal().cwiseAbs().maxCoeff();
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double hs_norm(const Matrix& m) { return m.norm(); }

double min_singular_value(const Matrix& m) {
    if (m.isDiagonal(0.0)) return m.diagonal().cwiseAbs().minCoeff();
    const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    return s(s.size() - 1);
}

}  // namespace su2pdo
