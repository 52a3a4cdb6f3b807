#include <stdexcept>

#include "su2pdo/symcalc.hpp"

namespace su2pdo {

namespace {

bool is_constant(const Coefficients& c) { return c.twice_max() == 0; }

bool is_zero(const Coefficients& c) {
    for (int t = 0; t <= c.twice_max(); ++t)
        if (c[t].cwiseAbs().maxCoeff() > 0.0) return false;
    return true;
}

Coefficients times(const Coefficients& a, const Coefficients& b) {
    if (is_constant(a)) return a[0](0, 0) * b;
    if (is_constant(b)) return b[0](0, 0) * a;
    return product(a, b);
}

Coefficients plus(const Coefficients& a, const Coefficients& b) {
    const int T = std::max(a.twice_max(), b.twice_max());
    Coefficients r(T);
    for (int t = 0; t <= a.twice_max(); ++t) r[t] += a[t];
    for (int t = 0; t <= b.twice_max(); ++t) r[t] += b[t];
    return r;
}

void accumulate(DifferentialExpression& e, const Word& w, const Coefficients& c) {
    auto it = e.terms.find(w);
    if (it == e.terms.end())
        e.terms.emplace(w, c);
    else
        it->second = plus(it->second, c);
}

void prune(DifferentialExpression& e) {
    for (auto it = e.terms.begin(); it != e.terms.end();)
        it = is_zero(it->second) ? e.terms.erase(it) : std::next(it);
}

}  // namespace

int DifferentialExpression::order() const {
    int o = 0;
    for (const auto& [w, c] : terms) o = std::max(o, int(w.size()));
    return o;
}

bool DifferentialExpression::is_left_invariant() const {
    for (const auto& [w, c] : terms)
        if (!is_constant(c)) return false;
    return true;
}

Symbol DifferentialExpression::symbol(int twice_max) const {
    std::vector<SymbolTerm> out;
    for (const auto& [w, c] : terms) {
        Coefficients base(twice_max);
        for (int t = 0; t <= twice_max; ++t) base[t] = word_rep(t, w);
        out.push_back({c, std::move(base)});
    }
    if (out.empty()) return Symbol::left_invariant(Coefficients(twice_max));
    return simplify(Symbol::x_dependent(std::move(out)));
}

Coefficients DifferentialExpression::apply(const Coefficients& f) const {
    Coefficients r(f.twice_max());
    for (const auto& [w, c] : terms) r = plus(r, times(c, word_derivative(f, w)));
    return r;
}

DifferentialExpression constant_expression(Complex c) {
    DifferentialExpression e;
    e.terms.emplace(Word{}, constant_coefficients(c));
    return e;
}

DifferentialExpression vector_field(const Eigen::Matrix2cd& x) {
    if (std::abs(x.trace()) > 1e-14) throw std::invalid_argument("vector_field: matrix is not traceless");
    DifferentialExpression e;
    e.terms.emplace(Word{kPlus}, constant_coefficients(-x(0, 1)));
    e.terms.emplace(Word{kMinus}, constant_coefficients(-x(1, 0)));
    e.terms.emplace(Word{kZero}, constant_coefficients(x(1, 1) - x(0, 0)));
    prune(e);
    return e;
}

DifferentialExpression operator+(const DifferentialExpression& a, const DifferentialExpression& b) {
    DifferentialExpression r = a;
    for (const auto& [w, c] : b.terms) accumulate(r, w, c);
    prune(r);
    return r;
}

DifferentialExpression operator*(Complex s, const DifferentialExpression& a) {
    DifferentialExpression r;
    for (const auto& [w, c] : a.terms) r.terms.emplace(w, s * c);
    prune(r);
    return r;
}

DifferentialExpression operator-(const DifferentialExpression& a, const DifferentialExpression& b) {
    return a + Complex(-1.0) * b;
}

DifferentialExpression operator*(const Coefficients& f, const DifferentialExpression& a) {
    DifferentialExpression r;
    for (const auto& [w, c] : a.terms) r.terms.emplace(w, times(f, c));
    prune(r);
    return r;
}

DifferentialExpression operator*(const DifferentialExpression& a, const DifferentialExpression& b) {
    DifferentialExpression r;
    for (const auto& [u, p] : a.terms) {
        const int n = int(u.size());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            // letters in mask differentiate the coefficient of b, the rest stay as operators
            Word on_coeff, on_op;
            for (int k = 0; k < n; ++k) ((mask >> k) & 1u ? on_coeff : on_op).push_back(u[k]);
            for (const auto& [w, q] : b.terms) {
                const Coefficients dq = word_derivative(q, on_coeff);
                if (is_zero(dq)) continue;
                Word full = on_op;
                full.insert(full.end(), w.begin(), w.end());
                accumulate(r, full, times(p, dq));
            }
        }
    }
    prune(r);
    return r;
}

Coefficients word_derivative(const Coefficients& c, const Word& w) {
    if (w.empty()) return c;
    Coefficients r = c;
    for (int t = 0; t <= c.twice_max(); ++t) r[t] = word_rep(t, w) * c[t];
    return r;
}

Symbol x_derivative(const Symbol& s, const Word& w) {
    if (w.empty()) return s;
    std::vector<SymbolTerm> terms;
    for (const auto& t : s.terms()) {
        if (is_constant(t.coeff)) continue;
        Coefficients d = word_derivative(t.coeff, w);
        if (!is_zero(d)) terms.push_back({std::move(d), t.base});
    }
    if (terms.empty()) return Symbol::left_invariant(Coefficients(s.twice_max()), s.reliable_twice());
    return Symbol::x_dependent(std::move(terms), s.reliable_twice());
}

}  // namespace su2pdo
