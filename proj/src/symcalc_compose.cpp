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

// z -> g(x z^{-1}) as a polynomial in the entries of z
EntryPolynomial translated_inverse(const Coefficients& g, const Quaternion& x) {
    EntryPolynomial p;
    for (int T = 0; T <= g.twice_max(); ++T) {
        const Matrix w = double(T + 1) * g[T] * wigner(HalfInt(T), x);
        for (int i = 0; i <= T; ++i)
            for (int j = 0; j <= T; ++j) {
                if (w(i, j) == 0.0) continue;
                EntryPolynomial e = conjugate_entries(wigner_polynomial(T, 2 * i - T, 2 * j - T));
                e *= w(i, j);
                p += e;
            }
    }
    p.prune();
    return p;
}

Symbol zero_like(const Symbol& s) { return Symbol::left_invariant(Coefficients(s.twice_max()), s.reliable_twice()); }

}  // namespace

Symbol compose_exact(const Symbol& a, const Symbol& b) {
    if (!a.is_left_invariant() || !b.is_left_invariant())
        throw std::invalid_argument("compose_exact: x-dependent symbol, use compose_asymptotic");
    return multiply(a, b);
}

Matrix compose_exact_at(const Symbol& a, const Symbol& b, const Quaternion& x, int twice_ell) {
    Matrix r = Matrix::Zero(twice_ell + 1, twice_ell + 1);
    for (const auto& tb : b.terms()) {
        DifferenceOp d;
        d.name = "translate";
        d.q = translated_inverse(tb.coeff, x);
        d.order = 1;
        if (d.q.terms.empty()) continue;
        for (const auto& ta : a.terms()) {
            const Complex f = is_constant(ta.coeff) ? ta.coeff[0](0, 0) : evaluate(ta.coeff, x);
            if (f == 0.0) continue;
            const Coefficients da = apply_blocks(d, ta.base, twice_ell);
            r += f * da[twice_ell] * tb.base[twice_ell];
        }
    }
    return r;
}

Symbol compose_differential(const DifferentialExpression& a, const Symbol& b) {
    const int T = b.twice_max();
    std::vector<SymbolTerm> out;
    for (const auto& [w, c] : a.terms) {
        const int n = int(w.size());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            Word on_t, on_b;  // letters hitting t(x) and sigma_B
            for (int k = 0; k < n; ++k) ((mask >> k) & 1u ? on_b : on_t).push_back(w[k]);
            for (const auto& tb : b.terms()) {
                const Coefficients g = word_derivative(tb.coeff, on_b);
                if (is_zero(g)) continue;
                Coefficients base(T);
                for (int t = 0; t <= T; ++t) base[t] = word_rep(t, on_t) * tb.base[t];
                out.push_back({times(c, g), std::move(base)});
            }
        }
    }
    if (out.empty()) return zero_like(b);
    return simplify(Symbol::x_dependent(std::move(out), b.reliable_twice()));
}

Symbol frame_derivative(const TaylorFrame& frame, const MultiIndex& alpha, const Symbol& s, FrameDerivative mode) {
    const int k = frame.index_of(alpha);
    if (k < 0) throw std::invalid_argument("frame_derivative: multi-index outside the frame");
    std::vector<SymbolTerm> out;
    for (const auto& t : s.terms()) {
        Coefficients acc(t.coeff.twice_max());
        bool any = false;
        for (std::size_t wi = 0; wi < frame.words.size(); ++wi) {
            const Complex c = frame.coeff(k, wi);
            if (c == 0.0) continue;
            Word w = frame.words[wi];
            double sign = 1.0;
            if (mode == FrameDerivative::kAntipode) {
                std::reverse(w.begin(), w.end());
                if (w.size() % 2) sign = -1.0;
            }
            acc = acc + (sign * c) * word_derivative(t.coeff, w);
            any = true;
        }
        if (any && !is_zero(acc)) out.push_back({std::move(acc), t.base});
    }
    if (out.empty()) return zero_like(s);
    return simplify(Symbol::x_dependent(std::move(out), s.reliable_twice()));
}

Symbol multi_difference(const TaylorFrame& frame, const MultiIndex& alpha, const Symbol& s) {
    Symbol r = s;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int n = 0; n < alpha[j]; ++n) r = apply(frame.family[j], r);
    return r;
}

Symbol compose_asymptotic(const Symbol& a, const Symbol& b, int N, const TaylorFrame& frame, FrameDerivative mode) {
    if (N > frame.order) throw std::invalid_argument("compose_asymptotic: frame order below N");
    std::optional<Symbol> sum;
    for (const MultiIndex& alpha : frame.multi_indices) {
        int size = 0;
        for (int v : alpha) size += v;
        if (size >= N) continue;
        const Symbol d = frame_derivative(frame, alpha, b, mode);
        if (size > 0 && d.is_left_invariant()) continue;  // vanished
        const Symbol term = scale(multiply(multi_difference(frame, alpha, a), d), 1.0 / factorial_of(alpha));
        sum = sum ? add(*sum, term) : term;
    }
    if (!sum) throw std::invalid_argument("compose_asymptotic: N must be at least 1");
    return *sum;
}

double commutator_identity_gap(const Eigen::Matrix2cd& x_field, const Symbol& a, const Quaternion& x,
                               int twice_ell_max) {
    const int T = a.twice_max();
    Coefficients ax(T);
    for (int t = 0; t <= T; ++t) ax[t] = a.at(x, t);
    const Symbol sa = Symbol::left_invariant(ax);

    // Ad(y)X - X entrywise, as polynomials in the entries of y
    EntryPolynomial ad[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    if (x_field(c, d) == 0.0) continue;
                    EntryPolynomial e = EntryPolynomial::entry(i, c) * conjugate_entries(EntryPolynomial::entry(j, d));
                    e *= x_field(c, d);
                    ad[i][j] += e;
                }
            ad[i][j] += EntryPolynomial::constant(-x_field(i, j));
            ad[i][j].prune();
        }
    EntryPolynomial q[3];
    q[kPlus] = EntryPolynomial::constant(0.0) - ad[0][1];
    q[kMinus] = EntryPolynomial::constant(0.0) - ad[1][0];
    q[kZero] = ad[1][1] - ad[0][0];

    Symbol rhs = scale(sa, 0.0);
    bool first = true;
    for (int j = 0; j < 3; ++j) {
        q[j].prune();
        if (q[j].terms.empty()) continue;
        DifferenceOp d;
        d.name = "ad";
        d.q = q[j];
        d.order = 1;
        Coefficients dj(T);
        for (int t = 0; t <= T; ++t) dj[t] = algebra_rep(t, algebra_letter(j));
        const Symbol term = apply(d, multiply(sa, Symbol::left_invariant(dj)));
        rhs = first ? term : add(rhs, term);
        first = false;
    }
    double gap = 0.0;
    const int top = std::min(twice_ell_max, rhs.reliable_twice());
    for (int t = 0; t <= top; ++t) {
        const Matrix x_rep = algebra_rep(t, x_field);
        const Matrix lhs = x_rep * ax[t] - ax[t] * x_rep;
        const Matrix r = first ? Matrix::Zero(t + 1, t + 1) : rhs.blocks()[t];
        gap = std::max(gap, (lhs - r).cwiseAbs().maxCoeff());
    }
    return gap;
}

}  // namespace su2pdo
