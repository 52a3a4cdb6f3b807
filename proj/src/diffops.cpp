#include "su2pdo/diffops.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace su2pdo {

namespace {

using Exponents = EntryPolynomial::Exponents;

// chain of entry multiplications for every monomial, memoised on exponents
class MonomialChain {
public:
    MonomialChain(Coefficients seed, int out_twice_max, bool grow)
        : out_(out_twice_max), grow_(grow) {
        cache_.emplace(Exponents{0, 0, 0, 0}, std::move(seed));
    }

    const Coefficients& get(const Exponents& e) {
        auto it = cache_.find(e);
        if (it != cache_.end()) return it->second;
        int k = 0;
        while (e[k] == 0) ++k;
        Exponents prev = e;
        --prev[k];
        const Coefficients& base = get(prev);
        const int out = grow_ ? base.twice_max() + 1 : out_;
        return cache_.emplace(e, multiply_by_entry(base, k / 2, k % 2, out)).first->second;
    }

private:
    int out_;
    bool grow_;
    std::map<Exponents, Coefficients> cache_;
};

Coefficients padded(const Coefficients& c, int twice_max) {
    Coefficients r(twice_max);
    for (int t = 0; t <= std::min(twice_max, c.twice_max()); ++t) r[t] = c[t];
    return r;
}

int detect_order(const Coefficients& qc, bool& zero) {
    zero = false;
    if (std::abs(derivative_at_identity(qc, {})) > 1e-9) return 0;
    for (int len = 1; len <= kOrderProbeDepth; ++len) {
        std::vector<int> w(len, 0);
        while (true) {
            if (std::abs(derivative_at_identity(qc, w)) > 1e-9) return len;
            int p = 0;
            while (p < len && w[p] == 2) w[p++] = 0;
            if (p == len) break;
            ++w[p];
        }
    }
    double mx = 0;
    for (int t = 0; t <= qc.twice_max(); ++t) mx = std::max(mx, qc[t].cwiseAbs().maxCoeff());
    zero = mx <= 1e-14;
    return kOrderProbeDepth + 1;
}

}  // namespace

Coefficients polynomial_coefficients(const EntryPolynomial& p) {
    const int deg = p.degree();
    MonomialChain chain(constant_coefficients(1.0), 0, true);
    Coefficients out(deg);
    for (const auto& [e, c] : p.terms) out = out + c * padded(chain.get(e), deg);
    return out;
}

EntryPolynomial coefficients_polynomial(const Coefficients& c) {
    EntryPolynomial p;
    for (int t = 0; t <= c.twice_max(); ++t)
        for (int a = 0; a <= t; ++a)
            for (int b = 0; b <= t; ++b) {
                const Complex v = double(t + 1) * c[t](b, a);
                if (std::abs(v) == 0.0) continue;
                EntryPolynomial w = wigner_polynomial(t, m_twice(t, a), m_twice(t, b));
                w *= v;
                p += w;
            }
    p.prune(1e-14);
    return p;
}

Coefficients DifferenceOp::q_coefficients() const { return polynomial_coefficients(q); }

DifferenceOp make_difference(const EntryPolynomial& q, std::string name) {
    DifferenceOp d;
    d.name = std::move(name);
    d.q = q;
    d.q.prune(0.0);
    d.order = detect_order(d.q_coefficients(), d.zero);
    return d;
}

DifferenceOp make_difference(const Coefficients& q, std::string name) {
    return make_difference(coefficients_polynomial(q), std::move(name));
}

DifferenceOp D(int i, int j) {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw std::invalid_argument("D_ij needs i,j in {1,2}");
    EntryPolynomial q = EntryPolynomial::entry(i - 1, j - 1);
    if (i == j) q += EntryPolynomial::constant(-1.0);
    return make_difference(q, "D" + std::to_string(i) + std::to_string(j));
}

DifferenceOp difference(std::string_view key) {
    if (key == "D11") return D(1, 1);
    if (key == "D12") return D(1, 2);
    if (key == "D21") return D(2, 1);
    if (key == "D22") return D(2, 2);
    if (key == "tri+") return make_difference(EntryPolynomial::entry(1, 0), "tri+");
    if (key == "tri-") return make_difference(EntryPolynomial::entry(0, 1), "tri-");
    if (key == "tri0") return make_difference(EntryPolynomial::entry(0, 0) - EntryPolynomial::entry(1, 1), "tri0");
    throw std::invalid_argument("unknown difference operator: " + std::string(key));
}

std::vector<DifferenceOp> family(std::string_view key) {
    if (key == "qij") return {D(1, 1), D(1, 2), D(2, 1), D(2, 2)};
    if (key == "tri") return {difference("tri+"), difference("tri-"), difference("tri0")};
    throw std::invalid_argument("unknown difference family: " + std::string(key));
}

Coefficients apply_blocks(const DifferenceOp& d, const Coefficients& sigma, int out_twice_max) {
    MonomialChain chain(sigma, out_twice_max, false);
    Coefficients out(out_twice_max);
    for (const auto& [e, c] : d.q.terms) out = out + c * padded(chain.get(e), out_twice_max);
    return out;
}

Symbol apply(const DifferenceOp& d, const Symbol& sigma) {
    const int rel = sigma.reliable_twice() - d.width();
    if (rel < 0) throw std::invalid_argument("apply: band limit too small for difference " + d.name);
    std::vector<SymbolTerm> terms;
    for (const auto& t : sigma.terms()) terms.push_back({t.coeff, apply_blocks(d, t.base, t.base.twice_max())});
    if (sigma.is_left_invariant()) return Symbol::left_invariant(terms.front().base, rel);
    return Symbol::x_dependent(std::move(terms), rel);
}

Symbol leibniz_residual(const Symbol& a, const Symbol& b, int i, int j, LeibnizForm form) {
    Symbol r = apply(D(i, j), multiply(a, b));
    r = add(r, scale(multiply(apply(D(i, j), a), b), -1.0));
    r = add(r, scale(multiply(a, apply(D(i, j), b)), -1.0));
    for (int k = 1; k <= 2; ++k) {
        const Symbol cross = form == LeibnizForm::kConvention ? multiply(apply(D(k, j), a), apply(D(i, k), b))
                                                              : multiply(apply(D(i, k), a), apply(D(k, j), b));
        r = add(r, scale(cross, -1.0));
    }
    return r;
}

Symbol grand_difference(const std::vector<int>& alpha, const std::vector<int>& beta, const Symbol& sigma) {
    if (alpha.size() != beta.size()) throw std::invalid_argument("grand_difference: index tuples differ in length");
    Symbol r = sigma;
    for (std::size_t k = 0; k < alpha.size(); ++k) r = apply(D(alpha[k], beta[k]), r);
    return r;
}

std::vector<LeibnizTerm> leibniz_expansion(const std::vector<int>& alpha, const std::vector<int>& beta) {
    auto slot = [](int i, int j) { return 2 * (i - 1) + (j - 1); };
    std::map<std::pair<std::array<int, 4>, std::array<int, 4>>, long> terms;
    terms[{{}, {}}] = 1;
    for (std::size_t s = 0; s < alpha.size(); ++s) {
        const int i = alpha[s], j = beta[s];
        std::map<std::pair<std::array<int, 4>, std::array<int, 4>>, long> next;
        for (const auto& [key, c] : terms) {
            auto [eps, del] = key;
            auto e1 = eps;
            ++e1[slot(i, j)];
            next[{e1, del}] += c;
            auto d1 = del;
            ++d1[slot(i, j)];
            next[{eps, d1}] += c;
            for (int k = 1; k <= 2; ++k) {
                auto e2 = eps, d2 = del;
                ++e2[slot(k, j)];
                ++d2[slot(i, k)];
                next[{e2, d2}] += c;
            }
        }
        terms = std::move(next);
    }
    std::vector<LeibnizTerm> out;
    for (const auto& [key, c] : terms)
        if (c != 0) out.push_back({key.first, key.second, c});
    return out;
}

Symbol apply_multi(const std::array<int, 4>& counts, const Symbol& sigma) {
    Symbol r = sigma;
    for (int s = 0; s < 4; ++s)
        for (int n = 0; n < counts[s]; ++n) r = apply(D(s / 2 + 1, s % 2 + 1), r);
    return r;
}

double geodesic_distance(const Quaternion& x) { return 2.0 * std::acos(std::min(1.0, std::abs(x.x0))); }

// ---- Taylor frame ---------------------------------------------------------------

Complex derivative_at_identity(const Coefficients& c, const Word& w) {
    Complex s = 0.0;
    for (int t = 0; t <= c.twice_max(); ++t) s += double(t + 1) * (word_rep(t, w) * c[t]).trace();
    return s;
}

std::vector<MultiIndex> multi_indices_upto(int size, int max_order) {
    std::vector<MultiIndex> out;
    for (int order = 0; order <= max_order; ++order) {
        MultiIndex a(size, 0);
        // enumerate compositions of `order` into `size` parts
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == size - 1) {
                a[pos] = left;
                out.push_back(a);
                return;
            }
            for (int v = left; v >= 0; --v) {
                a[pos] = v;
                rec(pos + 1, left - v);
            }
        };
        if (size == 0) {
            if (order == 0) out.push_back(a);
        } else {
            rec(0, order);
        }
    }
    return out;
}

double factorial_of(const MultiIndex& alpha) {
    double f = 1.0;
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f;
}

std::vector<Word> ordered_words(int max_length) {
    std::vector<Word> out;
    for (const MultiIndex& m : multi_indices_upto(3, max_length)) {
        Word w;
        for (int letter = 0; letter < 3; ++letter) w.insert(w.end(), m[letter], letter);
        out.push_back(w);
    }
    return out;
}

int TaylorFrame::index_of(const MultiIndex& alpha) const {
    for (std::size_t k = 0; k < multi_indices.size(); ++k)
        if (multi_indices[k] == alpha) return int(k);
    return -1;
}

Complex TaylorFrame::apply(const MultiIndex& alpha, const Coefficients& c, const Quaternion& x) const {
    const int k = index_of(alpha);
    if (k < 0) throw std::invalid_argument("TaylorFrame: multi-index outside the frame");
    Complex s = 0.0;
    for (std::size_t w = 0; w < words.size(); ++w)
        if (coeff(k, w) != 0.0) s += coeff(k, w) * evaluate_derivative(c, words[w], x);
    return s;
}

Complex TaylorFrame::taylor_polynomial(const Coefficients& f, const Quaternion& x) const {
    const Eigen::Matrix2cd u = quat_to_su2(x);
    std::vector<Complex> qv;
    for (const auto& d : family) qv.push_back(d.q.evaluate(u));
    Complex s = 0.0;
    for (const MultiIndex& a : multi_indices) {
        Complex qa = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) qa *= std::pow(qv[j], a[j]);
        s += qa * apply(a, f, identity_element()) / factorial_of(a);
    }
    return s;
}

TaylorFrame taylor_frame(const std::vector<DifferenceOp>& qs, int N) {
    if (N < 1) throw std::invalid_argument("taylor_frame: order must be positive");
    TaylorFrame f;
    f.family = qs;
    f.order = N;
    const int m = int(qs.size());
    std::vector<Coefficients> qc;
    for (const auto& d : qs) qc.push_back(d.q_coefficients());
    // greedy choice of functions with independent differentials
    Matrix J(3, 0);
    for (int j = 0; j < m; ++j) {
        Matrix trial(3, J.cols() + 1);
        trial << J, Matrix(3, 1);
        for (int k = 0; k < 3; ++k) trial(k, J.cols()) = derivative_at_identity(qc[j], {k});
        Eigen::FullPivLU<Matrix> lu(trial);
        lu.setThreshold(1e-9);
        if (lu.rank() == trial.cols() && std::abs(derivative_at_identity(qc[j], {})) < 1e-9) {
            J = trial;
            f.used.push_back(j);
        }
        if (f.used.size() == 3) break;
    }
    if (f.used.size() != 3) throw std::invalid_argument("taylor_frame: family is not admissible");

    const std::vector<MultiIndex> small = multi_indices_upto(3, N - 1);
    f.words = ordered_words(N - 1);
    Matrix M(small.size(), f.words.size());
    for (std::size_t b = 0; b < small.size(); ++b) {
        EntryPolynomial p = EntryPolynomial::constant(1.0);
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < small[b][j]; ++r) p = p * qs[f.used[j]].q;
        const Coefficients pc = polynomial_coefficients(p);
        for (std::size_t w = 0; w < f.words.size(); ++w) M(b, w) = derivative_at_identity(pc, f.words[w]);
    }
    Eigen::FullPivLU<Matrix> lu(M.transpose());
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) throw std::invalid_argument("taylor_frame: singular system, family not admissible");
    Matrix dfac = Matrix::Zero(small.size(), small.size());
    for (std::size_t a = 0; a < small.size(); ++a) dfac(a, a) = factorial_of(small[a]);
    f.coeff = dfac * lu.inverse();
    // clean roundoff so word supports stay exact
    for (Eigen::Index r = 0; r < f.coeff.rows(); ++r)
        for (Eigen::Index c = 0; c < f.coeff.cols(); ++c)
            if (std::abs(f.coeff(r, c)) < 1e-12) f.coeff(r, c) = 0.0;
    for (const MultiIndex& a : small) {
        MultiIndex full(m, 0);
        for (int j = 0; j < 3; ++j) full[f.used[j]] = a[j];
        f.multi_indices.push_back(full);
    }
    return f;
}

// ---- admissibility ------------------------------------------------------------------

namespace {

Eigen::VectorXd zero_residual(const std::vector<DifferenceOp>& qs, const Eigen::Vector4d& y) {
    const Eigen::Vector4d x = y.normalized();
    const Eigen::Matrix2cd u = quat_to_su2({x(0), x(1), x(2), x(3)});
    Eigen::VectorXd r(2 * qs.size());
    for (std::size_t j = 0; j < qs.size(); ++j) {
        const Complex v = qs[j].q.evaluate(u);
        r(2 * j) = v.real();
        r(2 * j + 1) = v.imag();
    }
    return r;
}

// Levenberg-Marquardt on the sphere (through normalisation)
Eigen::Vector4d refine_zero(const std::vector<DifferenceOp>& qs, Eigen::Vector4d y) {
    double lambda = 1e-3;
    Eigen::VectorXd r = zero_residual(qs, y);
    for (int it = 0; it < 80 && r.norm() > 1e-15; ++it) {
        Eigen::MatrixXd J(r.size(), 4);
        for (int k = 0; k < 4; ++k) {
            Eigen::Vector4d yp = y, ym = y;
            yp(k) += 1e-7;
            ym(k) -= 1e-7;
            J.col(k) = (zero_residual(qs, yp) - zero_residual(qs, ym)) / 2e-7;
        }
        const Eigen::Matrix4d A = J.transpose() * J + lambda * Eigen::Matrix4d::Identity();
        const Eigen::Vector4d step = A.ldlt().solve(-J.transpose() * r);
        const Eigen::Vector4d yn = (y + step).normalized();
        const Eigen::VectorXd rn = zero_residual(qs, yn);
        if (rn.norm() < r.norm()) {
            y = yn;
            r = rn;
            lambda = std::max(lambda * 0.3, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e8) break;
        }
    }
    return y.normalized();
}

}  // namespace

AdmissibilityReport admissibility_report(const std::vector<DifferenceOp>& qs) {
    AdmissibilityReport rep;
    Matrix J(3, qs.size());
    bool vanish_at_e = true;
    for (std::size_t j = 0; j < qs.size(); ++j) {
        const Coefficients c = qs[j].q_coefficients();
        for (int k = 0; k < 3; ++k) J(k, j) = derivative_at_identity(c, {k});
        rep.nonzero_differential.push_back(J.col(j).cwiseAbs().maxCoeff() > 1e-9);
        vanish_at_e = vanish_at_e && std::abs(derivative_at_identity(c, {})) < 1e-9;
    }
    if (!qs.empty()) {
        const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(J).singularValues();
        for (int k = 0; k < s.size(); ++k) rep.rank += s(k) > 1e-9 * std::max(1.0, s(0));
    }
    bool all_nonzero = true;
    for (bool b : rep.nonzero_differential) all_nonzero = all_nonzero && b;
    rep.admissible = vanish_at_e && all_nonzero && rep.rank == 3;

    // common zeros: scan an Euler grid and polish every node
    const QuadratureGrid g = build_grid(HalfInt(6));
    for (int i = 0; i < g.size(); ++i) {
        const Quaternion p = g.point(i);
        const Eigen::Vector4d y = refine_zero(qs, Eigen::Vector4d(p.x0, p.x1, p.x2, p.x3));
        if (zero_residual(qs, y).norm() > 1e-10) continue;
        const Quaternion z{y(0), y(1), y(2), y(3)};
        bool seen = false;
        for (const auto& w : rep.common_zeros) seen = seen || group_distance(w, z) < 1e-6;
        if (!seen) rep.common_zeros.push_back(z);
    }
    rep.strongly_admissible =
        rep.admissible && rep.common_zeros.size() == 1 && group_distance(rep.common_zeros[0], identity_element()) < 1e-6;
    return rep;
}

}  // namespace su2pdo
