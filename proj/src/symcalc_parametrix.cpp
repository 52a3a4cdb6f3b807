#include <stdexcept>

#include "su2pdo/symcalc.hpp"

namespace su2pdo {

namespace {

int pow3(int n) {
    int r = 1;
    while (n-- > 0) r *= 3;
    return r;
}

// all words up to a depth, indexed by length then base-3 value
struct WordTable {
    int depth = 0;
    std::vector<Word> words;
    std::vector<std::vector<std::pair<int, int>>> splits;  // order-preserving (u, v) per word

    explicit WordTable(int d) : depth(d) {
        for (int n = 0; n <= d; ++n)
            for (int v = 0; v < pow3(n); ++v) {
                Word w(n);
                for (int i = n - 1, r = v; i >= 0; --i, r /= 3) w[i] = r % 3;
                words.push_back(w);
            }
        splits.resize(words.size());
        for (std::size_t k = 0; k < words.size(); ++k) {
            const Word& w = words[k];
            const int n = int(w.size());
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                Word u, v;
                for (int i = 0; i < n; ++i) ((mask >> i) & 1u ? u : v).push_back(w[i]);
                splits[k].push_back({index(u), index(v)});
            }
        }
    }
    int index(const Word& w) const {
        int v = 0;
        for (int l : w) v = 3 * v + l;
        return (pow3(int(w.size())) - 1) / 2 + v;
    }
    int count(int d) const { return (pow3(d + 1) - 1) / 2; }
};

int band_of(const Matrix& m) {
    int b = -1;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) b = std::max(b, std::abs(i - j));
    return b;
}

// values X_w F(x) for all words up to depth; band < 0 marks a zero entry
struct Jet {
    std::vector<Matrix> m;
    std::vector<int> band;
    int depth = 0;
};

Jet zero_jet(const WordTable& tab, int depth, int n) {
    Jet j;
    j.depth = depth;
    j.m.assign(tab.count(depth), Matrix::Zero(n, n));
    j.band.assign(tab.count(depth), -1);
    return j;
}

void refresh_bands(Jet& j) {
    for (std::size_t k = 0; k < j.m.size(); ++k) j.band[k] = band_of(j.m[k]);
}

void banded_mul_add(const Matrix& a, int ba, const Matrix& b, int bb, Matrix& out) {
    const int n = int(a.rows());
    if (ba < 0 || bb < 0) return;
    if (2 * (ba + bb) >= n) {
        out.noalias() += a * b;
        return;
    }
    for (int j = 0; j < n; ++j)
        for (int k = std::max(0, j - bb); k <= std::min(n - 1, j + bb); ++k) {
            const Complex bkj = b(k, j);
            if (bkj == 0.0) continue;
            for (int i = std::max(0, k - ba); i <= std::min(n - 1, k + ba); ++i) out(i, j) += a(i, k) * bkj;
        }
}

Jet product(const WordTable& tab, const Jet& f, const Jet& g, int depth) {
    Jet r = zero_jet(tab, depth, int(f.m.front().rows()));
    for (int w = 0; w < tab.count(depth); ++w)
        for (const auto& [u, v] : tab.splits[w]) banded_mul_add(f.m[u], f.band[u], g.m[v], g.band[v], r.m[w]);
    refresh_bands(r);
    return r;
}

// G = F^{-1}: from X_w(F G) = 0 for |w| > 0
Jet inverse(const WordTable& tab, const Jet& f, int depth) {
    const int n = int(f.m.front().rows());
    Jet g = zero_jet(tab, depth, n);
    const Matrix& f0 = f.m[0];
    const bool diag = f.band[0] <= 0;
    auto solve = [&](const Matrix& rhs) -> Matrix {
        if (diag) return f0.diagonal().cwiseInverse().asDiagonal() * rhs;
        return f0.partialPivLu().solve(rhs);
    };
    g.m[0] = solve(Matrix::Identity(n, n));
    g.band[0] = band_of(g.m[0]);
    for (int w = 1; w < tab.count(depth); ++w) {
        Matrix acc = Matrix::Zero(n, n);
        for (const auto& [u, v] : tab.splits[w])
            if (u != 0) banded_mul_add(f.m[u], f.band[u], g.m[v], g.band[v], acc);
        g.m[w] = -solve(acc);
        g.band[w] = band_of(g.m[w]);
    }
    return g;
}

// S partial^{(gamma)} F: sum_w c_w (-1)^{|w|} X_{reverse w} F, shifted into the jet
Jet frame_jet(const WordTable& tab, const Jet& f, const TaylorFrame& frame, int k, int depth) {
    Jet r = zero_jet(tab, depth, int(f.m.front().rows()));
    for (std::size_t wi = 0; wi < frame.words.size(); ++wi) {
        const Complex c = frame.coeff(k, wi);
        if (c == 0.0) continue;
        Word rev(frame.words[wi].rbegin(), frame.words[wi].rend());
        const double sign = rev.size() % 2 ? -1.0 : 1.0;
        for (int u = 0; u < tab.count(depth); ++u) {
            Word full = tab.words[u];
            full.insert(full.end(), rev.begin(), rev.end());
            const int idx = tab.index(full);
            if (idx >= int(f.m.size())) throw std::logic_error("frame_jet: derivative word beyond the jet depth");
            if (f.band[idx] >= 0) r.m[u] += (sign * c) * f.m[idx];
        }
    }
    refresh_bands(r);
    return r;
}

int size_of(const MultiIndex& a) {
    int n = 0;
    for (int v : a) n += v;
    return n;
}

}  // namespace

ParametrixResult parametrix(const DifferentialExpression& a, const TaylorFrame& frame, const ParametrixOptions& opt) {
    const int N = opt.terms, r = a.order();
    if (frame.order < N + 1) throw std::invalid_argument("parametrix: frame order must exceed the number of terms");
    if (opt.points.empty() || opt.twice_ells.empty()) throw std::invalid_argument("parametrix: no points or blocks");
    const int D = r + N;
    const WordTable tab(D);
    int width = 0;
    for (const auto& d : frame.family) width = std::max(width, d.width());

    std::vector<MultiIndex> gammas;
    for (const MultiIndex& g : frame.multi_indices)
        if (size_of(g) >= 1 && size_of(g) <= N) gammas.push_back(g);

    ParametrixResult res;
    res.residual.assign(N + 1, std::vector<std::vector<double>>(opt.points.size(), std::vector<double>(opt.twice_ells.size())));
    res.norms = res.residual;

    // Delta^gamma d pi(w) for every word of A, on all blocks at once
    int t_max = 0;
    for (int t : opt.twice_ells) t_max = std::max(t_max, t);
    std::vector<Coefficients> word_reps;
    std::vector<std::vector<Symbol>> word_diffs;
    for (const auto& [w, c] : a.terms) {
        Coefficients base(t_max + width * N);
        for (int s = 0; s <= base.twice_max(); ++s) base[s] = word_rep(s, w);
        const Symbol sym = Symbol::left_invariant(base);
        std::vector<Symbol> per;
        for (const MultiIndex& g : gammas) per.push_back(multi_difference(frame, g, sym));
        word_reps.push_back(std::move(base));
        word_diffs.push_back(std::move(per));
    }

    // X_w c(x) for every coefficient of A and base point
    std::vector<std::vector<std::vector<Complex>>> coeff_jets;
    for (const Quaternion& x : opt.points) {
        std::vector<std::vector<Complex>> cj;
        for (const auto& [w, c] : a.terms) {
            std::vector<Complex> v(tab.count(D), 0.0);
            if (c.twice_max() == 0) v[0] = c[0](0, 0);
            else
                for (int k = 0; k < tab.count(D); ++k) v[k] = evaluate_derivative(c, tab.words[k], x);
            cj.push_back(std::move(v));
        }
        coeff_jets.push_back(std::move(cj));
    }

    for (std::size_t ei = 0; ei < opt.twice_ells.size(); ++ei) {
        const int t = opt.twice_ells[ei], n = t + 1;
        std::vector<Matrix> rep;
        std::vector<std::vector<Matrix>> drep;
        for (std::size_t ci = 0; ci < a.terms.size(); ++ci) {
            rep.push_back(word_reps[ci][t]);
            std::vector<Matrix> per;
            for (const Symbol& d : word_diffs[ci]) per.push_back(d.blocks()[t]);
            drep.push_back(std::move(per));
        }

        for (std::size_t pi = 0; pi < opt.points.size(); ++pi) {
            const auto& cj = coeff_jets[pi];
            auto symbol_jet = [&](int gi) {
                Jet j = zero_jet(tab, D, n);
                for (int k = 0; k < tab.count(D); ++k)
                    for (std::size_t ci = 0; ci < cj.size(); ++ci)
                        if (cj[ci][k] != 0.0) j.m[k] += cj[ci][k] * (gi < 0 ? rep[ci] : drep[ci][gi]);
                refresh_bands(j);
                return j;
            };
            const Jet sa = symbol_jet(-1);
            std::vector<Jet> dsa;
            for (std::size_t gi = 0; gi < gammas.size(); ++gi) dsa.push_back(symbol_jet(int(gi)));

            // partial^{(gamma)} only has words of length <= |gamma|, so B_k is needed to depth D - k
            std::vector<Jet> b;
            b.push_back(inverse(tab, sa, D));
            for (int k = 1; k <= N; ++k) {
                const int depth = D - k;
                Jet sum = zero_jet(tab, depth, n);
                for (int j = 0; j < k; ++j)
                    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
                        if (size_of(gammas[gi]) != k - j) continue;
                        const int fk = frame.index_of(gammas[gi]);
                        const Jet d = frame_jet(tab, b[j], frame, fk, depth);
                        const Jet p = product(tab, dsa[gi], d, depth);
                        const double w = 1.0 / factorial_of(gammas[gi]);
                        for (int q = 0; q < tab.count(depth); ++q) sum.m[q] += w * p.m[q];
                    }
                refresh_bands(sum);
                Jet bk = product(tab, b[0], sum, depth);
                for (auto& m : bk.m) m = -m;
                b.push_back(std::move(bk));
            }

            // residual of A B^{(N')} - I by exact differential composition
            Jet partial = zero_jet(tab, r, n);
            for (int k = 0; k <= N; ++k) {
                for (int q = 0; q < tab.count(r); ++q) partial.m[q] += b[k].m[q];
                res.norms[k][pi][ei] = op_norm(b[k].m[0]);
                Matrix comp = -Matrix::Identity(n, n);
                std::size_t ci = 0;
                for (const auto& [w, c] : a.terms) {
                    const Complex cx = cj[ci++][0];
                    if (cx == 0.0) continue;
                    const int len = int(w.size());
                    for (unsigned mask = 0; mask < (1u << len); ++mask) {
                        Word on_t, on_b;
                        for (int i = 0; i < len; ++i) ((mask >> i) & 1u ? on_b : on_t).push_back(w[i]);
                        comp += cx * word_rep(t, on_t) * partial.m[tab.index(on_b)];
                    }
                }
                res.residual[k][pi][ei] = op_norm(comp);
            }
        }
    }
    for (int k = 0; k <= N; ++k) {
        std::vector<double> worst(opt.twice_ells.size(), 0.0);
        for (std::size_t pi = 0; pi < opt.points.size(); ++pi)
            for (std::size_t ei = 0; ei < worst.size(); ++ei) worst[ei] = std::max(worst[ei], res.residual[k][pi][ei]);
        res.residual_order.push_back(fit_power(opt.twice_ells, worst).slope);
    }
    return res;
}

}  // namespace su2pdo
