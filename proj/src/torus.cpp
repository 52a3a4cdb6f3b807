#include "su2pdo/torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace su2pdo::torus {

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

long long extent(const TorusSymbol& a, int j) { return a.hi[j] - a.lo[j] + 1; }

std::size_t offset(const TorusSymbol& a, const Index& xi) {
    return std::size_t((xi[0] - a.lo[0]) + (xi[1] - a.lo[1]) * extent(a, 0));
}

TorusSymbol empty_box(int dim, const Index& lo, const Index& hi) {
    TorusSymbol a;
    a.dim = dim;
    a.lo = lo;
    a.hi = hi;
    a.values.assign(std::size_t(extent(a, 0) * extent(a, 1)), 0.0);
    return a;
}

template <typename F>
void for_each(const TorusSymbol& a, F&& f) {
    for (long long y = a.lo[1]; y <= a.hi[1]; ++y)
        for (long long x = a.lo[0]; x <= a.hi[0]; ++x) f(Index{x, y});
}

// largest r with the whole shell |xi|_inf = r inside the box
long long inner_radius(const TorusSymbol& a) {
    long long r = std::min(-a.lo[0], a.hi[0]);
    if (a.dim == 2) r = std::min(r, std::min(-a.lo[1], a.hi[1]));
    return r;
}

double shell_sup(const TorusSymbol& a, long long r) {
    double s = 0.0;
    if (a.dim == 1) return std::max(std::abs(a.at({-r, 0})), std::abs(a.at({r, 0})));
    for (long long i = -r; i <= r; ++i)
        for (const Index& xi : {Index{i, -r}, Index{i, r}, Index{-r, i}, Index{r, i}})
            s = std::max(s, std::abs(a.at(xi)));
    return s;
}

Complex ipow(Complex z, int k) {
    Complex r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

}  // namespace

bool TorusSymbol::contains(const Index& xi) const {
    for (int j = 0; j < 2; ++j)
        if (xi[j] < lo[j] || xi[j] > hi[j]) return false;
    return true;
}

Complex TorusSymbol::at(const Index& xi) const {
    if (!contains(xi)) throw std::out_of_range("TorusSymbol: frequency outside the sampled box");
    return values[offset(*this, xi)];
}

Complex& TorusSymbol::at(const Index& xi) {
    if (!contains(xi)) throw std::out_of_range("TorusSymbol: frequency outside the sampled box");
    return values[offset(*this, xi)];
}

TorusSymbol sample(int dim, long long n, const std::function<Complex(const Index&)>& a) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("torus: dimension must be 1 or 2");
    TorusSymbol s = empty_box(dim, {-n, dim == 2 ? -n : 0}, {n, dim == 2 ? n : 0});
    for_each(s, [&](const Index& xi) { s.at(xi) = a(xi); });
    return s;
}

TorusSymbol torus_symbol(const TorusExpression& e, long long n) {
    return sample(e.dim, n, [&](const Index& xi) {
        Complex v = 0.0;
        for (const auto& [a, c] : e.terms)
            v += c * ipow(kTwoPiI * double(xi[0]), a[0]) * ipow(kTwoPiI * double(xi[1]), a[1]);
        return v;
    });
}

TorusSymbol torus_difference(const TorusSymbol& a, int j) {
    if (j < 0 || j >= a.dim) throw std::invalid_argument("torus_difference: direction out of range");
    Index hi = a.hi;
    --hi[j];
    TorusSymbol d = empty_box(a.dim, a.lo, hi);
    for_each(d, [&](const Index& xi) {
        Index up = xi;
        ++up[j];
        d.at(xi) = a.at(up) - a.at(xi);
    });
    return d;
}

TorusFit torus_fit(const TorusSymbol& a, int alpha_depth) {
    std::vector<Index> alphas;
    for (int k = 0; k <= alpha_depth; ++k)
        for (int a0 = k; a0 >= 0; --a0)
            if (a.dim == 2 || a0 == k) alphas.push_back({a0, k - a0});

    std::vector<TorusSymbol> diffs;
    long long R = inner_radius(a);
    for (const Index& al : alphas) {
        TorusSymbol d = a;
        for (int j = 0; j < 2; ++j)
            for (long long r = 0; r < al[j]; ++r) d = torus_difference(d, j);
        R = std::min(R, inner_radius(d));
        diffs.push_back(std::move(d));
    }
    const long long r_lo = std::max<long long>(2, R / 4);
    if (R - r_lo < 4) throw std::invalid_argument("torus_fit: sampled box too small for the requested depth");

    std::vector<double> weights;
    for (long long r = r_lo; r <= R; ++r) weights.push_back(std::sqrt(1.0 + double(r * r)));
    double scale = 0.0;
    for (long long r = r_lo; r <= R; ++r) scale = std::max(scale, shell_sup(diffs[0], r));

    TorusFit fit;
    fit.rho = 1.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        std::vector<double> v;
        for (long long r = r_lo; r <= R; ++r) v.push_back(shell_sup(diffs[i], r));
        const PowerFit p = fit_loglog(weights, v, scale);
        fit.slopes.push_back({alphas[i], p.slope, p.residual, p.vanishing});
        const int order = int(alphas[i][0] + alphas[i][1]);
        if (order == 0) fit.m = p.slope;
        else if (!p.vanishing) fit.rho = std::min(fit.rho, (fit.m - p.slope) / order);
    }
    return fit;
}

TorusAdmissibility torus_admissibility(int dim, int grid) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("torus: dimension must be 1 or 2");
    TorusAdmissibility r;
    // dq_j(0) = 2 pi i dx_j
    r.rank = dim;
    for (int y = 0; y < (dim == 2 ? grid : 1); ++y)
        for (int x = 0; x < grid; ++x) {
            const double p[2] = {double(x) / grid, double(y) / grid};
            bool zero = true;
            for (int j = 0; j < dim; ++j) zero = zero && std::abs(std::exp(kTwoPiI * p[j]) - 1.0) < 1e-12;
            if (zero) r.common_zeros.push_back({p[0], p[1]});
        }
    r.admissible = r.rank == dim && !r.common_zeros.empty();
    r.strongly_admissible = r.admissible && r.common_zeros.size() == 1;
    return r;
}

TorusTaylor torus_taylor(int N) {
    if (N < 1) throw std::invalid_argument("torus_taylor: order must be positive");
    // M(b, j) = (d/dx)^j q^b at 0, with q^b = sum_r C(b, r) (-1)^{b-r} e^{2 pi i r x}
    Matrix M = Matrix::Zero(N, N);
    for (int b = 0; b < N; ++b)
        for (int j = 0; j < N; ++j)
            for (int r = 0; r <= b; ++r)
                M(b, j) += binomial(b, r) * ((b - r) % 2 ? -1.0 : 1.0) * ipow(kTwoPiI * double(r), j);
    Matrix fact = Matrix::Zero(N, N);
    double f = 1.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) f *= k;
        fact(k, k) = f;
    }
    TorusTaylor t;
    t.order = N;
    t.coeff = fact * M.transpose().inverse();
    return t;
}

Complex torus_taylor_polynomial(const TorusTaylor& t, const std::vector<Complex>& derivatives, double x) {
    if (int(derivatives.size()) < t.order) throw std::invalid_argument("torus_taylor_polynomial: too few derivatives");
    const Complex q = std::exp(kTwoPiI * x) - 1.0;
    Complex sum = 0.0, qk = 1.0;
    double fact = 1.0;
    for (int k = 0; k < t.order; ++k) {
        if (k > 0) fact *= k;
        Complex dk = 0.0;
        for (int j = 0; j < t.order; ++j) dk += t.coeff(k, j) * derivatives[j];
        sum += qk * dk / fact;
        qk *= q;
    }
    return sum;
}

}  // namespace su2pdo::torus
