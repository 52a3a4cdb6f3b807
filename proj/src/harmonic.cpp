#include "su2pdo/harmonic.hpp"

#include <cmath>
#include <numbers>

namespace su2pdo {

namespace {

constexpr Complex I1{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// rows: twice-frequencies -T..T, cols: angles; entries exp(sign * i * (f/2) * angle)
Matrix phase_matrix(int T, const std::vector<double>& angles, double sign) {
    Matrix e(2 * T + 1, angles.size());
    for (int f = -T; f <= T; ++f)
        for (std::size_t a = 0; a < angles.size(); ++a) e(f + T, a) = std::exp(I1 * (sign * 0.5 * f * angles[a]));
    return e;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

EulerAngles QuadratureGrid::node(int idx) const {
    const int ns = int(psi.size()), np = int(phi.size());
    const int s = idx % ns, p = (idx / ns) % np, k = idx / (ns * np);
    return {phi[p], theta[k], psi[s]};
}

double QuadratureGrid::weight(int idx) const {
    const int ns = int(psi.size()), np = int(phi.size());
    return theta_weight[idx / (ns * np)] / double(ns * np);
}

QuadratureGrid build_grid(HalfInt L) {
    if (L.twice < 0 || L.twice > kMaxTwiceEll) throw std::out_of_range("build_grid: band limit out of range");
    QuadratureGrid g;
    g.twice_L = L.twice;
    const int n = 2 * L.twice + 1;
    for (int p = 0; p < n; ++p) g.phi.push_back(2 * kPi * p / n);
    for (int s = 0; s < n; ++s) g.psi.push_back(4 * kPi * s / n);
    std::vector<double> x, w;
    gauss_legendre(L.twice + 1, x, w);
    for (std::size_t k = 0; k < x.size(); ++k) {
        g.theta.push_back(std::acos(x[k]));
        g.theta_weight.push_back(0.5 * w[k]);
    }
    return g;
}

GroupFunction sample(const std::function<Complex(const Quaternion&)>& f, const QuadratureGrid& grid) {
    GroupFunction out{grid, Vector(grid.size())};
    for (int i = 0; i < grid.size(); ++i) out.samples(i) = f(grid.point(i));
    return out;
}

Complex integrate(const GroupFunction& f) {
    Complex s = 0.0;
    for (int i = 0; i < f.grid.size(); ++i) s += f.grid.weight(i) * f.samples(i);
    return s;
}

double l2_norm(const GroupFunction& f) {
    double s = 0.0;
    for (int i = 0; i < f.grid.size(); ++i) s += f.grid.weight(i) * std::norm(f.samples(i));
    return std::sqrt(s);
}

Coefficients forward(const GroupFunction& f, HalfInt L) {
    const QuadratureGrid& g = f.grid;
    if (L.twice > g.twice_L) throw std::invalid_argument("forward: grid too coarse for requested band limit");
    const int T = L.twice, np = int(g.phi.size()), ns = int(g.psi.size()), nt = int(g.theta.size());
    const Matrix A = phase_matrix(T, g.phi, +1.0);                // (b2, p)
    const Matrix B = phase_matrix(T, g.psi, +1.0).transpose();    // (s, a2)
    std::vector<Matrix> G(nt);
    for (int k = 0; k < nt; ++k) {
        const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> F(
            f.samples.data() + k * np * ns, np, ns);
        G[k] = (g.theta_weight[k] / double(np * ns)) * (A * F * B);
    }
    Coefficients c(T);
    for (int t = 0; t <= T; ++t) {
        const WignerSmallD dd(t);
        const int off = T - t;  // twice-frequency f sits at row f + T; m_index offset
        for (int k = 0; k < nt; ++k) {
            const Eigen::MatrixXd d = dd(g.theta[k]);
            // c_ab += d_ba G(b2, a2)
            for (int a = 0; a <= t; ++a)
                for (int b = 0; b <= t; ++b) c[t](a, b) += d(b, a) * G[k](off + 2 * b, off + 2 * a);
        }
    }
    return c;
}

GroupFunction inverse(const Coefficients& c, const QuadratureGrid& grid) {
    const int T = c.twice_max(), np = int(grid.phi.size()), ns = int(grid.psi.size()), nt = int(grid.theta.size());
    const Matrix Ephi = phase_matrix(T, grid.phi, -1.0).transpose();  // (p, m2)
    const Matrix Epsi = phase_matrix(T, grid.psi, -1.0);              // (n2, s)
    std::vector<WignerSmallD> dd;
    for (int t = 0; t <= T; ++t) dd.emplace_back(t);
    GroupFunction out{grid, Vector(grid.size())};
    for (int k = 0; k < nt; ++k) {
        Matrix P = Matrix::Zero(2 * T + 1, 2 * T + 1);
        for (int t = 0; t <= T; ++t) {
            const Eigen::MatrixXd d = dd[t](grid.theta[k]);
            const int off = T - t;
            for (int m = 0; m <= t; ++m)
                for (int n = 0; n <= t; ++n) P(off + 2 * m, off + 2 * n) += double(t + 1) * d(m, n) * c[t](n, m);
        }
        const Matrix F = Ephi * P * Epsi;
        for (int p = 0; p < np; ++p)
            for (int s = 0; s < ns; ++s) out.samples(grid.index(k, p, s)) = F(p, s);
    }
    return out;
}

Complex evaluate(const Coefficients& c, const Quaternion& x) {
    Complex s = 0.0;
    const EulerAngles e = to_euler(x);
    for (int t = 0; t <= c.twice_max(); ++t) s += double(t + 1) * (wigner(HalfInt(t), e) * c[t]).trace();
    return s;
}

Complex evaluate_derivative(const Coefficients& c, const std::vector<int>& word, const Quaternion& x) {
    Complex s = 0.0;
    const EulerAngles e = to_euler(x);
    for (int t = 0; t <= c.twice_max(); ++t)
        s += double(t + 1) * (wigner(HalfInt(t), e) * word_rep(t, word) * c[t]).trace();
    return s;
}

Coefficients derivative(const Coefficients& c, const Eigen::Matrix2cd& x) {
    Coefficients r = c;
    for (int t = 0; t <= c.twice_max(); ++t) r[t] = algebra_rep(t, x) * c[t];
    return r;
}

Coefficients right_translate(const Coefficients& c, const Quaternion& u) {
    Coefficients r = c;
    const EulerAngles e = to_euler(u);
    for (int t = 0; t <= c.twice_max(); ++t) r[t] = wigner(HalfInt(t), e).adjoint() * c[t];
    return r;
}

Coefficients product(const Coefficients& a, const Coefficients& b) {
    const int T = a.twice_max() + b.twice_max();
    const QuadratureGrid g = build_grid(HalfInt(T));
    GroupFunction fa = inverse(a, g);
    const GroupFunction fb = inverse(b, g);
    fa.samples = fa.samples.cwiseProduct(fb.samples);
    return forward(fa, HalfInt(T));
}

double hs_norm_sq(const Coefficients& c) {
    double s = 0.0;
    for (int t = 0; t <= c.twice_max(); ++t) s += double(t + 1) * c[t].squaredNorm();
    return s;
}

double parseval_gap(const GroupFunction& f, HalfInt L) {
    const double lhs = std::pow(l2_norm(f), 2);
    return std::abs(lhs - hs_norm_sq(forward(f, L)));
}

double sobolev_norm(const Coefficients& c, double s) {
    double acc = 0.0;
    for (int t = 0; t <= c.twice_max(); ++t) acc += double(t + 1) * std::pow(weight(t), 2 * s) * c[t].squaredNorm();
    return std::sqrt(acc);
}

Coefficients constant_coefficients(Complex value, int twice_max) {
    Coefficients c(twice_max);
    c[0](0, 0) = value;
    return c;
}

}  // namespace su2pdo
