#include <doctest.h>

#include "random.hpp"
#include "su2pdo/symbolspace.hpp"

using namespace su2pdo;
using namespace su2pdo::testing;

namespace {

constexpr Complex I1{0, 1};

// D3 = d/dpsi in our Euler chart; differentiate each psi-line of the grid spectrally
GroupFunction d3_spectral(const GroupFunction& f) {
    const QuadratureGrid& g = f.grid;
    const int ns = int(g.psi.size()), half = (ns - 1) / 2;
    GroupFunction out = f;
    for (std::size_t k = 0; k < g.theta.size(); ++k)
        for (std::size_t p = 0; p < g.phi.size(); ++p) {
            std::vector<Complex> c(ns, 0.0);
            for (int q = -half; q <= half; ++q)
                for (int s = 0; s < ns; ++s)
                    c[q + half] += f.samples(g.index(k, p, s)) * std::exp(-I1 * (0.5 * q * g.psi[s])) / double(ns);
            for (int s = 0; s < ns; ++s) {
                Complex v = 0;
                for (int q = -half; q <= half; ++q) v += (I1 * (0.5 * q)) * c[q + half] * std::exp(I1 * (0.5 * q * g.psi[s]));
                out.samples(g.index(k, p, s)) = v;
            }
        }
    return out;
}

Coefficients sublaplacian_blocks(int T) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a) {
            const double m = 0.5 * m_twice(t, a), l = 0.5 * t;
            c[t](a, a) = m * m - l * (l + 1);
        }
    return c;
}

Coefficients d3_blocks(int T, Complex c0 = 0.0) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a) c[t](a, a) = c0 - I1 * (0.5 * m_twice(t, a));
    return c;
}

}  // namespace

TEST_CASE("norms") {
    CHECK(op_norm(Matrix::Identity(4, 4)) == 1.0);
    CHECK(std::abs(hs_norm(Matrix::Identity(4, 4)) - 2.0) < 1e-15);
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1.0, 2.0, 3.0;
    CHECK(op_norm(d) == 3.0);
    for (int k = 0; k < 30; ++k) {
        const int n = uniform_int(1, 9);
        const Matrix m = random_matrix(n);
        CHECK(hs_norm(m) <= std::sqrt(double(n)) * op_norm(m) * (1 + 1e-12));
        CHECK(min_singular_value(m) <= op_norm(m));
    }
}

TEST_CASE("quantize examples") {
    const QuadratureGrid g = build_grid(HalfInt(4));
    const Coefficients f = random_coefficients(4);
    const GroupFunction same = quantize(identity_symbol(4), f, g);
    CHECK((same.samples - inverse(f, g).samples).cwiseAbs().maxCoeff() < 1e-12);

    // sigma_D3 on f = tr t^{1/2}
    Coefficients tr(1);
    tr[1] = Matrix::Identity(2, 2) / 2.0;
    const Symbol s3 = Symbol::left_invariant(d3_blocks(1));
    const double h = 1e-5;
    for (int k = 0; k < 5; ++k) {
        const Quaternion x = random_element();
        const Complex fd = (evaluate(tr, group_mul(x, exp_algebra(algebra_D3(), h))) -
                            evaluate(tr, group_mul(x, exp_algebra(algebra_D3(), -h)))) / (2 * h);
        Complex op = 0;
        for (const auto& [c, gk] : quantize_terms(s3, tr)) op += c[0](0, 0) * evaluate(gk, x);
        CHECK(std::abs(op - fd) < 1e-8);
    }

    // sub-Laplacian on a single mode
    for (int t : {1, 2, 3}) {
        Coefficients mode(4);
        const int a = uniform_int(0, t), b = uniform_int(0, t);
        mode[t](a, b) = 1.0;
        const GroupFunction out = quantize(Symbol::left_invariant(sublaplacian_blocks(4)), mode, g);
        const double m = 0.5 * m_twice(t, a), l = 0.5 * t;
        CHECK((out.samples - (m * m - l * (l + 1)) * inverse(mode, g).samples).cwiseAbs().maxCoeff() < 1e-11);
    }
    CHECK_THROWS_AS(quantize(identity_symbol(2), f, g), std::invalid_argument);
}

TEST_CASE("quantisation is linear and composes for left-invariant symbols") {
    const QuadratureGrid g = build_grid(HalfInt(5));
    const Symbol a = Symbol::left_invariant(random_coefficients(5)), b = Symbol::left_invariant(random_coefficients(5));
    const Coefficients f1 = random_coefficients(5), f2 = random_coefficients(5);
    const Complex alpha(0.3, -1.2);
    const Vector lhs = quantize(a, f1 + alpha * f2, g).samples;
    const Vector rhs = quantize(a, f1, g).samples + alpha * quantize(a, f2, g).samples;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    const Vector sum = quantize(add(a, scale(b, alpha)), f1, g).samples;
    CHECK((sum - quantize(a, f1, g).samples - alpha * quantize(b, f1, g).samples).cwiseAbs().maxCoeff() < 1e-10);
    const Coefficients bf = forward(quantize(b, f1, g), HalfInt(5));
    const Vector ab = quantize(a, bf, g).samples;
    CHECK((ab - quantize(multiply(a, b), f1, g).samples).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("symbol_of recovers known symbols") {
    const QuadratureGrid g = build_grid(HalfInt(2));
    const Symbol id = symbol_of([](const GroupFunction& f) { return f; }, HalfInt(2), g);
    REQUIRE(id.is_left_invariant());
    for (int t = 0; t <= 2; ++t) CHECK((id.blocks()[t] - Matrix::Identity(t + 1, t + 1)).norm() < 1e-12);

    const Complex c(0.7, 0.2);
    const Symbol d3c = symbol_of(
        [&](const GroupFunction& f) {
            GroupFunction r = d3_spectral(f);
            r.samples += c * f.samples;
            return r;
        },
        HalfInt(2), g);
    REQUIRE(d3c.is_left_invariant());
    CHECK(max_abs_difference(d3c.blocks(), d3_blocks(2, c), 2) < 1e-10);

    Coefficients a(1);
    a[0](0, 0) = 0.5;
    a[1] = random_matrix(2);
    const QuadratureGrid gx = build_grid(HalfInt(3));
    const Vector as = inverse(a, gx).samples;
    const Symbol ma = symbol_of(
        [&](const GroupFunction& f) {
            GroupFunction r = f;
            r.samples = f.samples.cwiseProduct(as);
            return r;
        },
        HalfInt(1), gx);
    REQUIRE(!ma.is_left_invariant());
    for (int k = 0; k < 5; ++k) {
        const Quaternion x = random_element();
        for (int t = 0; t <= 1; ++t)
            CHECK((ma.at(x, t) - evaluate(a, x) * Matrix::Identity(t + 1, t + 1)).norm() < 1e-10);
    }
}

TEST_CASE("kernels round trip") {
    const QuadratureGrid gy = build_grid(HalfInt(3));
    KernelField k = kernel_of(identity_symbol(3), gy);
    // truncated delta at the identity node-free grid: compare against the explicit sum
    for (int i : {0, 5, 40}) {
        Complex s = 0;
        for (int t = 0; t <= 3; ++t) s += double(t + 1) * wigner(HalfInt(t), gy.node(i)).trace();
        CHECK(std::abs(k.samples(0, i) - s) < 1e-10);
    }
    const Symbol r = Symbol::left_invariant(random_coefficients(3));
    KernelField kr = kernel_of(r, gy);
    const Symbol back = symbol_from_kernel(kr, HalfInt(3));
    CHECK(!kr.truncated);
    CHECK(max_abs_difference(back.blocks(), r.blocks(), 3) < 1e-9);
    KernelField kt = kernel_of(r, gy);
    symbol_from_kernel(kt, HalfInt(2));
    CHECK(kt.truncated);

    // x-dependent round trip
    Coefficients a(1);
    a[1] = random_matrix(2);
    const Symbol xs = add(r, times_function(a, random_coefficients(3)));
    const QuadratureGrid gx = build_grid(HalfInt(1));
    KernelField kx = kernel_of(xs, gy, gx);
    const Symbol xback = symbol_from_kernel(kx, HalfInt(3));
    for (int n = 0; n < 4; ++n) {
        const Quaternion x = random_element();
        for (int t = 0; t <= 3; ++t) CHECK((xback.at(x, t) - xs.at(x, t)).norm() < 1e-9);
    }
}

TEST_CASE("mollified D3 kernel concentrates at the identity") {
    // R_eps(y) = sum d exp(-eps l(l+1)) tr(t(y) sigma_D3(l)); compare near e and far from e
    const int T = 40;
    for (double eps : {0.02, 0.005}) {
        Coefficients c = d3_blocks(T);
        for (int t = 0; t <= T; ++t) c[t] *= std::exp(-eps * 0.25 * t * (t + 2));
        const double h = 2.0 * std::sqrt(eps);
        const Quaternion near = exp_algebra(algebra_D3(), h);
        const Quaternion far = exp_algebra(algebra_D1(), 2.0);
        const double ratio = std::abs(evaluate(c, far)) / std::abs(evaluate(c, near));
        CHECK(ratio < 1e-3);
    }
}

TEST_CASE("conjugation") {
    const Symbol s = Symbol::left_invariant(random_coefficients(4));
    const Symbol same = conjugate(s, identity_element());
    CHECK(max_abs_difference(same.blocks(), s.blocks(), 4) < 1e-14);
    const Quaternion u = random_element();
    const Symbol d3 = Symbol::left_invariant(d3_blocks(4));
    const Symbol cu = conjugate(d3, u);
    for (int t = 0; t <= 4; ++t) {
        const Eigen::VectorXd s1 = Eigen::JacobiSVD<Matrix>(cu.blocks()[t]).singularValues();
        const Eigen::VectorXd s2 = Eigen::JacobiSVD<Matrix>(d3.blocks()[t]).singularValues();
        CHECK((s1 - s2).norm() < 1e-12);
    }
    Coefficients a(2);
    a[2] = random_matrix(3);
    const Symbol xs = add(s, times_function(a, random_coefficients(4)));
    const Symbol xc = conjugate(xs, u);
    for (int n = 0; n < 4; ++n) {
        const Quaternion x = random_element();
        for (int t = 0; t <= 4; ++t) {
            const Matrix w = wigner(HalfInt(t), u);
            CHECK((xc.at(x, t) - w.adjoint() * xs.at(group_mul(x, group_inv(u)), t) * w).norm() < 1e-10);
            CHECK(std::abs(op_norm(xc.at(x, t)) - op_norm(xs.at(group_mul(x, group_inv(u)), t))) < 1e-10);
        }
    }
}
