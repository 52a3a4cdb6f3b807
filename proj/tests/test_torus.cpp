#include <doctest.h>

#include <numbers>

#include "su2pdo/torus.hpp"

using namespace su2pdo;
using namespace su2pdo::torus;

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

Complex ipow(Complex z, int k) {
    Complex r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

}  // namespace

TEST_CASE("forward differences") {
    const TorusSymbol a = sample(1, 20, [](const Index& xi) { return Complex(0.0, double(xi[0])); });
    const TorusSymbol d = torus_difference(a, 0);
    for (long long x = -20; x < 20; ++x) CHECK(d.at({x, 0}) == Complex(0.0, 1.0));
    CHECK(d.hi[0] == 19);
    const TorusSymbol c = torus_difference(sample(2, 5, [](const Index&) { return Complex(3.0); }), 1);
    for (const Complex& v : c.values) CHECK(v == Complex(0.0));
}

TEST_CASE("orders of d/dx + c and 1 + xi^2") {
    TorusExpression e;
    e.terms[{1, 0}] = 1.0;
    e.terms[{0, 0}] = Complex(0.5, 1.0);
    const TorusFit f = torus_fit(torus_symbol(e, 200), 3);
    CHECK(f.m == doctest::Approx(1.0).epsilon(0.02));
    CHECK(f.rho == doctest::Approx(1.0).epsilon(0.02));
    CHECK(f.slopes[2].vanishing);

    const TorusFit g = torus_fit(sample(1, 200, [](const Index& xi) { return Complex(1.0 + double(xi[0] * xi[0])); }), 2);
    CHECK(g.m == doctest::Approx(2.0).epsilon(0.02));
    CHECK(g.rho == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("2-D Laplacian") {
    TorusExpression e;
    e.dim = 2;
    e.terms[{2, 0}] = 1.0;
    e.terms[{0, 2}] = 1.0;
    const TorusFit f = torus_fit(torus_symbol(e, 60), 2);
    CHECK(f.m == doctest::Approx(2.0).epsilon(0.02));
    CHECK(f.rho == doctest::Approx(1.0).epsilon(0.05));
    CHECK(f.slopes.size() == 6);
}

TEST_CASE("torus family is strongly admissible") {
    for (int d : {1, 2}) {
        const TorusAdmissibility r = torus_admissibility(d);
        CHECK(r.strongly_admissible);
        CHECK(r.common_zeros.size() == 1);
    }
}

TEST_CASE("Taylor frame on the circle") {
    const TorusTaylor t1 = torus_taylor(2);
    // d^{(1)} = (2 pi i)^{-1} d/dx at first order
    CHECK(std::abs(t1.coeff(1, 1) - 1.0 / kTwoPiI) < 1e-12);
    auto f = [](double x) { return std::exp(3.0 * kTwoPiI * x) + 2.0 * std::exp(-kTwoPiI * x); };
    for (int N : {2, 3, 4}) {
        std::vector<Complex> der;
        for (int j = 0; j < N; ++j) der.push_back(ipow(3.0 * kTwoPiI, j) + 2.0 * ipow(-kTwoPiI, j));
        const TorusTaylor t = torus_taylor(N);
        const double e1 = std::abs(f(1e-2) - torus_taylor_polynomial(t, der, 1e-2));
        const double e2 = std::abs(f(1e-3) - torus_taylor_polynomial(t, der, 1e-3));
        CAPTURE(N);
        CHECK(std::log10(e1 / e2) == doctest::Approx(double(N)).epsilon(0.05));
    }
}
