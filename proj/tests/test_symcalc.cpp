#include <doctest.h>

#include "random.hpp"
#include "su2pdo/symcalc.hpp"

using namespace su2pdo;
using namespace su2pdo::testing;

namespace {

constexpr Complex I1{0, 1};

Symbol diag_symbol(int T, const std::function<Complex(double, double)>& f) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a) c[t](a, a) = f(0.5 * t, 0.5 * m_twice(t, a));
    return Symbol::left_invariant(c);
}

// sigma(x) = sum_k f_k(x) b_k with random f_k of band twice_band
Symbol random_x_symbol(int T, int twice_band, int terms) {
    std::vector<SymbolTerm> out;
    for (int k = 0; k < terms; ++k) out.push_back({random_coefficients(twice_band), random_coefficients(T)});
    return Symbol::x_dependent(std::move(out));
}

double max_gap(const Symbol& a, const Symbol& b, const Quaternion& x, int top) {
    double g = 0.0;
    for (int t = 0; t <= top; ++t) g = std::max(g, (a.at(x, t) - b.at(x, t)).cwiseAbs().maxCoeff());
    return g;
}

}  // namespace

TEST_CASE("exact composition of left-invariant symbols") {
    const int T = 8;
    const Symbol d3 = diag_symbol(T, [](double, double m) { return -I1 * m; });
    const Symbol d3sq = compose_exact(d3, d3);
    const Symbol expect = diag_symbol(T, [](double, double m) { return Complex(-m * m); });
    CHECK((d3sq.blocks() - expect.blocks())[T].norm() < 1e-14);
    const Symbol b = Symbol::left_invariant(random_coefficients(T));
    CHECK((compose_exact(identity_symbol(T), b).blocks()[5] - b.blocks()[5]).norm() < 1e-15);
    CHECK_THROWS(compose_exact(random_x_symbol(3, 1, 1), b));
}

TEST_CASE("compose_exact_at reproduces the operator product") {
    const Symbol a = random_x_symbol(8, 1, 2), b = random_x_symbol(8, 1, 2);
    const QuadratureGrid g = build_grid(HalfInt(4));
    const Coefficients f = random_coefficients(3);
    const GroupFunction bf = quantize(b, f, g);
    const GroupFunction abf = quantize(a, forward(bf, HalfInt(4)), g);
    double gap = 0.0;
    for (int n = 0; n < 6; ++n) {
        const int node = uniform_int(0, int(g.size()) - 1);
        const Quaternion x = g.point(node);
        Complex v = 0.0;
        for (int t = 0; t <= 3; ++t) v += double(t + 1) * (wigner(HalfInt(t), x) * compose_exact_at(a, b, x, t) * f[t]).trace();
        gap = std::max(gap, std::abs(v - abf.samples(node)));
    }
    CHECK(gap < 1e-9);
}

TEST_CASE("differential composition and the asymptotic expansion") {
    const Coefficients a1 = random_coefficients(1);
    const DifferentialExpression A =
        a1 * (vector_field(algebra_D1()) * vector_field(algebra_D2())) + vector_field(algebra_D3());
    CHECK(A.order() == 2);
    const Symbol sa = A.symbol(12);
    const Symbol b = random_x_symbol(12, 1, 2);
    const Symbol direct = compose_differential(A, b);
    const Quaternion x = random_element();
    double gap = 0.0;
    for (int t = 0; t <= 6; ++t) gap = std::max(gap, (direct.at(x, t) - compose_exact_at(sa, b, x, t)).cwiseAbs().maxCoeff());
    CHECK(gap < 1e-10);

    // differences of order 3 annihilate a second-order symbol, so N = 3 is exact
    const TaylorFrame frame = taylor_frame(family("qij"), 3);
    const Symbol asym = compose_asymptotic(sa, b, 3, frame);
    CHECK(max_gap(asym, direct, x, std::min(6, asym.reliable_twice())) < 1e-9);
    const Symbol plain = compose_asymptotic(sa, b, 3, frame, FrameDerivative::kPlain);
    CHECK(max_gap(plain, direct, x, 6) > 1e-3);
}

TEST_CASE("commutator with a vector field on the symbolic level") {
    const Symbol a = random_x_symbol(10, 1, 2);
    for (const auto& xf : {algebra_D1(), algebra_D2(), algebra_D3()}) {
        const Quaternion x = random_element();
        CHECK(commutator_identity_gap(xf, a, x, 6) < 1e-10);
    }
}

namespace {

Symbol sublaplacian(int T) {
    return diag_symbol(T, [](double l, double m) { return Complex(m * m - l * (l + 1)); });
}

DifferentialExpression field(const Eigen::Matrix2cd& x) { return vector_field(x); }

}  // namespace

TEST_CASE("symbol inversion") {
    const Inversion inv = invert_symbol(sublaplacian(12));
    REQUIRE(inv.singular_twice == std::vector<int>{0});
    const Matrix b = inv.inverse.blocks()[2];
    CHECK(std::abs(b(0, 0) + 1.0) < 1e-15);
    CHECK(std::abs(b(1, 1) + 0.5) < 1e-15);
    CHECK(std::abs(b(2, 2) + 1.0) < 1e-15);
    const Symbol s = sublaplacian(12);
    const Symbol prod = compose_exact(s, inv.inverse);
    for (int t = 1; t <= 12; ++t) CHECK((prod.blocks()[t] - Matrix::Identity(t + 1, t + 1)).norm() < 1e-13);
    // D3 + c with ic in Z/2: the block containing m = -ic is singular
    const Complex c(0.0, -1.0);  // ic = 1
    const Inversion d3 = invert_symbol(diag_symbol(12, [c](double, double m) { return c - I1 * m; }));
    for (int t : d3.singular_twice) CHECK(t % 2 == 0);
    CHECK(d3.singular_twice.size() == 6);  // ell = 1..6
}

TEST_CASE("ellipticity") {
    const Symbol lap = diag_symbol(64, [](double l, double) { return Complex(-l * (l + 1)); });
    const EllipticityReport el = ellipticity_check(lap, 2.0);
    CHECK(el.elliptic);
    CHECK(el.constant < 1.02);  // <ell>^2 / (ell(ell+1)) at the window start
    CHECK_FALSE(ellipticity_check(sublaplacian(64), 2.0).elliptic);
    CHECK(ellipticity_check(sublaplacian(64), 1.0).elliptic);
    const DifferentialExpression P = field(algebra_D1()) * field(algebra_D1()) - field(algebra_D2()) * field(algebra_D2());
    const EllipticityReport ep = ellipticity_check(P.symbol(40), 2.0);
    CHECK_FALSE(ep.elliptic);
    // P is invertible only for ell + 1/2 in 2N_0
    for (int t : ep.singular_twice) CHECK((t + 1) % 4 != 0);
}

TEST_CASE("hypoellipticity of the sub-Laplacian and of the heat operator") {
    const auto fam = family("qij");
    const HypoReport ls = hypoellipticity_check(sublaplacian(64), 2, 1, 0.5, 0, fam);
    CHECK(ls.verdict);
    CHECK(ls.invertible_from == HalfInt(1));
    CHECK(ls.m0_fit == doctest::Approx(1.0).epsilon(0.1));
    const Symbol heat = diag_symbol(64, [](double l, double m) { return -I1 * m - m * m + l * (l + 1); });
    CHECK(hypoellipticity_check(heat, 2, 1, 0.5, 0, fam).verdict);
    const Symbol schr = diag_symbol(64, [](double l, double m) { return Complex(-m - m * m + l * (l + 1)); });
    const HypoReport s = hypoellipticity_check(schr, 2, 1, 0.5, 0, fam);
    CHECK_FALSE(s.verdict);
    CHECK(s.singular_twice.size() > 3);
}

TEST_CASE("symbol class fits") {
    const auto fam = family("qij");
    const ClassFit ls = fit_symbol_class(sublaplacian(64), fam, 2);
    CHECK(ls.m == doctest::Approx(2.0).epsilon(0.05));
    CHECK(ls.rho == doctest::Approx(1.0).epsilon(0.15));
    const Complex c(0.3, 0.1);
    const ClassFit d3 = fit_symbol_class(diag_symbol(64, [c](double, double m) { return 1.0 / (c - I1 * m); }), fam, 2);
    CHECK(std::abs(d3.m) < 0.1);
    CHECK(std::abs(d3.rho) < 0.1);
    const ClassFit id = fit_symbol_class(identity_symbol(32), fam, 2);
    CHECK(std::abs(id.m) < 1e-12);
    for (std::size_t k = 1; k < id.slopes.size(); ++k) CHECK(id.slopes[k].vanishing);
    const ClassFit inv = fit_symbol_class(invert_symbol(sublaplacian(64)).inverse, fam, 1);
    CHECK(inv.m == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(inv.rho == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("off-diagonal decay") {
    const DifferentialExpression P = field(algebra_D1()) * field(algebra_D1()) - field(algebra_D2()) * field(algebra_D2());
    const DecayReport dp = offdiag_decay_check(P.symbol(32), 4);
    CHECK(dp.band == 2);
    CHECK(dp.banded);
    CHECK(dp.decays);
    const DecayReport d3 = offdiag_decay_check(field(algebra_D3()).symbol(32), 4);
    CHECK(d3.band == 0);
    const DecayReport rnd = offdiag_decay_check(Symbol::left_invariant(random_coefficients(32)), 6);
    CHECK_FALSE(rnd.banded);
    CHECK_FALSE(rnd.decays);
}

namespace {

DifferentialExpression laplacian_expression() {
    const DifferentialExpression d1 = vector_field(algebra_D1()), d2 = vector_field(algebra_D2()),
                                 d3 = vector_field(algebra_D3());
    return d1 * d1 + d2 * d2 + d3 * d3;
}

}  // namespace

TEST_CASE("laplacian expression has the diagonal symbol") {
    const Symbol s = laplacian_expression().symbol(10);
    for (int t = 0; t <= 10; ++t) {
        const double l = 0.5 * t;
        CHECK((s.blocks()[t] + l * (l + 1) * Matrix::Identity(t + 1, t + 1)).norm() < 1e-12);
    }
}

TEST_CASE("parametrix of L + a(x) D3") {
    Coefficients a = random_coefficients(2);
    a = Complex(0.05) * a;
    const DifferentialExpression A = laplacian_expression() + a * vector_field(algebra_D3());
    ParametrixOptions opt;
    opt.terms = 3;
    opt.points = {random_element(), random_element()};
    for (int t = 16; t <= 48; t += 4) opt.twice_ells.push_back(t);
    const ParametrixResult r = parametrix(A, taylor_frame(family("qij"), 4), opt);
    for (int k = 0; k <= 3; ++k) MESSAGE("N=" << k << " order " << r.residual_order[k]);
    for (int k = 1; k <= 3; ++k) CHECK(r.residual_order[k - 1] - r.residual_order[k] == doctest::Approx(1.0).epsilon(0.3));
}
