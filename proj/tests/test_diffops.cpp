#include <doctest.h>

#include "random.hpp"
#include "su2pdo/diffops.hpp"

using namespace su2pdo;
using namespace su2pdo::testing;

namespace {

constexpr Complex I1{0, 1};

Symbol field(const Eigen::Matrix2cd& x, int T) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t) c[t] = algebra_rep(t, x);
    return Symbol::left_invariant(c);
}

Symbol laplacian(int T) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t) c[t] = -0.25 * t * (t + 2) * Matrix::Identity(t + 1, t + 1);
    return Symbol::left_invariant(c);
}

Symbol diag_symbol(int T, const std::function<Complex(double, double)>& f) {
    Coefficients c(T);
    for (int t = 0; t <= T; ++t)
        for (int a = 0; a <= t; ++a) c[t](a, a) = f(0.5 * t, 0.5 * m_twice(t, a));
    return Symbol::left_invariant(c);
}

double gap(const Symbol& a, const Symbol& b) {
    const int T = std::min(a.reliable_twice(), b.reliable_twice());
    return max_abs_difference(a.blocks(), b.blocks(), T);
}

Symbol lin(std::initializer_list<std::pair<Complex, Symbol>> parts) {
    Symbol r = scale(parts.begin()->second, parts.begin()->first);
    for (auto it = parts.begin() + 1; it != parts.end(); ++it) r = add(r, scale(it->second, it->first));
    return r;
}

Symbol random_band_limited(int T) { return Symbol::left_invariant(random_coefficients(T)); }

}  // namespace

TEST_CASE("builtin differences and their orders") {
    for (const char* k : {"D11", "D12", "D21", "D22", "tri+", "tri-", "tri0"}) {
        const DifferenceOp d = difference(k);
        CHECK(d.order == 1);
        CHECK(d.valid());
        CHECK(d.width() == 1);
    }
    const DifferenceOp sum = make_difference(D(1, 1).q + D(2, 2).q);
    CHECK(sum.order == 2);
    const DifferenceOp z = make_difference(EntryPolynomial{});
    CHECK(z.zero);
    const DifferenceOp bad = make_difference(EntryPolynomial::entry(0, 0));
    CHECK(bad.order == 0);
    CHECK(!bad.valid());
    CHECK_THROWS(difference("D33"));
    // q given by Fourier coefficients: q_minus = t^{1/2}_{-1/2,+1/2}
    Coefficients qm(1);
    qm[1](1, 0) = 0.5;  // f = 2 * t_{01} * c_{10}
    const DifferenceOp dm = make_difference(qm, "from coefficients");
    const Symbol s = random_band_limited(6);
    CHECK(gap(apply(dm, s), apply(D(1, 2), s)) < 1e-13);
}

TEST_CASE("differences agree with the function-space oracle") {
    const int T = 6;
    const Coefficients sigma = random_coefficients(T);
    const QuadratureGrid g = build_grid(HalfInt(T + 2));
    const GroupFunction r = inverse(sigma, g);
    std::vector<DifferenceOp> ops = family("qij");
    for (const auto& d : family("tri")) ops.push_back(d);
    ops.push_back(make_difference(D(1, 2).q * D(2, 1).q + D(1, 1).q * EntryPolynomial::constant(I1), "mixed"));
    for (const auto& d : ops) {
        GroupFunction qr = r;
        for (int i = 0; i < g.size(); ++i) qr.samples(i) *= d.q.evaluate(quat_to_su2(g.point(i)));
        const Coefficients oracle = forward(qr, HalfInt(T + 2));
        const Symbol ap = apply(d, Symbol::left_invariant(sigma));
        CHECK(ap.reliable_twice() == T - d.width());
        CHECK(max_abs_difference(ap.blocks(), oracle, ap.reliable_twice()) < 1e-10);
    }
}

TEST_CASE("difference table for vector fields and the Laplacian") {
    const int T = 22;
    const Symbol s0 = field(algebra_d0(), T), sp = field(algebra_dplus(), T), sm = field(algebra_dminus(), T);
    const Symbol L = laplacian(T), id = identity_symbol(T);
    const Symbol zero = scale(id, 0.0);
    // columns sigma_d0, sigma_d+, sigma_d-
    CHECK(gap(apply(D(1, 1), s0), scale(id, 0.5)) < 1e-10);
    CHECK(gap(apply(D(1, 1), sp), zero) < 1e-10);
    CHECK(gap(apply(D(1, 1), sm), zero) < 1e-10);
    CHECK(gap(apply(D(1, 2), s0), zero) < 1e-10);
    CHECK(gap(apply(D(1, 2), sp), id) < 1e-10);
    CHECK(gap(apply(D(1, 2), sm), zero) < 1e-10);
    CHECK(gap(apply(D(2, 1), s0), zero) < 1e-10);
    CHECK(gap(apply(D(2, 1), sp), zero) < 1e-10);
    CHECK(gap(apply(D(2, 1), sm), id) < 1e-10);
    CHECK(gap(apply(D(2, 2), s0), scale(id, -0.5)) < 1e-10);
    CHECK(gap(apply(D(2, 2), sp), zero) < 1e-10);
    CHECK(gap(apply(D(2, 2), sm), zero) < 1e-10);
    // Laplacian column
    CHECK(gap(apply(D(1, 2), L), scale(sm, -1.0)) < 1e-10);
    CHECK(gap(apply(D(2, 1), L), scale(sp, -1.0)) < 1e-10);
    // diagonal entries forced by the finite Leibniz rule: -/+ sigma_d0 - 3/4
    CHECK(gap(apply(D(1, 1), L), lin({{-1.0, s0}, {-0.75, id}})) < 1e-10);
    CHECK(gap(apply(D(2, 2), L), lin({{1.0, s0}, {-0.75, id}})) < 1e-10);
    // D_ij sigma_X = -dpi_{1/2}(X)_ij I
    for (const auto& x : {algebra_D1(), algebra_D2(), algebra_D3()})
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) CHECK(gap(apply(D(i, j), field(x, T)), scale(id, -x(i - 1, j - 1))) < 1e-10);
}

TEST_CASE("relations between the difference families") {
    const Symbol s = random_band_limited(8);
    CHECK(gap(apply(difference("tri-"), s), apply(D(1, 2), s)) < 1e-12);
    CHECK(gap(apply(difference("tri+"), s), apply(D(2, 1), s)) < 1e-12);
    CHECK(gap(apply(difference("tri0"), s), add(apply(D(1, 1), s), scale(apply(D(2, 2), s), -1.0))) < 1e-12);
    // composition of differences is the difference of the product
    const DifferenceOp a = D(1, 2), b = D(1, 1);
    CHECK(gap(apply(a, apply(b, s)), apply(make_difference(a.q * b.q), s)) < 1e-10);
    // any difference kills the identity symbol
    for (const auto& d : family("qij")) CHECK(apply(d, identity_symbol(8)).blocks()[3].norm() < 1e-12);
}

TEST_CASE("first-order differences commute") {
    const Symbol s = random_band_limited(10);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            const DifferenceOp a = D(p / 2 + 1, p % 2 + 1), b = D(q / 2 + 1, q % 2 + 1);
            CHECK(gap(apply(a, apply(b, s)), apply(b, apply(a, s))) < 1e-10);
        }
}

TEST_CASE("finite Leibniz formula") {
    const int T = 16;
    const Symbol a = diag_symbol(T, [](double, double m) { return -I1 * m; });
    const Symbol b = diag_symbol(T, [](double l, double m) { return m * m - l * (l + 1); });
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            const Symbol r = leibniz_residual(a, b, i, j);
            CHECK(r.blocks()[r.reliable_twice()].norm() < 1e-10);
            const Symbol ri = leibniz_residual(identity_symbol(T), identity_symbol(T), i, j);
            CHECK(ri.blocks()[5].norm() < 1e-14);
        }
    for (int n = 0; n < 10; ++n) {
        const Symbol x = random_band_limited(16), y = random_band_limited(16);
        const int i = uniform_int(1, 2), j = uniform_int(1, 2);
        const Symbol r = leibniz_residual(x, y, i, j);
        double e = 0;
        for (int t = 0; t <= r.reliable_twice(); ++t) e = std::max(e, r.blocks()[t].cwiseAbs().maxCoeff());
        CHECK(e < 1e-9);
        const Symbol rt = leibniz_residual(x, y, i, j, LeibnizForm::kTransposed);
        CHECK(rt.blocks()[4].norm() > 1e-3);
    }
}

TEST_CASE("grand differences and the second order Leibniz bookkeeping") {
    const Symbol s = random_band_limited(10);
    CHECK(gap(grand_difference({1}, {2}, s), apply(D(1, 2), s)) < 1e-15);
    CHECK(gap(grand_difference({1, 1}, {1, 2}, s), grand_difference({1, 1}, {2, 1}, s)) < 1e-10);
    const std::vector<int> alpha{1, 2}, beta{2, 2};
    const auto terms = leibniz_expansion(alpha, beta);
    for (const auto& t : terms) {
        int e = 0, d = 0;
        for (int k = 0; k < 4; ++k) {
            e += t.eps[k];
            d += t.delta[k];
        }
        CHECK(e <= 2);
        CHECK(d <= 2);
        CHECK(e + d >= 2);
    }
    const Symbol a = random_band_limited(12), b = random_band_limited(12);
    const Symbol lhs = grand_difference(alpha, beta, multiply(a, b));
    Symbol rhs = scale(lhs, 0.0);
    for (const auto& t : terms) rhs = add(rhs, scale(multiply(apply_multi(t.eps, a), apply_multi(t.delta, b)), double(t.coeff)));
    CHECK(gap(lhs, rhs) < 1e-9);
}

TEST_CASE("differences lower the decay order of differential symbols") {
    const int T = 40;
    const Symbol L = laplacian(T);
    const Symbol dl = apply(D(1, 2), L);
    const Symbol ddl = apply(D(1, 2), dl);
    // |D12 L| grows like ell, second difference is bounded
    const double r1 = op_norm(dl.blocks()[36]) / op_norm(dl.blocks()[18]);
    CHECK(r1 < 2.2);
    CHECK(op_norm(ddl.blocks()[36]) < 1e-10);
}

TEST_CASE("D11 of the inverse of D3 + c") {
    const int T = 20;
    const Complex c(0.3, 0.1);
    auto inv = [&](Complex shift) {
        return diag_symbol(T, [=](double, double m) { return 1.0 / (c + shift - I1 * m); });
    };
    const Symbol s = inv(0.0);
    // D11 shifts m by +1/2, so the shift enters through -im as c - i/2
    CHECK(gap(apply(D(1, 1), s), scale(multiply(s, inv(-0.5 * I1)), 0.5 * I1)) < 1e-10);
    CHECK(gap(apply(D(2, 2), s), scale(multiply(s, inv(0.5 * I1)), -0.5 * I1)) < 1e-10);
    // the real-shift form -1/2 s (D3+c+1/2)^{-1} is off by O(1)
    CHECK(gap(apply(D(1, 1), s), scale(multiply(s, inv(0.5)), -0.5)) > 1e-2);
    CHECK(apply(D(1, 2), s).blocks()[10].norm() < 1e-14);
    CHECK(apply(D(2, 1), s).blocks()[10].norm() < 1e-14);
}

TEST_CASE("Taylor frames") {
    const TaylorFrame f1 = taylor_frame(family("tri"), 1);
    REQUIRE(f1.multi_indices.size() == 1);
    const Coefficients fc = random_coefficients(3);
    const Quaternion x = random_element();
    CHECK(std::abs(f1.taylor_polynomial(fc, x) - evaluate(fc, identity_element())) < 1e-12);

    for (int N : {2, 3}) {
        const TaylorFrame f = taylor_frame(family("tri"), N);
        // defining property on the generating monomials
        for (const auto& a : f.multi_indices)
            for (const auto& b : f.multi_indices) {
                EntryPolynomial p = EntryPolynomial::constant(1.0);
                for (std::size_t j = 0; j < b.size(); ++j)
                    for (int r = 0; r < b[j]; ++r) p = p * f.family[j].q;
                const Complex v = f.apply(a, polynomial_coefficients(p), identity_element());
                CHECK(std::abs(v - (a == b ? factorial_of(a) : 0.0)) < 1e-10);
            }
    }
    // remainder of t^{1/2}_{11} is O(h^2) for N = 2
    Coefficients t11(1);
    t11[1](1, 1) = 0.5;  // f = t_{11}
    const TaylorFrame f2 = taylor_frame(family("tri"), 2);
    std::vector<double> lh, lr;
    for (double h : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        double worst = 0;
        for (int k = 0; k < 8; ++k) {
            const Quaternion y = near_identity(h);
            worst = std::max(worst, std::abs(evaluate(t11, y) - f2.taylor_polynomial(t11, y)));
        }
        lh.push_back(std::log(h));
        lr.push_back(std::log(worst));
    }
    const double slope = (lr.back() - lr.front()) / (lh.back() - lh.front());
    CHECK(slope >= 1.8);
    // the redundant q_ij family drops q22
    const TaylorFrame fq = taylor_frame(family("qij"), 2);
    CHECK(fq.used == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(taylor_frame({D(1, 1), D(2, 2)}, 2), std::invalid_argument);
}

TEST_CASE("admissibility reports") {
    const AdmissibilityReport tri = admissibility_report(family("tri"));
    CHECK(tri.admissible);
    CHECK(!tri.strongly_admissible);
    REQUIRE(tri.common_zeros.size() == 2);
    bool has_minus_e = false;
    for (const auto& z : tri.common_zeros) has_minus_e = has_minus_e || group_distance(z, {-1, 0, 0, 0}) < 1e-6;
    CHECK(has_minus_e);
    const AdmissibilityReport q = admissibility_report(family("qij"));
    CHECK(q.admissible);
    CHECK(q.strongly_admissible);
    CHECK(q.rank == 3);
    const AdmissibilityReport two = admissibility_report({D(1, 1), D(1, 2)});
    CHECK(!two.admissible);
}
