#include <doctest.h>

#include "random.hpp"
#include "su2pdo/su2rep.hpp"

using namespace su2pdo;
using namespace su2pdo::testing;

namespace {
constexpr Complex I1{0, 1};

double op_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()(0); }
}  // namespace

TEST_CASE("quat_to_su2 reference values") {
    CHECK((quat_to_su2({1, 0, 0, 0}) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
    Eigen::Matrix2cd z;
    z << I1, 0, 0, -I1;
    CHECK((quat_to_su2({0, 0, 0, 1}) - z).norm() == 0.0);
    CHECK((quat_to_su2({-1, 0, 0, 0}) + Eigen::Matrix2cd::Identity()).norm() == 0.0);
    CHECK_THROWS_AS(quat_to_su2({1, 1, 0, 0}), std::domain_error);
    for (int k = 0; k < 20; ++k) CHECK(std::abs(quat_to_su2(random_element()).determinant() - 1.0) < 1e-12);
}

TEST_CASE("group law matches matrix multiplication") {
    const Quaternion e = identity_element();
    for (int k = 0; k < 50; ++k) {
        const Quaternion a = random_element(), b = random_element();
        const Eigen::Matrix2cd ab = quat_to_su2(a) * quat_to_su2(b);
        CHECK((quat_to_su2(group_mul(a, b)) - ab).norm() < 1e-12);
        CHECK(group_distance(group_mul(a, e), a) < 1e-14);
        CHECK(group_distance(group_mul(a, group_inv(a)), e) < 1e-14);
        CHECK((quat_to_su2(group_inv(a)) - quat_to_su2(a).adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("Euler angles round trip") {
    for (int k = 0; k < 200; ++k) {
        const Quaternion q = random_element();
        const EulerAngles e = to_euler(q);
        CHECK(e.phi >= 0.0);
        CHECK(e.phi < 2 * M_PI);
        CHECK(e.psi >= 0.0);
        CHECK(e.psi < 4 * M_PI);
        CHECK(group_distance(from_euler(e), q) < 1e-10);
    }
    for (const Quaternion q : {Quaternion{1, 0, 0, 0}, Quaternion{-1, 0, 0, 0}, Quaternion{0, 1, 0, 0}})
        CHECK(group_distance(from_euler(to_euler(q)), q) < 1e-12);
}

TEST_CASE("wigner trivial cases and spin one half") {
    const Quaternion g = random_element();
    CHECK(std::abs(wigner(HalfInt(0), g)(0, 0) - 1.0) < 1e-15);
    for (int t = 0; t <= 12; ++t)
        CHECK((wigner(HalfInt(t), identity_element()) - Matrix::Identity(t + 1, t + 1)).norm() < 1e-12);
    for (int k = 0; k < 20; ++k) {
        const Quaternion h = random_element();
        CHECK((wigner(HalfInt(1), h) - quat_to_su2(h)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(wigner(HalfInt(kMaxTwiceEll + 1), g), std::out_of_range);
}

TEST_CASE("wigner unitary and homomorphic up to ell 32") {
    for (int t : {2, 3, 7, 16, 31, 48, 63, 64}) {
        for (int k = 0; k < 3; ++k) {
            const Quaternion x = random_element(), y = random_element();
            const Matrix tx = wigner(HalfInt(t), x), ty = wigner(HalfInt(t), y);
            const Matrix d = Matrix::Identity(t + 1, t + 1);
            CHECK(op_norm(tx.adjoint() * tx - d) < 1e-11);
            CHECK(op_norm(wigner(HalfInt(t), group_mul(x, y)) - tx * ty) < 1e-10);
        }
    }
}

TEST_CASE("factorial-sum polynomial agrees with the Euler route") {
    for (int t = 0; t <= 8; ++t) {
        const Quaternion g = random_element();
        const Matrix w = wigner(HalfInt(t), g);
        const Eigen::Matrix2cd u = quat_to_su2(g);
        double err = 0;
        for (int a = 0; a <= t; ++a)
            for (int b = 0; b <= t; ++b)
                err = std::max(err, std::abs(wigner_polynomial(t, m_twice(t, a), m_twice(t, b)).evaluate(u) - w(a, b)));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("algebra_rep is the derivative of wigner") {
    const double h = 1e-5;
    for (const Eigen::Matrix2cd& x : {algebra_D1(), algebra_D2(), algebra_D3()})
        for (int t : {1, 2, 5}) {
            const Matrix fd = (wigner(HalfInt(t), exp_algebra(x, h)) - wigner(HalfInt(t), exp_algebra(x, -h))) / (2 * h);
            CHECK((fd - algebra_rep(t, x)).norm() < 1e-8);
        }
    // dpi is a Lie algebra homomorphism
    for (int t : {1, 4, 9}) {
        const Eigen::Matrix2cd a = algebra_dplus(), b = algebra_dminus();
        const Matrix lhs = algebra_rep(t, a) * algebra_rep(t, b) - algebra_rep(t, b) * algebra_rep(t, a);
        CHECK((lhs - algebra_rep(t, a * b - b * a)).norm() < 1e-12);
    }
}

TEST_CASE("CG table is orthogonal") {
    for (int t = 0; t <= 40; ++t) {
        const Eigen::MatrixXd c = cg_table(t);
        const int n = t == 0 ? 2 : 2 * (t + 1);
        CHECK((c.topLeftCorner(n, n).transpose() * c.topLeftCorner(n, n) - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
    }
}

TEST_CASE("expand_product") {
    // ell = 0: single term with coefficient 1
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto terms = expand_product(0, i, j, 0, 0);
            REQUIRE(terms.size() == 1);
            CHECK(terms[0].twice_ell == 1);
            CHECK(std::abs(terms[0].coeff - 1.0) < 1e-15);
        }
    for (int k = 0; k < 40; ++k) {
        const int t = uniform_int(0, 12), i = uniform_int(0, 1), j = uniform_int(0, 1);
        const int tm = m_twice(t, uniform_int(0, t)), tn = m_twice(t, uniform_int(0, t));
        const auto terms = expand_product(t, i, j, tm, tn);
        for (int p = 0; p < 20; ++p) {
            const Quaternion x = random_element();
            const Complex lhs = quat_to_su2(x)(i, j) * wigner(HalfInt(t), x)(m_index(t, tm), m_index(t, tn));
            Complex rhs = 0;
            for (const auto& term : terms)
                rhs += term.coeff * wigner(HalfInt(term.twice_ell), x)(m_index(term.twice_ell, term.twice_m),
                                                                        m_index(term.twice_ell, term.twice_n));
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("multiply_by_entry matches pointwise multiplication") {
    const Coefficients g = random_coefficients(5);
    auto eval = [](const Coefficients& c, const Quaternion& x) {
        Complex s = 0;
        for (int t = 0; t <= c.twice_max(); ++t) s += double(t + 1) * (wigner(HalfInt(t), x) * c[t]).trace();
        return s;
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Coefficients h = multiply_by_entry(g, i, j, 6);
            for (int p = 0; p < 5; ++p) {
                const Quaternion x = random_element();
                CHECK(std::abs(eval(h, x) - quat_to_su2(x)(i, j) * eval(g, x)) < 1e-10);
            }
        }
}

TEST_CASE("entry polynomial conjugation") {
    const EntryPolynomial p = wigner_polynomial(3, 1, -1);
    for (int k = 0; k < 10; ++k) {
        const Eigen::Matrix2cd u = quat_to_su2(random_element());
        CHECK(std::abs(conjugate_entries(p).evaluate(u) - p.evaluate(u.conjugate())) < 1e-12);
    }
}
