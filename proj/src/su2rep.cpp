#include "su2pdo/su2rep.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace su2pdo {

namespace {

constexpr Complex I1{0.0, 1.0};

void check_twice(int twice_ell) {
    if (twice_ell < 0) throw std::invalid_argument("negative representation index");
    if (twice_ell > kMaxTwiceEll)
        throw std::out_of_range("wigner: 2*ell = " + std::to_string(twice_ell) +
                                " exceeds validated range " + std::to_string(kMaxTwiceEll));
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

Quaternion identity_element() { return {1, 0, 0, 0}; }

Quaternion normalized(const Quaternion& q) {
    const double n = std::sqrt(q.x0 * q.x0 + q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3);
    return {q.x0 / n, q.x1 / n, q.x2 / n, q.x3 / n};
}

bool is_unit(const Quaternion& q, double tol) {
    const double n2 = q.x0 * q.x0 + q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3;
    return std::abs(n2 - 1.0) <= tol;
}

Eigen::Matrix2cd quat_to_su2(const Quaternion& q) {
    if (!is_unit(q)) throw std::domain_error("quat_to_su2: quaternion is not a unit vector");
    Eigen::Matrix2cd u;
    u << Complex(q.x0, q.x3), Complex(q.x1, q.x2), Complex(-q.x1, q.x2), Complex(q.x0, -q.x3);
    return u;
}

Quaternion su2_to_quat(const Eigen::Matrix2cd& u) {
    return {u(0, 0).real(), u(0, 1).real(), u(0, 1).imag(), u(0, 0).imag()};
}

Quaternion group_mul(const Quaternion& a, const Quaternion& b) {
    return su2_to_quat(quat_to_su2(a) * quat_to_su2(b));
}

Quaternion group_inv(const Quaternion& a) { return {a.x0, -a.x1, -a.x2, -a.x3}; }

double group_distance(const Quaternion& a, const Quaternion& b) {
    return (quat_to_su2(normalized(a)) - quat_to_su2(normalized(b))).norm();
}

Quaternion from_euler(const EulerAngles& e) {
    const double c = std::cos(0.5 * e.theta), s = std::sin(0.5 * e.theta);
    const Complex a = c * std::exp(I1 * (0.5 * (e.phi + e.psi)));
    const Complex b = -s * std::exp(I1 * (0.5 * (e.phi - e.psi)));
    return {a.real(), b.real(), b.imag(), a.imag()};
}

EulerAngles to_euler(const Quaternion& q) {
    constexpr double pi = std::numbers::pi;
    const Complex a(q.x0, q.x3), b(q.x1, q.x2);
    const double c = std::abs(a), s = std::abs(b);
    EulerAngles e;
    e.theta = 2.0 * std::atan2(s, c);
    const double sum = c > 1e-300 ? 2.0 * std::arg(a) : 0.0;
    const double diff = s > 1e-300 ? 2.0 * std::arg(-b) : 0.0;
    double phi = 0.5 * (sum + diff), psi = 0.5 * (sum - diff);
    const double k = std::floor(phi / (2 * pi));
    phi -= 2 * pi * k;
    psi -= 2 * pi * k;
    psi = std::fmod(psi, 4 * pi);
    if (psi < 0) psi += 4 * pi;
    if (phi >= 2 * pi) phi = 0.0;
    if (psi >= 4 * pi) psi = 0.0;
    e.phi = phi;
    e.psi = psi;
    return e;
}

Quaternion exp_algebra(const Eigen::Matrix2cd& x, double t) {
    const Complex w = std::sqrt(x.determinant());
    Eigen::Matrix2cd e;
    if (std::abs(w) * std::abs(t) < 1e-8)
        e = Eigen::Matrix2cd::Identity() + t * x + 0.5 * t * t * x * x;
    else
        e = std::cos(w * t) * Eigen::Matrix2cd::Identity() + (std::sin(w * t) / w) * x;
    return normalized(su2_to_quat(e));
}

Eigen::Matrix2cd algebra_d0() {
    Eigen::Matrix2cd x = Eigen::Matrix2cd::Zero();
    x(0, 0) = -0.5;
    x(1, 1) = 0.5;
    return x;
}

Eigen::Matrix2cd algebra_dplus() {
    Eigen::Matrix2cd x = Eigen::Matrix2cd::Zero();
    x(0, 1) = -1.0;
    return x;
}

Eigen::Matrix2cd algebra_dminus() {
    Eigen::Matrix2cd x = Eigen::Matrix2cd::Zero();
    x(1, 0) = -1.0;
    return x;
}

Eigen::Matrix2cd algebra_letter(int letter) {
    switch (letter) {
        case kPlus: return algebra_dplus();
        case kMinus: return algebra_dminus();
        case kZero: return algebra_d0();
    }
    throw std::invalid_argument("unknown frame letter");
}

Eigen::Matrix2cd algebra_D1() { return (-0.5 * I1) * (algebra_dminus() + algebra_dplus()); }
Eigen::Matrix2cd algebra_D2() { return 0.5 * (algebra_dminus() - algebra_dplus()); }
Eigen::Matrix2cd algebra_D3() { return -I1 * algebra_d0(); }

Matrix algebra_rep(int twice_ell, const Eigen::Matrix2cd& x) {
    const int t = twice_ell, d = t + 1;
    Matrix r = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        // ell - m = t - k, ell + m = k
        r(k, k) = double(t - k) * x(0, 0) + double(k) * x(1, 1);
        if (k + 1 < d) r(k + 1, k) = x(1, 0) * std::sqrt(double(t - k) * (k + 1));
        if (k > 0) r(k - 1, k) = x(0, 1) * std::sqrt(double(k) * (t - k + 1));
    }
    return r;
}

Matrix word_rep(int twice_ell, const std::vector<int>& word) {
    Matrix r = Matrix::Identity(twice_ell + 1, twice_ell + 1);
    for (int letter : word) r = r * algebra_rep(twice_ell, algebra_letter(letter));
    return r;
}

WignerSmallD::WignerSmallD(int twice_ell) : twice_(twice_ell) {
    check_twice(twice_ell);
    Eigen::Matrix2cd y = Eigen::Matrix2cd::Zero();
    y(0, 1) = -0.5;
    y(1, 0) = 0.5;
    const Matrix h = I1 * algebra_rep(twice_ell, y);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    vecs_ = es.eigenvectors();
    vals_ = es.eigenvalues();
}

Eigen::MatrixXd WignerSmallD::operator()(double theta) const {
    Vector ph(vals_.size());
    for (int k = 0; k < vals_.size(); ++k) ph(k) = std::exp(-I1 * (theta * vals_(k)));
    return (vecs_ * ph.asDiagonal() * vecs_.adjoint()).real();
}

Eigen::MatrixXd wigner_small_d(int twice_ell, double theta) { return WignerSmallD(twice_ell)(theta); }

Matrix wigner(HalfInt ell, const EulerAngles& g) {
    check_twice(ell.twice);
    const int t = ell.twice, d = t + 1;
    Matrix r = wigner_small_d(t, g.theta).cast<Complex>();
    for (int a = 0; a < d; ++a) {
        const double m = 0.5 * m_twice(t, a);
        r.row(a) *= std::exp(-I1 * (m * g.phi));
        r.col(a) *= std::exp(-I1 * (m * g.psi));
    }
    return r;
}

Matrix wigner(HalfInt ell, const Quaternion& g) {
    if (!is_unit(g)) throw std::domain_error("wigner: quaternion is not a unit vector");
    return wigner(ell, to_euler(g));
}

// ---- EntryPolynomial ---------------------------------------------------------

int EntryPolynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
}

Complex EntryPolynomial::evaluate(const Eigen::Matrix2cd& u) const {
    const Complex v[4] = {u(0, 0), u(0, 1), u(1, 0), u(1, 1)};
    Complex s = 0.0;
    for (const auto& [e, c] : terms) {
        Complex p = c;
        for (int k = 0; k < 4; ++k)
            for (int r = 0; r < e[k]; ++r) p *= v[k];
        s += p;
    }
    return s;
}

EntryPolynomial& EntryPolynomial::operator+=(const EntryPolynomial& o) {
    for (const auto& [e, c] : o.terms) terms[e] += c;
    return *this;
}

EntryPolynomial& EntryPolynomial::operator*=(Complex s) {
    for (auto& [e, c] : terms) c *= s;
    return *this;
}

void EntryPolynomial::prune(double tol) {
    std::erase_if(terms, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

EntryPolynomial EntryPolynomial::constant(Complex c) {
    EntryPolynomial p;
    p.terms[{0, 0, 0, 0}] = c;
    return p;
}

EntryPolynomial EntryPolynomial::entry(int i, int j) {
    EntryPolynomial p;
    Exponents e{0, 0, 0, 0};
    e[2 * i + j] = 1;
    p.terms[e] = 1.0;
    return p;
}

EntryPolynomial operator*(const EntryPolynomial& a, const EntryPolynomial& b) {
    EntryPolynomial r;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            EntryPolynomial::Exponents e;
            for (int k = 0; k < 4; ++k) e[k] = ea[k] + eb[k];
            r.terms[e] += ca * cb;
        }
    return r;
}

EntryPolynomial operator+(EntryPolynomial a, const EntryPolynomial& b) { return a += b; }

EntryPolynomial operator-(EntryPolynomial a, const EntryPolynomial& b) {
    for (const auto& [e, c] : b.terms) a.terms[e] -= c;
    return a;
}

EntryPolynomial conjugate_entries(const EntryPolynomial& p) {
    // conj(u00) = u11, conj(u01) = -u10, conj(u10) = -u01, conj(u11) = u00
    EntryPolynomial r;
    for (const auto& [e, c] : p.terms) {
        const EntryPolynomial::Exponents f{e[3], e[2], e[1], e[0]};
        const double sign = ((e[1] + e[2]) % 2) ? -1.0 : 1.0;
        r.terms[f] += sign * c;
    }
    return r;
}

EntryPolynomial wigner_polynomial(int twice_ell, int twice_m, int twice_n) {
    check_twice(twice_ell);
    const int a = (twice_ell - twice_n) / 2, b = (twice_ell + twice_n) / 2;
    const int ap_target = (twice_ell - twice_m) / 2;
    EntryPolynomial p;
    for (int k = 0; k <= a; ++k)
        for (int j = 0; j <= b; ++j) {
            const int ap = a - k + j, bp = k + b - j;
            if (ap != ap_target) continue;
            const double lc = log_binomial(a, k) + log_binomial(b, j) +
                              0.5 * (std::lgamma(ap + 1.0) + std::lgamma(bp + 1.0) -
                                     std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
            p.terms[{a - k, j, k, b - j}] += std::exp(lc);
        }
    return p;
}

// ---- Clebsch-Gordan ----------------------------------------------------------

double coupling(int twice_ell, int i, int twice_L, int twice_M) {
    const int t = twice_ell;
    const int twice_mu = 2 * i - 1;
    const int twice_m = twice_M - twice_mu;
    if (std::abs(twice_m) > t || std::abs(twice_M) > twice_L) return 0.0;
    const double x = double(t + twice_M + 1) / (2.0 * (t + 1));
    const double y = double(t - twice_M + 1) / (2.0 * (t + 1));
    if (twice_L == t + 1) return i == 1 ? std::sqrt(x) : std::sqrt(y);
    if (twice_L == t - 1) return i == 1 ? -std::sqrt(y) : std::sqrt(x);
    return 0.0;
}

Eigen::MatrixXd cg_table(int twice_ell) {
    const int t = twice_ell, d = t + 1;
    const int lo = t >= 1 ? t : 0;  // size of the L = ell - 1/2 block
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < d; ++k) {
            const int tm = m_twice(t, k);
            const int tM = tm + 2 * i - 1;
            if (t >= 1 && std::abs(tM) <= t - 1) c(i * d + k, m_index(t - 1, tM)) = coupling(t, i, t - 1, tM);
            c(i * d + k, lo + m_index(t + 1, tM)) = coupling(t, i, t + 1, tM);
        }
    return c;
}

std::vector<ProductTerm> expand_product(int twice_ell, int i, int j, int twice_m, int twice_n) {
    std::vector<ProductTerm> out;
    for (int tl : {twice_ell - 1, twice_ell + 1}) {
        if (tl < 0) continue;
        const int tM = twice_m + 2 * i - 1, tN = twice_n + 2 * j - 1;
        if (std::abs(tM) > tl || std::abs(tN) > tl) continue;
        const double c = coupling(twice_ell, i, tl, tM) * coupling(twice_ell, j, tl, tN);
        if (c != 0.0) out.push_back({tl, tM, tN, c});
    }
    return out;
}

Coefficients multiply_by_entry(const Coefficients& g, int i, int j, int out_twice_max) {
    Coefficients r(out_twice_max);
    const int smu_i = 2 * i - 1, smu_j = 2 * j - 1;
    for (int tL = 0; tL <= out_twice_max; ++tL) {
        Matrix& out = r[tL];
        for (int tl : {tL - 1, tL + 1}) {
            if (tl < 0 || tl > g.twice_max()) continue;
            const Matrix& s = g[tl];
            const double ratio = double(tl + 1) / double(tL + 1);
            for (int nn = 0; nn <= tL; ++nn) {
                const int tN = m_twice(tL, nn), tb = tN - smu_j;
                if (std::abs(tb) > tl) continue;
                const double cj = ratio * coupling(tl, j, tL, tN);
                for (int mm = 0; mm <= tL; ++mm) {
                    const int tM = m_twice(tL, mm), ta = tM - smu_i;
                    if (std::abs(ta) > tl) continue;
                    out(nn, mm) += cj * coupling(tl, i, tL, tM) * s(m_index(tl, tb), m_index(tl, ta));
                }
            }
        }
    }
    return r;
}

}  // namespace su2pdo
