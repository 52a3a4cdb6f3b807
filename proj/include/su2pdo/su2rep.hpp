#pragma once

#include <array>
#include <map>
#include <vector>

#include "su2pdo/core.hpp"

namespace su2pdo {

// Largest representation index (doubled) the Wigner evaluation is validated for.
inline constexpr int kMaxTwiceEll = 64;

struct Quaternion {
    double x0 = 1, x1 = 0, x2 = 0, x3 = 0;
};

struct EulerAngles {
    double phi = 0, theta = 0, psi = 0;
};

Quaternion identity_element();
Quaternion normalized(const Quaternion& q);
bool is_unit(const Quaternion& q, double tol = 1e-9);

// Phi(q) = [[x0+ix3, x1+ix2], [-x1+ix2, x0-ix3]]
Eigen::Matrix2cd quat_to_su2(const Quaternion& q);
Quaternion su2_to_quat(const Eigen::Matrix2cd& u);

Quaternion group_mul(const Quaternion& a, const Quaternion& b);
Quaternion group_inv(const Quaternion& a);
double group_distance(const Quaternion& a, const Quaternion& b);  // Frobenius distance of Phi images

// x = exp(phi Z) exp(theta Y) exp(psi Z) with Z = diag(i/2,-i/2), Y = [[0,-1/2],[1/2,0]]
Quaternion from_euler(const EulerAngles& e);
EulerAngles to_euler(const Quaternion& q);

// exp(t X) for X in su(2) given as a 2x2 matrix
Quaternion exp_algebra(const Eigen::Matrix2cd& x, double t = 1.0);

// ---- Lie algebra ----------------------------------------------------------

// Frame used for invariant derivatives: the letters of words.
enum Letter : int { kPlus = 0, kMinus = 1, kZero = 2 };

Eigen::Matrix2cd algebra_d0();      // diag(-1/2, 1/2)
Eigen::Matrix2cd algebra_dplus();   // -E01
Eigen::Matrix2cd algebra_dminus();  // -E10
Eigen::Matrix2cd algebra_letter(int letter);
Eigen::Matrix2cd algebra_D1();
Eigen::Matrix2cd algebra_D2();
Eigen::Matrix2cd algebra_D3();

// d pi_ell(X): derivative of t^ell along X at the identity, X any complex 2x2 matrix
Matrix algebra_rep(int twice_ell, const Eigen::Matrix2cd& x);
// product d pi(w_1) ... d pi(w_r)
Matrix word_rep(int twice_ell, const std::vector<int>& word);

// ---- representation matrices ------------------------------------------------

Matrix wigner(HalfInt ell, const Quaternion& g);
Matrix wigner(HalfInt ell, const EulerAngles& g);

// small Wigner d^ell(theta) = exp(theta d pi(Y)); real
Eigen::MatrixXd wigner_small_d(int twice_ell, double theta);

// Diagonalisation of i d pi(Y) reused for many theta values.
class WignerSmallD {
public:
    explicit WignerSmallD(int twice_ell);
    Eigen::MatrixXd operator()(double theta) const;
    int twice_ell() const { return twice_; }

private:
    int twice_;
    Matrix vecs_;
    Eigen::VectorXd vals_;
};

// Polynomial in the four entries (u00,u01,u10,u11) of t^{1/2}.
struct EntryPolynomial {
    using Exponents = std::array<int, 4>;
    std::map<Exponents, Complex> terms;

    int degree() const;
    Complex evaluate(const Eigen::Matrix2cd& u) const;
    EntryPolynomial& operator+=(const EntryPolynomial& o);
    EntryPolynomial& operator*=(Complex s);
    void prune(double tol = 0.0);

    static EntryPolynomial constant(Complex c);
    static EntryPolynomial entry(int i, int j);  // t^{1/2}_{ij}, i,j in {0,1}
};
EntryPolynomial operator*(const EntryPolynomial& a, const EntryPolynomial& b);
EntryPolynomial operator+(EntryPolynomial a, const EntryPolynomial& b);
EntryPolynomial operator-(EntryPolynomial a, const EntryPolynomial& b);
// substitute u -> conj(u) (as a polynomial, using the SU(2) structure)
EntryPolynomial conjugate_entries(const EntryPolynomial& p);

// Factorial-sum expansion of t^ell_{mn} as a polynomial in the entries of t^{1/2}.
EntryPolynomial wigner_polynomial(int twice_ell, int twice_m, int twice_n);

// ---- Clebsch-Gordan coupling with spin 1/2 ----------------------------------

// <1/2 mu_i ; ell, M - mu_i | L M>, i = 0 (mu=-1/2) or 1 (mu=+1/2); zero outside range
double coupling(int twice_ell, int i, int twice_L, int twice_M);

// dense CG block for ell: rows (i*d + m_index), cols blocks L = ell-1/2 then ell+1/2
Eigen::MatrixXd cg_table(int twice_ell);

struct ProductTerm {
    int twice_ell, twice_m, twice_n;
    double coeff;
};
// t^{1/2}_{ij} t^ell_{mn} = sum coeff t^{L}_{MN}
std::vector<ProductTerm> expand_product(int twice_ell, int i, int j, int twice_m, int twice_n);

// Fourier coefficients of t^{1/2}_{ij} g from those of g. Blocks above the input are
// computed as if the input vanished there; out_twice_max chooses how many to return.
Coefficients multiply_by_entry(const Coefficients& g, int i, int j, int out_twice_max);

}  // namespace su2pdo
