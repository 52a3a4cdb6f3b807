#pragma once

#include <map>

#include "su2pdo/diffops.hpp"

namespace su2pdo {

// ---- differential expressions -----------------------------------------------------

// A = sum_w c_w(x) X_w with X_w = X_{w1} ... X_{wn} in the frame letters (wn acts first)
struct DifferentialExpression {
    std::map<Word, Coefficients> terms;

    int order() const;
    bool is_left_invariant() const;  // all coefficients constant
    // sigma(x, ell) = sum_w c_w(x) d pi_ell(w)
    Symbol symbol(int twice_max) const;
    // coefficients of Af for band-limited f (products taken exactly on a grid)
    Coefficients apply(const Coefficients& f) const;
};

DifferentialExpression constant_expression(Complex c);
// any traceless X, written in the letters d+, d-, d0
DifferentialExpression vector_field(const Eigen::Matrix2cd& x);
DifferentialExpression operator+(const DifferentialExpression& a, const DifferentialExpression& b);
DifferentialExpression operator-(const DifferentialExpression& a, const DifferentialExpression& b);
DifferentialExpression operator*(Complex s, const DifferentialExpression& a);
// composition a o b, moving coefficients of b to the left of the words of a
DifferentialExpression operator*(const DifferentialExpression& a, const DifferentialExpression& b);
// multiplication by a function on the left
DifferentialExpression operator*(const Coefficients& f, const DifferentialExpression& a);

// coefficients of X_w f
Coefficients word_derivative(const Coefficients& c, const Word& w);
// partial_x^w of an x-dependent symbol (left-invariant symbols map to zero)
Symbol x_derivative(const Symbol& s, const Word& w);

// ---- composition ----------------------------------------------------------------

// per-ell matrix product; both left-invariant
Symbol compose_exact(const Symbol& a, const Symbol& b);
// sigma_{AB}(x, ell) without truncation in the calculus. Each base of a must be known up to
// twice_ell + twice the x-band of b.
Matrix compose_exact_at(const Symbol& a, const Symbol& b, const Quaternion& x, int twice_ell);
// exact symbol of A o B for differential A
Symbol compose_differential(const DifferentialExpression& a, const Symbol& b);

// The Taylor derivatives enter composition through y -> f(x y^{-1}), which reverses the
// words and flips their sign. kPlain uses partial^{(alpha)} as it stands.
enum class FrameDerivative { kAntipode, kPlain };
Symbol frame_derivative(const TaylorFrame& frame, const MultiIndex& alpha, const Symbol& s,
                        FrameDerivative mode = FrameDerivative::kAntipode);
Symbol multi_difference(const TaylorFrame& frame, const MultiIndex& alpha, const Symbol& s);
// sum_{|alpha| < N} (1/alpha!) (Delta^alpha a)(partial^{(alpha)} b); needs N <= frame.order
Symbol compose_asymptotic(const Symbol& a, const Symbol& b, int N, const TaylorFrame& frame,
                          FrameDerivative mode = FrameDerivative::kAntipode);

// Both sides of sigma_X sigma_A - sigma_A sigma_X = sum_j Delta_j(sigma_A sigma_{d_j}) at x,
// where q_j(y) are the frame coordinates of Ad(y) X - X. Returns the largest entry gap over
// blocks up to twice_ell_max.
double commutator_identity_gap(const Eigen::Matrix2cd& x_field, const Symbol& a, const Quaternion& x,
                               int twice_ell_max);

// ---- inversion, ellipticity, hypoellipticity -------------------------------------------

struct Inversion {
    Symbol inverse;                 // zero blocks where singular
    std::vector<int> singular_twice;
};
// singular where s_min <= threshold * <ell>^{m0}. An x-dependent symbol is inverted at the
// nodes of build_grid(x_twice / 2) and expanded back, so its inverse is truncated in x.
Inversion invert_symbol(const Symbol& a, double threshold = 1e-8, double m0 = 0.0, int x_twice = 8);

inline double japanese(int twice_ell) {
    const double l = 0.5 * twice_ell;
    return std::sqrt(1.0 + l * (l + 1.0));
}

// blocks used for power-law fits: [twice_max/4, edge-safe max]
struct FitWindow {
    int lo = 0, hi = 0;
};
FitWindow fit_window(int reliable_twice, int lowest = 2);

struct PowerFit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
    bool vanishing = false;  // all values below the relative threshold
};
// least squares of log v against log <ell> over the listed blocks
PowerFit fit_power(const std::vector<int>& twice, const std::vector<double>& values, double scale = 1.0);
// the same against log of arbitrary weights (e.g. <xi> on the torus)
PowerFit fit_loglog(const std::vector<double>& weights, const std::vector<double>& values, double scale = 1.0);

struct EllipticityReport {
    bool elliptic = false;
    double constant = 0.0;  // max of ||sigma^{-1}|| <ell>^m over the window
    std::vector<int> singular_twice;
    double fitted_order = 0.0;  // -slope of ||sigma^{-1}||
};
EllipticityReport ellipticity_check(const Symbol& a, double m, const std::vector<Quaternion>& xs = {});

struct HypoRatio {
    MultiIndex alpha;
    Word beta;
    double bound_exponent = 0.0;  // -rho|alpha| + delta|beta|
    double fitted_exponent = 0.0;
    double constant = 0.0;
    bool ok = false;
};
struct HypoReport {
    HalfInt invertible_from{0};
    double m0_fit = 0.0;
    std::vector<HypoRatio> ratios;
    std::vector<int> singular_twice;
    bool verdict = false;
    std::string reason;
};
HypoReport hypoellipticity_check(const Symbol& a, double m, double m0, double rho, double delta,
                                 const std::vector<DifferenceOp>& family, int depth = 2,
                                 double tol = 0.15, const std::vector<Quaternion>& xs = {});

// ---- class fitting ----------------------------------------------------------------

struct ClassFit {
    double m = 0.0, rho = 0.0, delta = 0.0;
    struct Slope {
        MultiIndex alpha;
        Word beta;
        double slope = 0.0, residual = 0.0;
        bool vanishing = false;
    };
    std::vector<Slope> slopes;
    FitWindow window;
};
ClassFit fit_symbol_class(const Symbol& a, const std::vector<DifferenceOp>& family, int alpha_depth,
                          int beta_depth = 0, const std::vector<Quaternion>& xs = {});

struct DecayReport {
    int band = 0;          // largest |i-j| with a nonzero entry, -1 for the zero symbol
    bool banded = false;   // band stays bounded independent of ell
    bool decays = false;   // the weighted sup below does not grow with ell
    double fitted_order = 0.0;
    double decay_constant = 0.0;  // sup (1+|i-j|)^N |sigma_ij| / <ell>^m
};
DecayReport offdiag_decay_check(const Symbol& a, int N, double tol = 1e-12);

// ---- parametrix -------------------------------------------------------------------

struct ParametrixOptions {
    int terms = 3;                 // B_0 .. B_N
    std::vector<Quaternion> points;  // base points x
    std::vector<int> twice_ells;     // blocks evaluated
};
struct ParametrixResult {
    // residual[N][p][i]: ||sigma_{A B^{(N)} - I}(x_p, ell_i)||_op with B^{(N)} = B_0 + ... + B_N
    std::vector<std::vector<std::vector<double>>> residual;
    // norms[k][p][i] = ||sigma_{B_k}(x_p, ell_i)||_op
    std::vector<std::vector<std::vector<double>>> norms;
    std::vector<double> residual_order;  // fitted slope per N (max over points)
};
// A given as a differential expression; the recursion is evaluated on jets at the base points
ParametrixResult parametrix(const DifferentialExpression& a, const TaylorFrame& frame,
                            const ParametrixOptions& opt);
// left-invariant A: B_0 = sigma_A^{-1}, higher terms vanish
Inversion parametrix_left_invariant(const Symbol& a, double m0 = 0.0);

}  // namespace su2pdo
