#pragma once

#include <string>
#include <string_view>

#include "su2pdo/symbolspace.hpp"

namespace su2pdo {

// Delta_q: multiplication of the kernel by q. q is kept as a polynomial in the entries
// of t^{1/2}, so the action is a chain of exact spin-1/2 couplings.
struct DifferenceOp {
    std::string name;
    EntryPolynomial q;
    int order = 0;      // vanishing order at e; 0 means q(e) != 0
    bool zero = false;  // q identically zero

    bool valid() const { return zero || order >= 1; }
    int width() const { return q.degree(); }  // coupling width in twice-units
    Coefficients q_coefficients() const;
};

inline constexpr int kOrderProbeDepth = 4;  // orders above this are reported as 5

DifferenceOp make_difference(const Coefficients& q, std::string name = "");
DifferenceOp make_difference(const EntryPolynomial& q, std::string name = "");
// "D11","D12","D21","D22","tri+","tri-","tri0"
DifferenceOp difference(std::string_view key);
DifferenceOp D(int i, int j);  // i,j in {1,2}
std::vector<DifferenceOp> family(std::string_view key);  // "qij" or "tri"

// Fourier coefficients of a polynomial in the entries of t^{1/2}
Coefficients polynomial_coefficients(const EntryPolynomial& p);
EntryPolynomial coefficients_polynomial(const Coefficients& c);

// blocks 0..out_twice_max of (q R)^ where R has coefficients sigma
Coefficients apply_blocks(const DifferenceOp& d, const Coefficients& sigma, int out_twice_max);
// reliable index drops by d.width(); throws if nothing reliable is left
Symbol apply(const DifferenceOp& d, const Symbol& sigma);

// kConvention: D_ij(ab) = (D_ij a)b + a(D_ij b) + sum_k (D_kj a)(D_ik b), exact for
// sigma = int R xi^* with q_ij = xi_ij - delta_ij.  kTransposed is the same rule with the
// cross term written (D_ik a)(D_kj b); it only holds if D_ij is relabelled to q_ji.
enum class LeibnizForm { kConvention, kTransposed };
Symbol leibniz_residual(const Symbol& a, const Symbol& b, int i, int j,
                        LeibnizForm form = LeibnizForm::kConvention);
// iterated D_{alpha_1 beta_1} ... D_{alpha_k beta_k}
Symbol grand_difference(const std::vector<int>& alpha, const std::vector<int>& beta, const Symbol& sigma);

// Symbolic expansion of D^{(k)}(ab) into sum C (D^eps a)(D^delta b); multi-indices count
// the four first-order D_ij in the order 11,12,21,22.
struct LeibnizTerm {
    std::array<int, 4> eps{}, delta{};
    long coeff = 0;
};
std::vector<LeibnizTerm> leibniz_expansion(const std::vector<int>& alpha, const std::vector<int>& beta);
Symbol apply_multi(const std::array<int, 4>& counts, const Symbol& sigma);

double geodesic_distance(const Quaternion& x);

// ---- Taylor frame ---------------------------------------------------------------

using Word = std::vector<int>;
using MultiIndex = std::vector<int>;

struct TaylorFrame {
    std::vector<DifferenceOp> family;
    std::vector<int> used;                // generating functions kept (independent differentials)
    int order = 1;                        // N: exact for |beta| <= N-1
    std::vector<MultiIndex> multi_indices;  // over the full family, zero on dropped entries
    std::vector<Word> words;                // ordered monomials in the frame letters
    Matrix coeff;                           // partial^{(alpha)} = sum_w coeff(alpha, w) X_w

    int index_of(const MultiIndex& alpha) const;  // -1 if absent
    // (partial^{(alpha)} f)(x) for f with coefficients c
    Complex apply(const MultiIndex& alpha, const Coefficients& c, const Quaternion& x) const;
    // sum_{|alpha|<=N-1} q^alpha(x) (partial^{(alpha)} f)(e) / alpha!
    Complex taylor_polynomial(const Coefficients& f, const Quaternion& x) const;
};

TaylorFrame taylor_frame(const std::vector<DifferenceOp>& qs, int N);
std::vector<MultiIndex> multi_indices_upto(int size, int max_order);
double factorial_of(const MultiIndex& alpha);
std::vector<Word> ordered_words(int max_length);

// (X_w g)(e) for g with Fourier coefficients c
Complex derivative_at_identity(const Coefficients& c, const Word& w);

struct AdmissibilityReport {
    bool admissible = false;
    bool strongly_admissible = false;
    int rank = 0;
    std::vector<bool> nonzero_differential;
    std::vector<Quaternion> common_zeros;
};
AdmissibilityReport admissibility_report(const std::vector<DifferenceOp>& qs);

}  // namespace su2pdo
