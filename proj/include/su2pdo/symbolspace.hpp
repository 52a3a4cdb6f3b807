#pragma once

#include <optional>

#include "su2pdo/harmonic.hpp"

namespace su2pdo {

// sigma(x, ell) = sum_k f_k(x) sigma_k(ell); f_k given by Fourier coefficients.
struct SymbolTerm {
    Coefficients coeff;
    Coefficients base;
};

class Symbol {
public:
    enum class Kind { LeftInvariant, XDependent };

    Symbol() = default;
    static Symbol left_invariant(Coefficients blocks, int reliable_twice = -1);
    static Symbol x_dependent(std::vector<SymbolTerm> terms, int reliable_twice = -1);

    Kind kind() const { return kind_; }
    bool is_left_invariant() const { return kind_ == Kind::LeftInvariant; }
    const std::vector<SymbolTerm>& terms() const { return terms_; }
    const Coefficients& blocks() const;  // left-invariant only

    int twice_max() const { return twice_max_; }
    // blocks above this index depend on data beyond the truncation and are flagged unreliable
    int reliable_twice() const { return reliable_; }
    Symbol with_reliable(int reliable_twice) const;
    int coefficient_band() const;  // largest twice_ell among the f_k

    Matrix at(const Quaternion& x, int twice_ell) const;
    // sup over the given points of ||sigma(x, ell)||_op
    double sup_norm(int twice_ell, const std::vector<Quaternion>& xs) const;

private:
    Kind kind_ = Kind::LeftInvariant;
    std::vector<SymbolTerm> terms_;
    int twice_max_ = -1;
    int reliable_ = -1;
};

Symbol identity_symbol(int twice_max);
Symbol scale(const Symbol& s, Complex c);
Symbol add(const Symbol& a, const Symbol& b);
// pointwise product sigma_a(x,ell) sigma_b(x,ell)
Symbol multiply(const Symbol& a, const Symbol& b);
// drop terms whose base vanishes; merge left-invariant terms
Symbol simplify(const Symbol& s, double tol = 0.0);
// x-dependent symbol with a single term a(x) * base
Symbol times_function(const Coefficients& a, const Coefficients& base);

// Af(x) = sum_ell d tr(t(x) sigma(x,ell) f(ell))
GroupFunction quantize(const Symbol& sigma, const Coefficients& f, const QuadratureGrid& grid);
// exact form of Af as sum_k f_k(x) g_k(x): pairs (coefficients of f_k, coefficients of g_k)
std::vector<std::pair<Coefficients, Coefficients>> quantize_terms(const Symbol& sigma, const Coefficients& f);

// per_node[i] holds sigma(x_i, .) at the grid nodes; each entry is expanded in t^{ell'}(x)
// up to the grid band, terms below drop_tol (relative) are dropped
Symbol symbol_from_samples(const std::vector<Coefficients>& per_node, const QuadratureGrid& grid,
                           double drop_tol = 1e-12);

using GroupOperator = std::function<GroupFunction(const GroupFunction&)>;
// sigma(x,ell) = t^ell(x)^* (A t^ell)(x) on the grid nodes; left-invariant storage when the
// variance across x is at most variance_tol
Symbol symbol_of(const GroupOperator& a, HalfInt L, const QuadratureGrid& grid, double variance_tol = 1e-9);

struct KernelField {
    QuadratureGrid y_grid;
    std::optional<QuadratureGrid> x_grid;  // absent for left-invariant kernels
    Matrix samples;                        // rows: x nodes (1 row if left-invariant), cols: y nodes
    bool truncated = false;
};
KernelField kernel_of(const Symbol& sigma, const QuadratureGrid& y_grid,
                      const std::optional<QuadratureGrid>& x_grid = std::nullopt);
// also sets K.truncated when the samples are not reproduced by the band-L symbol
Symbol symbol_from_kernel(KernelField& k, HalfInt L);

// sigma_{A_u}(x,xi) = xi(u)^* sigma_A(x u^{-1}, xi) xi(u)
Symbol conjugate(const Symbol& sigma, const Quaternion& u);

double op_norm(const Matrix& m);
double hs_norm(const Matrix& m);
double min_singular_value(const Matrix& m);

}  // namespace su2pdo
