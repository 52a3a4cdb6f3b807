#pragma once

#include <array>
#include <functional>
#include <map>

#include "su2pdo/symcalc.hpp"

// Commutative cross-check on T^1 and T^2: symbols are scalar functions on Z^d and the
// differences are classical forward differences, from q_j(x) = e^{2 pi i x_j} - 1.
namespace su2pdo::torus {

using Index = std::array<long long, 2>;  // second entry unused in 1-D

// a(xi) sampled on the box lo[j] <= xi_j <= hi[j]
struct TorusSymbol {
    int dim = 1;
    Index lo{0, 0}, hi{0, 0};
    std::vector<Complex> values;

    bool contains(const Index& xi) const;
    Complex at(const Index& xi) const;
    Complex& at(const Index& xi);
};

TorusSymbol sample(int dim, long long n, const std::function<Complex(const Index&)>& a);

// constant coefficient operator sum c_a d_1^{a_1} d_2^{a_2}
struct TorusExpression {
    int dim = 1;
    std::map<std::array<int, 2>, Complex> terms;
};
// d_j acts on e^{2 pi i x.xi} as 2 pi i xi_j
TorusSymbol torus_symbol(const TorusExpression& e, long long n);

// Delta_j a(xi) = a(xi + e_j) - a(xi); the box loses its top layer in direction j
TorusSymbol torus_difference(const TorusSymbol& a, int j);

struct TorusFit {
    double m = 0.0, rho = 0.0;
    struct Slope {
        Index alpha{0, 0};
        double slope = 0.0, residual = 0.0;
        bool vanishing = false;
    };
    std::vector<Slope> slopes;
};
// sup over the shells |xi|_inf = r against <xi> = sqrt(1 + r^2); rho from the worst |alpha| >= 1
TorusFit torus_fit(const TorusSymbol& a, int alpha_depth);

struct TorusAdmissibility {
    int rank = 0;
    bool admissible = false, strongly_admissible = false;
    std::vector<std::array<double, 2>> common_zeros;  // on the scan grid
};
TorusAdmissibility torus_admissibility(int dim, int grid = 64);

// Taylor frame on T^1: d^{(k)} = sum_j coeff(k, j) (d/dx)^j with (d^{(k)} q^b)(0) = k! delta_kb, k, b < N
struct TorusTaylor {
    int order = 0;
    Matrix coeff;
};
TorusTaylor torus_taylor(int N);
// sum_{k<N} (1/k!) q(x)^k d^{(k)} f(0), given (d/dx)^j f(0) for j < N
Complex torus_taylor_polynomial(const TorusTaylor& t, const std::vector<Complex>& derivatives, double x);

}  // namespace su2pdo::torus
