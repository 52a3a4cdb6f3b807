#pragma once

#include <functional>

#include "su2pdo/su2rep.hpp"

namespace su2pdo {

// Tensor rule in Euler angles: equispaced phi over 2pi and psi over 4pi,
// Gauss-Legendre in cos(theta). Weights sum to 1.
struct QuadratureGrid {
    int twice_L = 0;
    std::vector<double> phi, psi, theta, theta_weight;  // theta weights sum to 1

    int size() const { return int(phi.size() * psi.size() * theta.size()); }
    int index(int k_theta, int p_phi, int s_psi) const {
        return (k_theta * int(phi.size()) + p_phi) * int(psi.size()) + s_psi;
    }
    EulerAngles node(int idx) const;
    Quaternion point(int idx) const { return from_euler(node(idx)); }
    double weight(int idx) const;
};

QuadratureGrid build_grid(HalfInt L);

// Gauss-Legendre nodes/weights on [-1,1]
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

struct GroupFunction {
    QuadratureGrid grid;
    Vector samples;
};

GroupFunction sample(const std::function<Complex(const Quaternion&)>& f, const QuadratureGrid& grid);
Complex integrate(const GroupFunction& f);
double l2_norm(const GroupFunction& f);

Coefficients forward(const GroupFunction& f, HalfInt L);
GroupFunction inverse(const Coefficients& c, const QuadratureGrid& grid);

// sum_ell d tr(t^ell(x) c(ell))
Complex evaluate(const Coefficients& c, const Quaternion& x);
// (X_w f)(x) for f with coefficients c, word over the frame letters
Complex evaluate_derivative(const Coefficients& c, const std::vector<int>& word, const Quaternion& x);
// coefficients of X f: d pi(X) c(ell)
Coefficients derivative(const Coefficients& c, const Eigen::Matrix2cd& x);
// coefficients of x -> f(x u^{-1})
Coefficients right_translate(const Coefficients& c, const Quaternion& u);
// coefficients of the pointwise product of band-limited functions
Coefficients product(const Coefficients& a, const Coefficients& b);

double parseval_gap(const GroupFunction& f, HalfInt L);
double sobolev_norm(const Coefficients& c, double s);
double hs_norm_sq(const Coefficients& c);  // sum d ||c||_HS^2

Coefficients constant_coefficients(Complex value, int twice_max = 0);

}  // namespace su2pdo
