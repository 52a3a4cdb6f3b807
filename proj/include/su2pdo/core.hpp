#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace su2pdo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Representation and matrix indices as doubled integers: ell = twice/2.
struct HalfInt {
    int twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int t) : twice(t) {}
    static constexpr HalfInt from_twice(int t) { return HalfInt(t); }

    constexpr double value() const { return 0.5 * twice; }
    constexpr bool is_integer() const { return twice % 2 == 0; }
    constexpr int dim() const { return twice + 1; }

    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

// position of m (doubled) inside a block of representation twice_ell
constexpr int m_index(int twice_ell, int twice_m) { return (twice_m + twice_ell) / 2; }
constexpr int m_twice(int twice_ell, int index) { return 2 * index - twice_ell; }

// <ell> = sqrt(1 + ell(ell+1))
inline double weight(int twice_ell) {
    const double l = 0.5 * twice_ell;
    return std::sqrt(1.0 + l * (l + 1.0));
}

// One matrix per representation index twice_ell = 0..twice_max.
template <typename Scalar>
struct BlockSequence {
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<MatrixType> blocks;

    BlockSequence() = default;
    explicit BlockSequence(int twice_max) {
        blocks.reserve(twice_max + 1);
        for (int t = 0; t <= twice_max; ++t) blocks.push_back(MatrixType::Zero(t + 1, t + 1));
    }

    int twice_max() const { return static_cast<int>(blocks.size()) - 1; }
    bool has(int twice_ell) const { return twice_ell >= 0 && twice_ell <= twice_max(); }

    MatrixType& operator[](int twice_ell) { return blocks.at(twice_ell); }
    const MatrixType& operator[](int twice_ell) const { return blocks.at(twice_ell); }

    static BlockSequence identity(int twice_max) {
        BlockSequence s(twice_max);
        for (auto& b : s.blocks) b.setIdentity();
        return s;
    }
};

using Coefficients = BlockSequence<Complex>;

template <typename Scalar>
BlockSequence<Scalar> operator+(const BlockSequence<Scalar>& a, const BlockSequence<Scalar>& b) {
    const int t = std::max(a.twice_max(), b.twice_max());
    BlockSequence<Scalar> out(t);
    for (int k = 0; k <= t; ++k) {
        if (a.has(k)) out[k] += a[k];
        if (b.has(k)) out[k] += b[k];
    }
    return out;
}

template <typename Scalar>
BlockSequence<Scalar> operator-(const BlockSequence<Scalar>& a, const BlockSequence<Scalar>& b) {
    const int t = std::max(a.twice_max(), b.twice_max());
    BlockSequence<Scalar> out(t);
    for (int k = 0; k <= t; ++k) {
        if (a.has(k)) out[k] += a[k];
        if (b.has(k)) out[k] -= b[k];
    }
    return out;
}

template <typename Scalar>
BlockSequence<Scalar> operator*(Scalar s, const BlockSequence<Scalar>& a) {
    BlockSequence<Scalar> out = a;
    for (auto& b : out.blocks) b *= s;
    return out;
}

// blockwise product, truncated to the shorter sequence
template <typename Scalar>
BlockSequence<Scalar> blockwise_product(const BlockSequence<Scalar>& a, const BlockSequence<Scalar>& b) {
    const int t = std::min(a.twice_max(), b.twice_max());
    BlockSequence<Scalar> out(t);
    for (int k = 0; k <= t; ++k) out[k].noalias() = a[k] * b[k];
    return out;
}

template <typename Scalar>
double max_abs_difference(const BlockSequence<Scalar>& a, const BlockSequence<Scalar>& b, int twice_upto) {
    double e = 0.0;
    for (int k = 0; k <= twice_upto; ++k) e = std::max(e, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return e;
}

}  // namespace su2pdo
