#include "su2pdo/opcatalog.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace su2pdo {

namespace {

using i128 = __int128;

constexpr Complex kI{0.0, 1.0};

i128 isqrt(i128 n) {
    if (n < 0) throw std::domain_error("isqrt of a negative number");
    i128 r = i128(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

long long icbrt(long long n) {
    long long r = std::llround(std::cbrt(double(n)));
    while (r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

DifferentialExpression field(const Eigen::Matrix2cd& x) { return vector_field(x); }

DifferentialExpression power(const DifferentialExpression& a, int k) {
    DifferentialExpression r = constant_expression(1.0);
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

Complex ipow(Complex z, int k) {
    Complex r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries{
        {"D1", "left-invariant vector field D1", false, 1, "order 1, not elliptic"},
        {"D2", "left-invariant vector field D2", false, 1, "order 1, not elliptic"},
        {"D3", "left-invariant vector field D3, symbol -i m", true, 0, "not globally hypoelliptic"},
        {"d0", "frame field d0, symbol m", true, 0, "not globally hypoelliptic"},
        {"d+", "frame field d+", false, 1, "not globally hypoelliptic"},
        {"d-", "frame field d-", false, 1, "not globally hypoelliptic"},
        {"Lap", "Laplacian D1^2 + D2^2 + D3^2, symbol -ell(ell+1)", true, 0, "elliptic of order 2"},
        {"SubLap", "sub-Laplacian D1^2 + D2^2, symbol m^2 - ell(ell+1)", true, 0,
         "hypoelliptic, parametrix in S^{-1}_{1/2,0}"},
        {"Heat", "D3 - D1^2 - D2^2, symbol -i m - m^2 + ell(ell+1)", true, 0,
         "hypoelliptic, parametrix in S^{-1}_{1/2,0}"},
        {"Schrodinger+", "i D3 - D1^2 - D2^2, symbol m - m^2 + ell(ell+1)", true, 0, "not globally hypoelliptic"},
        {"Schrodinger-", "-i D3 - D1^2 - D2^2, symbol -m - m^2 + ell(ell+1)", true, 0, "not globally hypoelliptic"},
        {"DAlembert", "D3^2 - D1^2 - D2^2, symbol -2m^2 + ell(ell+1)", true, 0,
         "not globally hypoelliptic (Pell modes)"},
        {"P", "D1^2 - D2^2 = -(d-^2 + d+^2)/2", false, 2, "neither elliptic nor subelliptic"},
        {"Cube", "2i D3^3 - Lap, symbol -2m^3 + ell(ell+1)", true, 0, "globally hypoelliptic"},
        {"D3_plus_c", "D3 + c, symbol c - i m", true, 0, "globally hypoelliptic iff ic not in Z/2"},
        {"dXk_plus_c", "D3^k + c, symbol (-i m)^k + c", true, 0,
         "globally hypoelliptic iff c not in -(-i)^k (Z/2)^k"},
    };
    return entries;
}

DifferentialExpression builtin_expression(std::string_view name, const CatalogParams& p) {
    const DifferentialExpression d1 = field(algebra_D1()), d2 = field(algebra_D2()), d3 = field(algebra_D3());
    const DifferentialExpression sub = d1 * d1 + d2 * d2;
    const DifferentialExpression lap = sub + d3 * d3;
    if (name == "D1") return d1;
    if (name == "D2") return d2;
    if (name == "D3") return d3;
    if (name == "d0") return field(algebra_d0());
    if (name == "d+") return field(algebra_dplus());
    if (name == "d-") return field(algebra_dminus());
    if (name == "Lap") return lap;
    if (name == "SubLap") return sub;
    if (name == "Heat") return d3 - sub;
    if (name == "Schrodinger+") return kI * d3 - sub;
    if (name == "Schrodinger-") return Complex(-kI) * d3 - sub;
    if (name == "DAlembert") return d3 * d3 - sub;
    if (name == "P") return d1 * d1 - d2 * d2;
    if (name == "Cube") return Complex(0.0, 2.0) * power(d3, 3) - lap;
    if (name == "D3_plus_c") return d3 + constant_expression(p.c);
    if (name == "dXk_plus_c") {
        if (p.k < 1) throw std::invalid_argument("dXk_plus_c: k must be positive");
        return power(d3, p.k) + constant_expression(p.c);
    }
    throw std::invalid_argument("unknown catalog operator: " + std::string(name));
}

Symbol builtin(std::string_view name, int twice_max, const CatalogParams& p) {
    return simplify(builtin_expression(name, p).symbol(twice_max));
}

std::optional<Complex> closed_form(std::string_view name, double l, double m, const CatalogParams& p) {
    const double ll = l * (l + 1.0);
    if (name == "D3") return -kI * m;
    if (name == "d0") return Complex(m);
    if (name == "Lap") return Complex(-ll);
    if (name == "SubLap") return Complex(m * m - ll);
    if (name == "Heat") return -kI * m - m * m + ll;
    if (name == "Schrodinger+") return Complex(m - m * m + ll);
    if (name == "Schrodinger-") return Complex(-m - m * m + ll);
    if (name == "DAlembert") return Complex(-2.0 * m * m + ll);
    if (name == "Cube") return Complex(-2.0 * m * m * m + ll);
    if (name == "D3_plus_c") return p.c - kI * m;
    if (name == "dXk_plus_c") return ipow(-kI * m, p.k) + p.c;
    return std::nullopt;
}

GHVerdict gh_classify(std::string_view family, const CatalogParams& p, int twice_max) {
    GHVerdict v;
    // exact zero test of the diagonal symbol at (T, M) = (2 ell, 2 m)
    std::function<bool(long long, long long)> zero;
    const double a = p.c.real(), b = p.c.imag();
    if (family == "D3_plus_c") {
        const bool hit = a == 0.0 && std::floor(2.0 * b) == 2.0 * b;
        v.infinitely_many_singular = hit;
        const long long M = hit ? std::llround(2.0 * b) : 0;
        zero = [hit, M](long long, long long m2) { return hit && m2 == M; };
        v.certificate = hit ? "ic lies in Z/2: c - i m vanishes at m = Im c for every admissible ell"
                            : "ic is not in Z/2: |c - i m| >= dist(ic, Z/2) > 0";
    } else if (family == "dXk_plus_c") {
        // (-i m)^k = -c  <=>  M^k = -c 2^k / (-i)^k, an exact integer test
        const Complex z = -p.c * std::pow(2.0, p.k) / ipow(-kI, p.k);
        bool hit = false;
        std::vector<long long> roots;
        if (z.imag() == 0.0 && std::floor(z.real()) == z.real() && std::abs(z.real()) < 9e15) {
            const long long r = std::llround(z.real());
            for (long long M = 0;; ++M) {
                long long pw = 1;
                for (int i = 0; i < p.k; ++i) pw *= M;
                if (pw > std::llabs(r)) break;
                for (long long s : {M, -M}) {
                    long long q = 1;
                    for (int i = 0; i < p.k; ++i) q *= s;
                    if (q == r && (roots.empty() || roots.back() != s)) roots.push_back(s);
                }
            }
            hit = !roots.empty();
        }
        v.infinitely_many_singular = hit;
        zero = [roots](long long, long long m2) {
            for (long long s : roots)
                if (s == m2) return true;
            return false;
        };
        v.certificate = hit ? "c lies in -(-i)^k (Z/2)^k" : "c is not in -(-i)^k (Z/2)^k";
    } else if (family == "Schrodinger+" || family == "Schrodinger-") {
        const int sgn = family == "Schrodinger+" ? 1 : -1;
        // 4 sigma = +-2M - M^2 + T(T+2) + 4c
        const bool real_quarter = b == 0.0 && std::floor(4.0 * a) == 4.0 * a;
        const long long c4 = real_quarter ? std::llround(4.0 * a) : 0;
        zero = [=](long long T, long long M) { return real_quarter && sgn * 2 * M - M * M + T * (T + 2) + c4 == 0; };
        v.infinitely_many_singular = real_quarter && c4 == 0;
        v.certificate = v.infinitely_many_singular
                            ? "c = 0: the symbol vanishes at m = -+ell for every ell"
                            : "(ell +- m)(ell -+ m + 1) = -c has finitely many solutions";
    } else if (family == "DAlembert") {
        zero = [](long long T, long long M) { return T * (T + 2) == 2 * M * M; };
        v.infinitely_many_singular = true;
        v.certificate = "ell(ell+1)/2 is a square for the Pell sequence ell_k";
    } else if (family == "Cube") {
        zero = [](long long T, long long M) { return M * M * M == T * (T + 2); };
        v.certificate = "the only nonzero triangular cube is 1, so only ell = 1 is singular";
    } else if (family == "SubLap" || family == "Lap") {
        zero = [](long long T, long long M) { return T == 0 && M == 0; };
        v.certificate = "singular only at ell = 0";
    } else if (family == "Heat") {
        zero = [](long long T, long long M) { return M == 0 && T == 0; };
        v.certificate = "-i m - m^2 + ell(ell+1) vanishes only at ell = 0";
    } else {
        throw std::invalid_argument("gh_classify: unknown family " + std::string(family));
    }
    const std::string name(family);
    for (long long T = 0; T <= twice_max; ++T)
        for (long long M = -T; M <= T; M += 2) {
            if (zero(T, M)) {
                v.witnesses.push_back({int(T), int(M)});
                continue;
            }
            Complex s;
            if (family == "Schrodinger+" || family == "Schrodinger-")
                s = *closed_form(name, 0.5 * T, 0.5 * M) + p.c;
            else
                s = *closed_form(name, 0.5 * T, 0.5 * M, p);
            v.inverse_bound = std::max(v.inverse_bound, 1.0 / std::abs(s));
        }
    v.globally_hypoelliptic = !v.infinitely_many_singular;
    return v;
}

PellSequence pell_ells(int K) {
    if (K < 1) throw std::invalid_argument("pell_ells: K must be at least 1");
    PellSequence s;
    i128 a = 1, b = 0;  // (3 + 2 sqrt 2)^k = a + b sqrt 2
    for (int k = 1; k <= K; ++k) {
        const i128 na = 3 * a + 4 * b, nb = 2 * a + 3 * b;
        a = na;
        b = nb;
        // b sqrt 2 is irrational, so floor((a + b sqrt 2)/4) = floor((a + floor(b sqrt 2))/4)
        const i128 l = (a + isqrt(2 * b * b)) / 4;
        const i128 m = b / 2;
        if (2 * m * m != l * (l + 1)) throw std::logic_error("pell_ells: 2 m^2 != ell(ell+1)");
        s.ell.push_back(static_cast<long long>(l));
        s.m.push_back(static_cast<long long>(m));
    }
    return s;
}

std::vector<long long> triangular_square_ells(long long L) {
    std::vector<long long> out;
    for (long long l = 1; l <= L; ++l) {
        const i128 t = i128(l) * (l + 1) / 2, r = isqrt(t);
        if (r * r == t) out.push_back(l);
    }
    return out;
}

double halfint_gap_check(int twice_L) {
    long long best = -1;  // in units of 1/4
    for (long long T = 1; T <= twice_L; T += 2)
        for (long long M = -T; M <= T; M += 2) {
            const long long v = std::llabs(-2 * M * M + T * (T + 2));
            if (best < 0 || v < best) best = v;
        }
    return best < 0 ? 0.0 : double(best) / 4.0;
}

CubeReport cube_check(int L) {
    CubeReport r;
    for (long long l = 1; l <= L; ++l) {
        const long long t = l * (l + 1) / 2, c = icbrt(t);
        if (c * c * c == t) r.triangular_cube_ells.push_back(l);
    }
    for (long long T = 0; T <= 2LL * L; ++T)
        for (long long M = -T; M <= T; M += 2)
            if (M * M * M == T * (T + 2)) {
                r.singular.push_back({int(T), int(M)});
                if (T % 2) r.halfint_singular = true;
            }
    // ell = 0 is the trivial zero of the symbol; everything else must be ell = 1, m = 1
    bool only_one = true;
    for (const auto& w : r.singular)
        if (w.twice_ell != 0 && !(w.twice_ell == 2 && w.twice_m == 2)) only_one = false;
    r.ok = r.triangular_cube_ells == std::vector<long long>{1} && only_one && !r.halfint_singular;
    return r;
}

Coefficients null_distribution(std::string_view name, int K) {
    if (name == "dalembert") {
        const PellSequence s = pell_ells(K);
        const int T = int(2 * s.ell.back());
        Coefficients f(T);
        for (std::size_t k = 0; k < s.ell.size(); ++k) {
            const int t = int(2 * s.ell[k]);
            f[t](m_index(t, int(2 * s.m[k])), m_index(t, int(2 * s.m[k]))) = 1.0;
        }
        return f;
    }
    const int T = 2 * K;
    Coefficients f(T);
    for (int t = 0; t <= T; ++t) {
        if (name == "zero_mode") {
            if (t % 2 == 0) f[t](t / 2, t / 2) = 1.0;
        } else if (name == "schrodinger+") {
            f[t](0, 0) = 1.0;
        } else if (name == "schrodinger-") {
            f[t](t, t) = 1.0;
        } else {
            throw std::invalid_argument("null_distribution: unknown name " + std::string(name));
        }
    }
    return f;
}

Coefficients apply_symbol(const Symbol& s, const Coefficients& f) {
    if (!s.is_left_invariant()) throw std::invalid_argument("apply_symbol: left-invariant symbols only");
    const int T = std::min(s.twice_max(), f.twice_max());
    Coefficients r(T);
    for (int t = 0; t <= T; ++t) r[t] = s.blocks()[t] * f[t];
    return r;
}

std::pair<Coefficients, double> nonhypo_witness(const Coefficients& a, int twice_max) {
    const Coefficients f = null_distribution("zero_mode", twice_max / 2);
    const DifferentialExpression d3 = vector_field(algebra_D3());
    const DifferentialExpression op = d3 * d3 + a * d3;
    const Symbol s = op.symbol(f.twice_max());
    double residual = 0.0;
    for (const auto& term : s.terms())
        for (int t = 0; t <= f.twice_max(); ++t)
            residual = std::max(residual, (term.base[t] * f[t]).cwiseAbs().maxCoeff());
    return {f, residual};
}

std::vector<double> sobolev_partial_sums(const Coefficients& f, double s) {
    std::vector<double> out;
    double acc = 0.0;
    for (int t = 0; t <= f.twice_max(); ++t) {
        acc += double(t + 1) * f[t].squaredNorm() * std::pow(japanese(t), 2.0 * s);
        out.push_back(acc);
    }
    return out;
}

}  // namespace su2pdo
