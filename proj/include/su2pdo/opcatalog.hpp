#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "su2pdo/symcalc.hpp"

namespace su2pdo {

struct CatalogParams {
    Complex c = 0.0;
    int k = 1;  // power in dXk_plus_c
};

struct CatalogEntry {
    std::string name;
    std::string description;
    bool diagonal = false;
    int band = 0;  // off-diagonal band width of the exact symbol
    std::string expected;  // classification quoted for the entry
};
const std::vector<CatalogEntry>& catalog();

// D1 D2 D3 d0 d+ d- Lap SubLap Heat Schrodinger+ Schrodinger- DAlembert P Cube D3_plus_c dXk_plus_c
DifferentialExpression builtin_expression(std::string_view name, const CatalogParams& p = {});
Symbol builtin(std::string_view name, int twice_max, const CatalogParams& p = {});
// diagonal closed form at (ell, m); nullopt for non-diagonal entries
std::optional<Complex> closed_form(std::string_view name, double ell, double m, const CatalogParams& p = {});

struct Witness {
    int twice_ell = 0, twice_m = 0;
};
struct GHVerdict {
    bool globally_hypoelliptic = false;
    bool infinitely_many_singular = false;
    std::vector<Witness> witnesses;  // singular (ell, m) with ell <= twice_max/2
    double inverse_bound = 0.0;      // sup ||sigma^{-1}|| over the nonsingular scanned blocks
    std::string certificate;
};
// families: D3_plus_c, dXk_plus_c, Schrodinger+, Schrodinger-, DAlembert, Cube, SubLap, Heat, Lap
GHVerdict gh_classify(std::string_view family, const CatalogParams& p = {}, int twice_max = 64);

// ell_k = floor((3 + 2 sqrt 2)^k / 4) and 2 m_k^2 = ell_k(ell_k + 1), k = 1..K
struct PellSequence {
    std::vector<long long> ell, m;
};
PellSequence pell_ells(int K);
// integer ell <= L with ell(ell+1)/2 a perfect square, by direct search
std::vector<long long> triangular_square_ells(long long L);
// min over non-integer ell <= L of |-2m^2 + ell(ell+1)|, exact (returned as a double of a dyadic)
double halfint_gap_check(int twice_L);

struct CubeReport {
    std::vector<long long> triangular_cube_ells;  // ell with ell(ell+1)/2 a cube, ell <= L
    std::vector<Witness> singular;                // zeros of -2m^3 + ell(ell+1)
    bool halfint_singular = false;
    bool ok = false;  // only ell = 1
};
CubeReport cube_check(int L);

// f^ for: "zero_mode" (m = n = 0, integer ell), "schrodinger+" (m = n = -ell),
// "schrodinger-" (m = n = ell), "dalembert" (Pell modes); K is the truncation in ell
// (number of Pell terms for dalembert)
Coefficients null_distribution(std::string_view name, int K);
// sigma(ell) f^(ell) for left-invariant sigma
Coefficients apply_symbol(const Symbol& s, const Coefficients& f);
// zero-mode distribution annihilated by D3^2 + a(x) D3; also returns the residual max
std::pair<Coefficients, double> nonhypo_witness(const Coefficients& a, int twice_max);
// partial sums of sum d ||f^||_HS^2 <ell>^{2s}
std::vector<double> sobolev_partial_sums(const Coefficients& f, double s);

}  // namespace su2pdo
