#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cistair/geometry.hpp"
#include "cistair/laminate.hpp"
#include "cistair/targets.hpp"

namespace cistair {

enum class CellKind { Affine = 0, Target1 = 1, Target2 = 2, Top = 3, Defect = 4 };

const char* kind_name(CellKind k);

struct Cell {
    Polygon poly;
    Mat2<double> G;  // gradient
    Vec2 c;          // f(x) = G x + c
    int level = 0;   // refinement level that created the cell
    bool active = true;
    CellKind kind = CellKind::Affine;
    int atom = -1;   // laminate atom for laminate realizations, -1 for defect pieces
    int node = -1;   // tree node where a defect piece was cut off

    Vec2 eval(Vec2 x) const { return {G(0, 0) * x.x + G(0, 1) * x.y + c.x, G(1, 0) * x.x + G(1, 1) * x.y + c.y}; }
};

struct PiecewiseAffineMap {
    Polygon domain;
    Mat2<double> boundary;
    std::vector<Cell> cells;

    double cell_area() const;
};

struct FirstOrderOptions {
    // target area fraction of boundary-layer (defect) pieces per split
    double defect_target = 0.02;
    // slope of the boundary-layer tent, >= 1
    double kappa = 64.0;
    int min_bands = 1;
    int max_bands = 64;
    // absolute cap on the band period (0 = none); overrides max_bands
    double max_band_width = 0.03125;
};

// Strip construction for A = lambda B + (1 - lambda) C on a convex cell.
// Pieces carry atom 0 (gradient B), 1 (gradient C) or -1 (boundary layer).
PiecewiseAffineMap realize_first_order(const Polygon& cell, const Mat2<double>& A, Vec2 offset, const Mat2<double>& B,
                                       const Mat2<double>& C, double lambda, const FirstOrderOptions& opt = {});

// Recursive realization down the splitting tree; atoms tag laminate atom indices.
PiecewiseAffineMap realize_laminate(const Polygon& cell, const Mat2<double>& A, Vec2 offset,
                                    const Laminate<double>& lam, const FirstOrderOptions& opt = {});

// Rank-one factorization D = a (x) nu, |nu| = 1.
void rank_one_factor(const Mat2<double>& D, Vec2& a, Vec2& nu);

struct AuditResult {
    std::string name;
    bool ok = true;
    double worst = 0;
    std::string detail;
};

AuditResult audit_area(const PiecewiseAffineMap& m, double rel_tol = 1e-9);
AuditResult audit_continuity(const PiecewiseAffineMap& m, double tol = 1e-9);
AuditResult audit_boundary(const PiecewiseAffineMap& m, double tol = 1e-11);
AuditResult audit_convexity(const PiecewiseAffineMap& m);

// Holder seminorm of f - boundary x over vertex pairs: all pairs inside each cell plus `samples` random pairs.
double holder_seminorm(const PiecewiseAffineMap& m, double alpha, std::uint64_t seed, int samples = 200000);
double sup_deviation(const PiecewiseAffineMap& m);

struct StaircaseParams {
    int N = 8;
    double delta0 = 0.05;
    double gamma = 0.05;
    double epsilon = 1.0;
    double alpha = 0.5;
    long cell_budget = 1000000;
    std::uint64_t seed = 1;
    FirstOrderOptions split;

    // derived by derive_sequences
    double delta = 0;
    double c_hat = 0;       // empirical decomposition constant
    double m_const = 0;
    double dist_S1_T = 0;
    std::vector<double> rho;  // rho[n], n = 1..N+1 (rho[0] unused)
    std::vector<double> delta_n;
};

void derive_sequences(StaircaseParams& p, const DiagonalPairParams<double>& coeffs);

struct LevelStats {
    int n = 0;
    double omega_area = 0;     // |Omega_n| / |Omega|
    double defect_area = 0;    // defect pieces created at level n, fraction of |Omega|
    double max_theta = 0;      // largest |theta_A| over active cells entering level n
    double lower = 0, upper = 0;  // area sandwich bounds
    long cells = 0;
};

struct StaircaseRun {
    PiecewiseAffineMap map;
    StaircaseParams params;
    DiagonalPairParams<double> coeffs;
    std::vector<double> omega_n_areas;  // n = 1..depth+1
    std::vector<LevelStats> levels;
    double p_delta0 = 0;
    double c_growth = 0;   // empirical constant used in the sandwich
    int achieved_depth = 0;
    bool budget_exhausted = false;
    bool nesting_ok = true;
};

// Empirical constants: decomposition constant on the unit sphere and growth sandwich constant.
double empirical_decomposition_constant(const DiagonalPairParams<double>& p, std::uint64_t seed, int samples);

StaircaseRun build_staircase_map(const StaircaseParams& params, const Polygon& domain,
                                 const DiagonalPairParams<double>& coeffs);

// |Omega_n| / |Omega| recomputed from cell level tags.
std::vector<double> omega_areas_from_cells(const PiecewiseAffineMap& m, int depth);

struct SigmaField {
    std::vector<int> phase;  // 1 or 2
    std::vector<Vec2> residual_a, residual_b;
    std::vector<char> ambiguous;
    double max_residual_retired = 0;
    double max_dist_retired = 0;
    double c_ratio = 0;  // max residual / gamma over retired cells
};

SigmaField extract_sigma_field(const PiecewiseAffineMap& m, const DiagonalPairParams<double>& coeffs, double gamma);

}  // namespace cistair
