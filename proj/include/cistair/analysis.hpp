#pragma once

#include <vector>

#include "cistair/coefficients.hpp"
#include "cistair/realize.hpp"

namespace cistair {

enum class NormKind { HS, Op };

double matrix_norm(const Mat2<double>& G, NormKind kind);

struct DistributionProfile {
    std::vector<double> t_grid;
    std::vector<double> lambda_values;  // |{|grad f| > t}| / |Omega|
    double fitted_slope = 0;
    double fit_min = 0, fit_max = 0;
};

// Geometric grid of `count` points from t0 to t1 inclusive.
std::vector<double> log_grid(double t0, double t1, int count);

// Exact per-cell aggregation; the slope is fitted over [fit_min, fit_max] on points with lambda > 0.
DistributionProfile distribution_function(const PiecewiseAffineMap& m, const std::vector<double>& t_grid,
                                          double fit_min, double fit_max, NormKind kind = NormKind::HS);

double weak_lp_quasinorm(const DistributionProfile& prof, double p);

// Sum over cells of area * |grad f|^p.
double lp_integral(const PiecewiseAffineMap& m, double p, NormKind kind = NormKind::HS);

// p * int_0^inf t^(p-1) lambda(t) dt on the exact step profile (unnormalized lambda).
double layer_cake_integral(const PiecewiseAffineMap& m, double p, NormKind kind = NormKind::HS);

struct ResidualEntry {
    int i = 0, j = 0;       // hat centred at (x0 + i h, y0 + j h)
    double value = 0;       // int sigma grad f^1 . grad phi
    double grad_l1 = 0;     // ||grad phi||_L1
};

struct WeakResidual {
    std::vector<ResidualEntry> entries;
    double max_abs = 0;
    double c = 0;  // max |value| / (gamma ||grad phi||_L1)
};

// Bilinear hats on a (grid x grid) interior node lattice of the domain bounding box, spacing
// width / (grid + 1). Phases are taken from the sigma field.
WeakResidual weak_residual(const PiecewiseAffineMap& m, const CoefficientPair& sigma, const SigmaField& field,
                           double gamma, int grid = 5);

}  // namespace cistair
