#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cistair/coefficients.hpp"

namespace cistair {

// Key-value run configuration. See README for the key list.
struct RunConfig {
    bool diagonal = true;  // (K, S1, S2) given instead of matrices
    double K = 2, S1 = 2, S2 = 2;
    CoefficientPair pair;
    int N = 8;
    double delta0 = 0.05;
    double gamma = 0.05;
    double epsilon = 1.0;
    double alpha = 0.5;
    int theta_grid = 1;           // uniform grid on [0, pi), ignored when `theta` is set
    std::vector<double> theta;    // explicit angles
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    long cell_budget = 1000000;
    double kappa = 64.0;
    double defect_target = 0.02;
    double max_band_width = 0.03125;
    int residual_grid = 5;
    double moment_offset = 0.1;
    double fit_min = 2, fit_max = 8;  // slope fit range for the gradient distribution

    // Applies one key; throws InvalidInput on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    void load_file(const std::string& path);
    void validate() const;
    CoefficientPair coefficient_pair() const;
    std::vector<double> thetas() const;
    std::map<std::string, std::string> entries() const;
};

}  // namespace cistair
