#include "cistair/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cistair/errors.hpp"

namespace cistair {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidInput, "config key '" + key + "': not a number: '" + v + "'");
    }
}

long to_int(const std::string& key, const std::string& v) {
    const double x = to_real(key, v);
    if (x != std::floor(x) || std::fabs(x) > 9e15) fail(ErrorCode::InvalidInput, "config key '" + key + "': not an integer");
    return static_cast<long>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

Mat2<double> to_matrix(const std::string& key, const std::string& v) {
    const auto l = to_list(key, v);
    if (l.size() != 4) fail(ErrorCode::InvalidInput, "config key '" + key + "': need 4 entries (row-major)");
    return Mat2<double>(l[0], l[1], l[2], l[3]);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "K") K = to_real(key, v), diagonal = true;
    else if (key == "S1") S1 = to_real(key, v), diagonal = true;
    else if (key == "S2") S2 = to_real(key, v), diagonal = true;
    else if (key == "sigma1") pair.sigma1 = to_matrix(key, v), diagonal = false;
    else if (key == "sigma2") pair.sigma2 = to_matrix(key, v), diagonal = false;
    else if (key == "N") N = static_cast<int>(to_int(key, v));
    else if (key == "delta0") delta0 = to_real(key, v);
    else if (key == "gamma") gamma = to_real(key, v);
    else if (key == "epsilon") epsilon = to_real(key, v);
    else if (key == "alpha") alpha = to_real(key, v);
    else if (key == "theta_grid") theta_grid = static_cast<int>(to_int(key, v));
    else if (key == "theta") theta = to_list(key, v);
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "output_dir") output_dir = v;
    else if (key == "cell_budget") cell_budget = to_int(key, v);
    else if (key == "kappa") kappa = to_real(key, v);
    else if (key == "defect_target") defect_target = to_real(key, v);
    else if (key == "max_band_width") max_band_width = to_real(key, v);
    else if (key == "residual_grid") residual_grid = static_cast<int>(to_int(key, v));
    else if (key == "moment_offset") moment_offset = to_real(key, v);
    else if (key == "fit_min") fit_min = to_real(key, v);
    else if (key == "fit_max") fit_max = to_real(key, v);
    else fail(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot read config file " + path);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::InvalidInput, path + ":" + std::to_string(no) + ": expected key = value");
        set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void RunConfig::validate() const {
    auto need = [](bool ok, const char* msg) {
        if (!ok) fail(ErrorCode::InvalidInput, msg);
    };
    if (diagonal) need(K >= 1 && S1 > 0 && S2 > 0, "need K >= 1 and S1, S2 > 0");
    need(N >= 1 && N <= 10000000, "N out of range");
    need(delta0 > 0, "delta0 must be > 0");
    need(gamma > 0 && gamma < 1, "gamma must lie in (0, 1)");
    need(epsilon > 0, "epsilon must be > 0");
    need(alpha > 0 && alpha <= 1, "alpha must lie in (0, 1]");
    need(theta_grid >= 1 && theta_grid <= 100000, "theta_grid out of range");
    need(cell_budget >= 1, "cell_budget must be >= 1");
    need(kappa >= 1, "kappa must be >= 1");
    need(defect_target > 0 && defect_target < 1, "defect_target must lie in (0, 1)");
    need(max_band_width >= 0, "max_band_width must be >= 0");
    need(residual_grid >= 1 && residual_grid <= 64, "residual_grid out of range");
    need(moment_offset > 0, "moment_offset must be > 0");
    need(fit_min > 0 && fit_max > fit_min, "need 0 < fit_min < fit_max");
    need(!output_dir.empty(), "output_dir is empty");
}

CoefficientPair RunConfig::coefficient_pair() const {
    if (diagonal) return diagonal_pair(K, S1, S2);
    return pair;
}

std::vector<double> RunConfig::thetas() const {
    if (!theta.empty()) return theta;
    std::vector<double> g(theta_grid);
    for (int i = 0; i < theta_grid; ++i) g[i] = M_PI * i / theta_grid;
    return g;
}

std::map<std::string, std::string> RunConfig::entries() const {
    std::map<std::string, std::string> e;
    if (diagonal) {
        e["K"] = fmt(K);
        e["S1"] = fmt(S1);
        e["S2"] = fmt(S2);
    } else {
        e["sigma1"] = fmt_list({pair.sigma1.m[0], pair.sigma1.m[1], pair.sigma1.m[2], pair.sigma1.m[3]});
        e["sigma2"] = fmt_list({pair.sigma2.m[0], pair.sigma2.m[1], pair.sigma2.m[2], pair.sigma2.m[3]});
    }
    e["N"] = std::to_string(N);
    e["delta0"] = fmt(delta0);
    e["gamma"] = fmt(gamma);
    e["epsilon"] = fmt(epsilon);
    e["alpha"] = fmt(alpha);
    if (theta.empty()) e["theta_grid"] = std::to_string(theta_grid);
    else e["theta"] = fmt_list(theta);
    e["seed"] = std::to_string(seed);
    e["output_dir"] = output_dir;
    e["cell_budget"] = std::to_string(cell_budget);
    e["kappa"] = fmt(kappa);
    e["defect_target"] = fmt(defect_target);
    e["max_band_width"] = fmt(max_band_width);
    e["residual_grid"] = std::to_string(residual_grid);
    e["moment_offset"] = fmt(moment_offset);
    e["fit_min"] = fmt(fit_min);
    e["fit_max"] = fmt(fit_max);
    return e;
}

}  // namespace cistair
