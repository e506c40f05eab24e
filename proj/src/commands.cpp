#include "cistair/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cistair/analysis.hpp"
#include "cistair/errors.hpp"
#include "cistair/io.hpp"
#include "cistair/staircase.hpp"

namespace cistair {

using nlohmann::json;

namespace {

std::string join(const std::string& dir, const std::string& name) { return (std::filesystem::path(dir) / name).string(); }

json audit_json(const AuditResult& a) { return {{"name", a.name}, {"ok", a.ok}, {"worst", a.worst}, {"detail", a.detail}}; }

double exponent_at_zero(const DiagonalPairParams<double>& c) { return 1 + theta_functions(c, 0.0, false).l; }

StaircaseParams staircase_params(const RunConfig& cfg) {
    StaircaseParams sp;
    sp.N = cfg.N;
    sp.delta0 = cfg.delta0;
    sp.gamma = cfg.gamma;
    sp.epsilon = cfg.epsilon;
    sp.alpha = cfg.alpha;
    sp.cell_budget = cfg.cell_budget;
    sp.seed = cfg.seed;
    sp.split.kappa = cfg.kappa;
    sp.split.defect_target = cfg.defect_target;
    sp.split.max_band_width = cfg.max_band_width;
    return sp;
}

struct MapAnalysis {
    json summary;
    json audits = json::array();
    SigmaField field;
    DistributionProfile profile;
    std::vector<double> omega;
    double p0 = 0;
};

// Everything that can be recomputed from the mesh alone; shared by realize and verify.
MapAnalysis analyze_map(const PiecewiseAffineMap& m, const DiagonalPairParams<double>& coeffs, const RunConfig& cfg,
                        int depth) {
    MapAnalysis a;
    a.p0 = exponent_at_zero(coeffs);
    a.field = extract_sigma_field(m, coeffs, cfg.gamma);
    a.profile = distribution_function(m, log_grid(0.5, 64, 97), cfg.fit_min, cfg.fit_max);
    a.omega = omega_areas_from_cells(m, depth);
    const WeakResidual wr = weak_residual(m, cfg.coefficient_pair(), a.field, cfg.gamma, cfg.residual_grid);

    double retired = 0, det_min = HUGE_VAL, phase_area[2] = {0, 0};
    long ambiguous = 0;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const Cell& c = m.cells[i];
        if (c.active) continue;
        const double ar = polygon_area(c.poly);
        retired += ar;
        phase_area[a.field.phase[i] - 1] += ar;
        det_min = std::min(det_min, c.G.det());
        ambiguous += a.field.ambiguous[i];
    }
    const double dom = polygon_area(m.domain);

    double omega_slope = NAN;
    if (a.omega.size() >= 3) {
        std::vector<double> x, y;
        for (std::size_t n = 2; n <= a.omega.size(); ++n)
            if (a.omega[n - 1] > 0) x.push_back(static_cast<double>(n)), y.push_back(a.omega[n - 1]);
        if (x.size() >= 2) omega_slope = loglog_slope(x, y);
    }
    const double holder = holder_seminorm(m, cfg.alpha, cfg.seed);

    a.summary = {{"cells", m.cells.size()},
                 {"depth", depth},
                 {"p0", a.p0},
                 {"omega_areas", a.omega},
                 {"omega_slope", omega_slope},
                 {"distribution_slope", a.profile.fitted_slope},
                 {"fit_range", {cfg.fit_min, cfg.fit_max}},
                 {"weak_quasinorm_p0", weak_lp_quasinorm(a.profile, a.p0)},
                 {"lp_integral_p0", lp_integral(m, a.p0)},
                 {"lp_integral_below", lp_integral(m, std::max(1.0, a.p0 - cfg.moment_offset))},
                 {"retired_area", retired / dom},
                 {"phase_fractions", {retired > 0 ? phase_area[0] / retired : 0, retired > 0 ? phase_area[1] / retired : 0}},
                 {"ambiguous_cells", ambiguous},
                 {"max_residual_retired", a.field.max_residual_retired},
                 {"residual_constant", a.field.c_ratio},
                 {"max_dist_retired", a.field.max_dist_retired},
                 {"weak_residual_max", wr.max_abs},
                 {"weak_residual_c", wr.c},
                 {"holder_seminorm", holder},
                 {"sup_deviation", sup_deviation(m)}};

    a.audits.push_back(audit_json(audit_area(m)));
    a.audits.push_back(audit_json(audit_continuity(m)));
    a.audits.push_back(audit_json(audit_boundary(m)));
    a.audits.push_back(audit_json(audit_convexity(m)));
    a.audits.push_back({{"name", "retired_distance"},
                        {"ok", a.field.max_dist_retired < cfg.gamma},
                        {"worst", a.field.max_dist_retired},
                        {"detail", "dist(grad f, T) on retired cells, limit gamma = " + fmt_real(cfg.gamma)}});
    a.audits.push_back({{"name", "retired_determinant"},
                        {"ok", retired == 0 || det_min > 0},
                        {"worst", retired > 0 ? det_min : 0.0},
                        {"detail", "smallest det(grad f) on retired cells"}});
    bool nested = true;
    for (std::size_t n = 1; n < a.omega.size(); ++n)
        if (a.omega[n] > a.omega[n - 1] + 1e-12) nested = false;
    a.audits.push_back({{"name", "nesting"}, {"ok", nested}, {"worst", 0}, {"detail", "Omega_{n+1} within Omega_n"}});
    a.audits.push_back({{"name", "holder"},
                        {"ok", holder < cfg.epsilon},
                        {"worst", holder},
                        {"detail", "[f - Jx]_C^alpha on vertex pairs, limit epsilon = " + fmt_real(cfg.epsilon)}});
    return a;
}

bool all_ok(const json& audits) {
    for (const auto& a : audits)
        if (!a.at("ok").get<bool>()) return false;
    return true;
}

std::string failed_names(const json& audits) {
    std::string s;
    for (const auto& a : audits)
        if (!a.at("ok").get<bool>()) s += (s.empty() ? "" : ", ") + a.at("name").get<std::string>();
    return s;
}

}  // namespace

DiagonalPairParams<double> resolve_diagonal(const RunConfig& cfg) {
    double K = cfg.K, S1 = cfg.S1, S2 = cfg.S2;
    if (!cfg.diagonal) {
        const CoefficientPair pair = cfg.coefficient_pair();
        validate_elliptic(pair);
        if (!match_diagonal_form(pair, K, S1, S2))
            fail(ErrorCode::Unsupported, "staircase constructions need a pair in diagonal normal form");
    }
    return diagonal_params<double>(K, S1, S2);
}

CommandResult cmd_exponents(const RunConfig& cfg) {
    cfg.validate();
    const CoefficientPair pair = cfg.coefficient_pair();
    validate_elliptic(pair);
    const ExponentReport e = critical_exponents_general(pair);
    CommandResult r;
    r.report = {{"schema", kReportSchema},
                {"command", "exponents"},
                {"sigma1", {pair.sigma1.m[0], pair.sigma1.m[1], pair.sigma1.m[2], pair.sigma1.m[3]}},
                {"sigma2", {pair.sigma2.m[0], pair.sigma2.m[1], pair.sigma2.m[2], pair.sigma2.m[3]}},
                {"single_phase", e.single_phase},
                {"K_star", e.K_star},
                {"q", e.q_opt},
                {"p", e.single_phase ? json("inf") : json(e.p_opt)},
                {"d1", e.d1},
                {"d2", e.d2},
                {"m", e.m},
                {"n", e.n}};
    if (e.single_phase) return r;
    double K, S1, S2;
    if (cfg.diagonal || match_diagonal_form(pair, K, S1, S2)) {
        const auto d = resolve_diagonal(cfg);
        r.report["normal_form"] = "diagonal";
        r.report["K"] = d.K;
        r.report["S1"] = d.S1;
        r.report["S2"] = d.S2;
        r.report["k"] = d.k;
        r.report["s1"] = d.s1;
        r.report["s2"] = d.s2;
        r.report["s"] = d.s;
        r.report["S"] = d.S;
        r.report["case"] = case_name(d.pair_case);
        r.report["flipped"] = d.flipped;
    } else {
        r.report["normal_form"] = "general";
    }
    return r;
}

CommandResult cmd_staircase(const RunConfig& cfg) {
    cfg.validate();
    const auto params = resolve_diagonal(cfg);
    ensure_directory(cfg.output_dir);
    std::ostringstream table, series;
    table << "# schema: " << kThetaCsvSchema << '\n' << "theta,lambda1,lambda2,l,L,p\n";
    series << "# schema: " << kSeriesCsvSchema << '\n' << "theta_index,theta,n,mass,moment,moment_below\n";
    json per = json::array();
    for (const double th : cfg.thetas()) {
        const auto f = theta_functions(params, th, false);
        table << fmt_real(th) << ',' << fmt_real(f.lambda1) << ',' << fmt_real(f.lambda2) << ',' << fmt_real(f.l) << ','
              << fmt_real(f.L) << ',' << fmt_real(f.p) << '\n';
        std::vector<std::vector<double>> below;
        const double pb = std::max(1e-9, f.p - cfg.moment_offset);
        const IterateResult it = iterate(params, th, cfg.N, {pb}, &below, false);
        const std::size_t idx = per.size();
        for (int n = 1; n <= cfg.N; ++n)
            series << idx << ',' << fmt_real(th) << ',' << n << ',' << fmt_real(it.mass_series[n - 1]) << ','
                   << fmt_real(it.moment_series[n - 1]) << ',' << fmt_real(below[0][n - 1]) << '\n';
        json e{{"theta", th}, {"p", f.p}, {"l", f.l}};
        // fit nu_n(S_{n+1}) against n + 1 on the upper part of the run
        const int lo = std::max(1, cfg.N / 16);
        if (cfg.N - lo + 1 >= 2) {
            std::vector<double> x, y;
            for (int n = lo; n <= cfg.N; ++n) x.push_back(n + 1.0), y.push_back(it.mass_series[n - 1]);
            e["mass_slope"] = loglog_slope(x, y);
            e["fit_n"] = {lo, cfg.N};
        }
        if (cfg.N >= 2) {
            const int h = cfg.N / 2;
            e["moment_increment"] = it.moment_series[cfg.N - 1] - it.moment_series[h - 1];
            e["moment_below_increment"] = below[0][cfg.N - 1] - below[0][h - 1];
        }
        e["moment_final"] = it.moment_series.back();
        e["moment_below_final"] = below[0].back();
        per.push_back(std::move(e));
    }
    write_text_file(join(cfg.output_dir, "theta_table.csv"), table.str());
    write_text_file(join(cfg.output_dir, "series.csv"), series.str());
    CommandResult r;
    r.report = {{"schema", kReportSchema}, {"command", "staircase"}, {"N", cfg.N}, {"runs", std::move(per)}};
    write_text_file(join(cfg.output_dir, "staircase_summary.json"), r.report.dump(2) + "\n");
    return r;
}

CommandResult cmd_realize(const RunConfig& cfg) {
    cfg.validate();
    const auto coeffs = resolve_diagonal(cfg);
    const StaircaseRun run = build_staircase_map(staircase_params(cfg), rectangle(0, 0, 1, 1), coeffs);
    const MapAnalysis a = analyze_map(run.map, coeffs, cfg, run.achieved_depth);

    json audits = a.audits;
    bool upper_ok = true;
    for (const auto& l : run.levels)
        if (l.omega_area > l.upper + 1e-12) upper_ok = false;
    audits.push_back({{"name", "sandwich_upper"}, {"ok", upper_ok}, {"worst", 0}, {"detail", "|Omega_n| below the product bound"}});

    ensure_directory(cfg.output_dir);
    write_text_file(join(cfg.output_dir, "mesh.json"), mesh_to_json(run.map, a.field.phase).dump() + "\n");
    {
        std::ostringstream os;
        write_mesh_csv(os, run.map, a.field.phase);
        write_text_file(join(cfg.output_dir, "mesh.csv"), os.str());
    }
    {
        std::ostringstream os;
        os << "# schema: " << kProfileCsvSchema << '\n' << "t,lambda,t_p_lambda\n";
        for (std::size_t i = 0; i < a.profile.t_grid.size(); ++i) {
            const double t = a.profile.t_grid[i], l = a.profile.lambda_values[i];
            os << fmt_real(t) << ',' << fmt_real(l) << ',' << fmt_real(std::pow(t, a.p0) * l) << '\n';
        }
        write_text_file(join(cfg.output_dir, "profile.csv"), os.str());
    }
    {
        std::ostringstream os;
        os << "# schema: " << kLevelsCsvSchema << '\n' << "n,omega_area,defect_area,max_theta,lower,upper,cells,rho\n";
        for (const auto& l : run.levels)
            os << l.n << ',' << fmt_real(l.omega_area) << ',' << fmt_real(l.defect_area) << ',' << fmt_real(l.max_theta)
               << ',' << fmt_real(l.lower) << ',' << fmt_real(l.upper) << ',' << l.cells << ','
               << fmt_real(static_cast<std::size_t>(l.n) < run.params.rho.size() ? run.params.rho[l.n] : 0.0) << '\n';
        write_text_file(join(cfg.output_dir, "levels.csv"), os.str());
    }

    json levels = json::array();
    for (const auto& l : run.levels)
        levels.push_back({{"n", l.n}, {"omega_area", l.omega_area}, {"defect_area", l.defect_area}, {"lower", l.lower},
                          {"upper", l.upper}, {"cells", l.cells}});
    json manifest{{"schema", kManifestSchema},
                  {"config", cfg.entries()},
                  {"derived",
                   {{"delta", run.params.delta},
                    {"rho", run.params.rho},
                    {"delta_n", run.params.delta_n},
                    {"m_const", run.params.m_const},
                    {"dist_S1_T", run.params.dist_S1_T},
                    {"p_delta0", run.p_delta0}}},
                  {"empirical_constants", {{"decomposition", run.params.c_hat}, {"growth", run.c_growth}}},
                  {"seed", cfg.seed},
                  {"requested_depth", cfg.N},
                  {"achieved_depth", run.achieved_depth},
                  {"budget_exhausted", run.budget_exhausted},
                  {"levels", levels},
                  {"summary", a.summary},
                  {"audits", audits},
                  {"files", {"mesh.json", "mesh.csv", "profile.csv", "levels.csv"}}};
    write_text_file(join(cfg.output_dir, "manifest.json"), manifest.dump(2) + "\n");

    CommandResult r;
    r.report = {{"schema", kReportSchema},   {"command", "realize"},        {"output_dir", cfg.output_dir},
                {"achieved_depth", run.achieved_depth}, {"budget_exhausted", run.budget_exhausted},
                {"summary", a.summary},      {"audits", audits}};
    if (!all_ok(audits)) {
        r.status = 4;
        r.report["failed"] = failed_names(audits);
    } else if (run.budget_exhausted) {
        r.status = 5;
    }
    return r;
}

CommandResult cmd_verify(const std::string& dir) {
    json manifest, mesh;
    try {
        manifest = json::parse(read_text_file(join(dir, "manifest.json")));
        mesh = json::parse(read_text_file(join(dir, "mesh.json")));
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("cannot parse artifacts: ") + e.what());
    }
    check_schema(manifest, kManifestSchema, "manifest.json");
    const std::pair<const char*, const char*> csvs[] = {
        {"mesh.csv", kMeshCsvSchema}, {"profile.csv", kProfileCsvSchema}, {"levels.csv", kLevelsCsvSchema}};
    for (const auto& [name, schema] : csvs) {
        std::istringstream is(read_text_file(join(dir, name)));
        check_csv_schema(is, schema, name);
    }

    RunConfig cfg;
    try {
        for (const auto& [k, v] : manifest.at("config").items()) cfg.set(k, v.get<std::string>());
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("manifest config: ") + e.what());
    }
    cfg.validate();
    const auto coeffs = resolve_diagonal(cfg);
    std::vector<int> phase;
    const PiecewiseAffineMap m = mesh_from_json(mesh, &phase);
    const int depth = manifest.at("achieved_depth");
    const MapAnalysis a = analyze_map(m, coeffs, cfg, depth);

    json audits = a.audits;
    audits.push_back({{"name", "phase_tags"},
                      {"ok", phase == a.field.phase},
                      {"worst", 0},
                      {"detail", "stored phase tags equal the nearest target set"}});
    // mesh CSV must agree with the mesh JSON
    {
        std::ostringstream os;
        write_mesh_csv(os, m, phase);
        const bool same = os.str() == read_text_file(join(dir, "mesh.csv"));
        audits.push_back({{"name", "mesh_csv"}, {"ok", same}, {"worst", 0}, {"detail", "flat CSV matches mesh JSON"}});
    }
    bool upper_ok = true;
    const auto& levels = manifest.at("levels");
    for (const auto& l : levels) {
        const std::size_t n = l.at("n");
        if (n >= 1 && n <= a.omega.size() && a.omega[n - 1] > l.at("upper").get<double>() + 1e-12) upper_ok = false;
    }
    audits.push_back({{"name", "sandwich_upper"}, {"ok", upper_ok}, {"worst", 0}, {"detail", "|Omega_n| below the product bound"}});

    // recomputed summary statistics must reproduce the manifest
    double worst = 0;
    std::string which;
    const json& stored = manifest.at("summary");
    for (const auto& [k, v] : a.summary.items()) {
        if (!stored.contains(k)) {
            which += (which.empty() ? "" : ", ") + k;
            worst = HUGE_VAL;
            continue;
        }
        const std::string x = v.dump(), y = stored.at(k).dump();
        if (x != y) {
            which += (which.empty() ? "" : ", ") + k;
            worst = HUGE_VAL;
        }
    }
    audits.push_back({{"name", "summary_reproduced"},
                      {"ok", which.empty()},
                      {"worst", worst},
                      {"detail", which.empty() ? std::string("all summary statistics identical") : "differs: " + which}});

    CommandResult r;
    r.report = {{"schema", kReportSchema}, {"command", "verify"}, {"dir", dir}, {"summary", a.summary}, {"audits", audits}};
    if (!all_ok(audits)) {
        r.status = 4;
        r.report["failed"] = failed_names(audits);
    }
    return r;
}

}  // namespace cistair
