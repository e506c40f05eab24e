#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cistair/cistair.h"

namespace {

int report_error(cistair_status st) {
    std::fprintf(stderr, "error: %s\n", cistair_last_error());
    switch (st) {
        case CISTAIR_UNSUPPORTED: return 3;
        case CISTAIR_INVARIANT: return 4;
        case CISTAIR_BUDGET: return 5;
        default: return 2;
    }
}

int finish(cistair_status st, cistair_result* res) {
    if (!res) return report_error(st);
    std::printf("%s\n", cistair_result_json(res));
    const int code = cistair_result_status(res);
    cistair_result_free(res);
    if (code != 0) std::fprintf(stderr, "error: %s\n", cistair_last_error());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cistair: staircase laminates and convex-integration maps for two-phase conductivities"};
    app.require_subcommand(1);

    std::string config_file;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    const char* keys[] = {"K", "S1", "S2", "sigma1", "sigma2", "N", "delta0", "gamma", "epsilon", "alpha", "theta_grid",
                          "theta", "seed", "output_dir", "cell_budget", "kappa", "defect_target", "max_band_width",
                          "residual_grid", "moment_offset", "fit_min", "fit_max"};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_file, "key = value config file");
        sub->add_option("--set", sets, "override a config key (key=value), repeatable");
        for (const char* k : keys) {
            std::string name = std::string("--") + k;
            for (char& ch : name)
                if (ch == '_') ch = '-';
            sub->add_option_function<std::string>(name, [&flags, k](const std::string& v) { flags[k] = v; },
                                                  std::string("config key ") + k);
        }
    };
    CLI::App* ex = app.add_subcommand("exponents", "critical exponents and normal form of a coefficient pair");
    CLI::App* st = app.add_subcommand("staircase", "measure-level staircase iteration over a theta grid");
    CLI::App* re = app.add_subcommand("realize", "build the piecewise-affine staircase map and write artifacts");
    CLI::App* ve = app.add_subcommand("verify", "re-load artifacts and re-run every audit");
    for (CLI::App* s : {ex, st, re, ve}) add_common(s);
    std::string verify_dir;
    ve->add_option("dir", verify_dir, "artifact directory (default: output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cistair_config* cfg = nullptr;
    cistair_status rc = cistair_config_new(&cfg);
    if (rc != CISTAIR_OK) return report_error(rc);
    auto apply = [&](const std::string& k, const std::string& v) {
        rc = cistair_config_set(cfg, k.c_str(), v.c_str());
        return rc == CISTAIR_OK;
    };
    bool ok = true;
    if (!config_file.empty()) {
        rc = cistair_config_load(cfg, config_file.c_str());
        ok = rc == CISTAIR_OK;
    }
    if (const char* env = std::getenv("CISTAIR_OUTPUT_DIR"); ok && env && *env) ok = apply("output_dir", env);
    for (const std::string& s : sets) {
        if (!ok) break;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", s.c_str());
            cistair_config_free(cfg);
            return 2;
        }
        ok = apply(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) {
        if (!ok) break;
        ok = apply(k, v);
    }
    if (!ok) {
        const int code = report_error(rc);
        cistair_config_free(cfg);
        return code;
    }

    cistair_result* res = nullptr;
    if (ex->parsed()) {
        rc = cistair_exponents_cmd(cfg, &res);
    } else if (st->parsed()) {
        rc = cistair_staircase_cmd(cfg, &res);
    } else if (re->parsed()) {
        rc = cistair_realize_cmd(cfg, &res);
    } else {
        if (verify_dir.empty()) {
            char buf[4096];
            cistair_config_get(cfg, "output_dir", buf, sizeof buf);
            verify_dir = buf;
        }
        rc = cistair_verify_cmd(verify_dir.c_str(), &res);
    }
    cistair_config_free(cfg);
    return finish(rc, res);
}
