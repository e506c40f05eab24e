#include "cistair/cistair.h"

#include <cstring>
#include <new>
#include <string>

#include "cistair/commands.hpp"
#include "cistair/errors.hpp"
#include "cistair/staircase.hpp"

struct cistair_config {
    cistair::RunConfig cfg;
};

struct cistair_result {
    int status = 0;
    std::string json;
};

namespace {

thread_local std::string last_error;

cistair_status code_of(cistair::ErrorCode c) { return static_cast<cistair_status>(static_cast<int>(c)); }

template <class F>
cistair_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const cistair::Error& e) {
        last_error = e.what();
        return code_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CISTAIR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CISTAIR_INTERNAL;
    }
}

cistair_status wrap(const cistair::CommandResult& r, cistair_result** out) {
    auto* res = new cistair_result;
    res->status = r.status;
    res->json = r.report.dump(2);
    *out = res;
    if (r.status != 0) last_error = r.report.value("failed", std::string(r.status == 5 ? "cell budget exhausted" : ""));
    return static_cast<cistair_status>(r.status);
}

cistair_status null_arg(const char* what) {
    last_error = std::string("null argument: ") + what;
    return CISTAIR_INVALID_INPUT;
}

}  // namespace

extern "C" {

const char* cistair_version(void) { return "0.1.0"; }

const char* cistair_last_error(void) { return last_error.c_str(); }

cistair_status cistair_config_new(cistair_config** out) {
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new cistair_config;
        return CISTAIR_OK;
    });
}

void cistair_config_free(cistair_config* cfg) { delete cfg; }

cistair_status cistair_config_set(cistair_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return null_arg("config/key/value");
    return guarded([&] {
        cfg->cfg.set(key, value);
        return CISTAIR_OK;
    });
}

cistair_status cistair_config_load(cistair_config* cfg, const char* path) {
    if (!cfg || !path) return null_arg("config/path");
    return guarded([&] {
        cfg->cfg.load_file(path);
        return CISTAIR_OK;
    });
}

cistair_status cistair_config_get(const cistair_config* cfg, const char* key, char* buf, size_t len) {
    if (!cfg || !key || !buf || len == 0) return null_arg("config/key/buf");
    return guarded([&] {
        const auto e = cfg->cfg.entries();
        const auto it = e.find(key);
        if (it == e.end()) cistair::fail(cistair::ErrorCode::InvalidInput, std::string("unknown config key '") + key + "'");
        std::strncpy(buf, it->second.c_str(), len - 1);
        buf[len - 1] = '\0';
        return CISTAIR_OK;
    });
}

cistair_status cistair_exponents_cmd(const cistair_config* cfg, cistair_result** out) {
    if (!cfg || !out) return null_arg("config/out");
    *out = nullptr;
    return guarded([&] { return wrap(cistair::cmd_exponents(cfg->cfg), out); });
}

cistair_status cistair_staircase_cmd(const cistair_config* cfg, cistair_result** out) {
    if (!cfg || !out) return null_arg("config/out");
    *out = nullptr;
    return guarded([&] { return wrap(cistair::cmd_staircase(cfg->cfg), out); });
}

cistair_status cistair_realize_cmd(const cistair_config* cfg, cistair_result** out) {
    if (!cfg || !out) return null_arg("config/out");
    *out = nullptr;
    return guarded([&] { return wrap(cistair::cmd_realize(cfg->cfg), out); });
}

cistair_status cistair_verify_cmd(const char* dir, cistair_result** out) {
    if (!dir || !out) return null_arg("dir/out");
    *out = nullptr;
    return guarded([&] { return wrap(cistair::cmd_verify(dir), out); });
}

int cistair_result_status(const cistair_result* r) { return r ? r->status : -1; }

const char* cistair_result_json(const cistair_result* r) { return r ? r->json.c_str() : ""; }

void cistair_result_free(cistair_result* r) { delete r; }

cistair_status cistair_exponents(const double sigma1[4], const double sigma2[4], double* K_star, double* p, double* q) {
    if (!sigma1 || !sigma2 || !K_star || !p || !q) return null_arg("matrices/outputs");
    return guarded([&] {
        cistair::CoefficientPair pair{{sigma1[0], sigma1[1], sigma1[2], sigma1[3]}, {sigma2[0], sigma2[1], sigma2[2], sigma2[3]}};
        cistair::validate_elliptic(pair);
        const auto e = cistair::critical_exponents_general(pair);
        *K_star = e.K_star;
        *p = e.p_opt;
        *q = e.q_opt;
        return CISTAIR_OK;
    });
}

cistair_status cistair_theta_functions(double K, double S1, double S2, double theta, double out[5]) {
    if (!out) return null_arg("out");
    return guarded([&] {
        const auto params = cistair::diagonal_params<double>(K, S1, S2);
        const auto f = cistair::theta_functions(params, theta, false);
        out[0] = f.lambda1;
        out[1] = f.lambda2;
        out[2] = f.l;
        out[3] = f.L;
        out[4] = f.p;
        return CISTAIR_OK;
    });
}

}  // extern "C"
