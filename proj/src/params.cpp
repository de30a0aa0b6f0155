#include "cnt/params.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "cnt/errors.hpp"

namespace cnt {

void ModelParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) fail(ErrorCode::invariant_violation,
                              std::string("parameter must be >= 0: ") + name);
    };
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) fail(ErrorCode::invariant_violation,
                             std::string("parameter must be > 0: ") + name);
    };
    positive(phi1, "phi1");
    positive(phi2, "phi2");
    positive(eps1, "eps1");
    positive(eps2, "eps2");
    nonneg(k_f, "k_f");
    nonneg(k_D, "k_D");
    nonneg(k_L1, "k_L1");
    nonneg(k_L2, "k_L2");
    nonneg(alpha1, "alpha1");
    if (!(photoperiod_on >= 0.0 && photoperiod_on <= 24.0))
        fail(ErrorCode::invariant_violation, "photoperiod_on must lie in [0, 24]");
}

ModelParams canonical_params() { return ModelParams{}; }

ModelParams semi_hierarchical_params() {
    ModelParams p;
    p.k_L2 = 0.025;
    return p;
}

namespace {

using Field = std::pair<const char*, double ModelParams::*>;

constexpr std::array<Field, 11> kFields{{
    {"phi1", &ModelParams::phi1},
    {"phi2", &ModelParams::phi2},
    {"eps1", &ModelParams::eps1},
    {"eps2", &ModelParams::eps2},
    {"k_f", &ModelParams::k_f},
    {"k_D", &ModelParams::k_D},
    {"k_L1", &ModelParams::k_L1},
    {"k_L2", &ModelParams::k_L2},
    {"alpha1", &ModelParams::alpha1},
    {"photoperiod_on", &ModelParams::photoperiod_on},
    {"photoperiod", &ModelParams::photoperiod_on}, // accepted alias
}};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void apply_override(ModelParams& p, const std::string& key, double value) {
    for (const auto& [name, member] : kFields) {
        if (key == name) {
            p.*member = value;
            return;
        }
    }
    fail(ErrorCode::usage, "unknown parameter key: " + key);
}

ModelParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open parameter file: " + path);
    ModelParams p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::io, path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            apply_override(p, key, std::stod(val));
        } catch (const std::invalid_argument&) {
            fail(ErrorCode::io, path + ":" + std::to_string(lineno) + ": bad number '" + val + "'");
        }
    }
    p.validate();
    return p;
}

std::string params_fingerprint(const ModelParams& p) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g",
                  p.phi1, p.phi2, p.eps1, p.eps2, p.k_f, p.k_D, p.k_L1, p.k_L2,
                  p.alpha1, p.photoperiod_on);
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ull;
    for (const char* c = buf; *c; ++c) {
        h ^= static_cast<std::uint64_t>(*c);
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace cnt
