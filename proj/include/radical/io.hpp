#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "radical/integrate.hpp"

#define RADICAL_VERSION "0.1.0"

namespace radical {

using ordered_json = nlohmann::ordered_json;

// Reals carry 17 significant digits so reports round trip bit-exactly.
inline ordered_json json_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return ordered_json::parse(buf);
}

inline ordered_json json_scalar(const Rat& v) {
    return mpq_class(v).get_num().get_str() + "/" + mpq_class(v).get_den().get_str();
}

inline ordered_json json_scalar(double v) { return json_real(v); }

template <typename T>
ordered_json matrix_json(const Mat<T>& m) {
    ordered_json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    ordered_json data = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(json_scalar(m(i, j)));
    out["data"] = data;
    return out;
}

inline double parse_real_entry(const ordered_json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return std::stod(s);
        return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    }
    throw std::invalid_argument("matrix entry must be a number or a fraction string");
}

inline Mat<double> parse_matrix_json(const ordered_json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::invalid_argument("matrix object needs rows, cols, data");
    std::size_t r = j["rows"].get<std::size_t>(), c = j["cols"].get<std::size_t>();
    const auto& data = j["data"];
    if (data.size() != r * c) throw std::invalid_argument("matrix data has the wrong length");
    Mat<double> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < c; ++k) m(i, k) = parse_real_entry(data[i * c + k]);
    return m;
}

inline ordered_json config_json(const GroupConfig& cfg) {
    ordered_json out;
    out["type"] = cfg.epsilon > 0 ? "so" : "sp";
    out["epsilon"] = cfg.epsilon;
    out["n"] = cfg.n;
    out["r"] = cfg.r;
    out["dim_W"] = cfg.dim_W();
    out["dim_X"] = cfg.dim_X();
    return out;
}

inline const char* measure_mode_name(MeasureMode m) {
    return m == MeasureMode::plain ? "plain" : "ad_invariant";
}

inline ordered_json jacobian_report_json(const JacobianReport& rep) {
    ordered_json out;
    out["config"] = config_json(rep.config);
    ordered_json t = ordered_json::array();
    for (double v : rep.torus) t.push_back(json_real(v));
    out["torus"] = t;
    out["det_numeric"] = json_real(rep.det_numeric);
    out["det_analytic"] = json_real(rep.det_analytic);
    out["det_closed"] = json_real(rep.det_closed);
    out["delta_N"] = json_real(rep.delta_N_value);
    out["gap_numeric"] = json_real(rep.gap_numeric);
    out["gap_closed"] = json_real(rep.gap_closed);
    out["calibration_sign"] = rep.sign_analytic;
    out["pass"] = rep.ok();
    return out;
}

inline ordered_json integration_report_json(const IntegrationReport& rep) {
    ordered_json out;
    out["config"] = config_json(rep.config);
    out["mode"] = measure_mode_name(rep.mode);
    out["lhs"] = json_real(rep.lhs);
    out["rhs"] = json_real(rep.rhs);
    out["stderr"] = json_real(rep.rhs_stderr);
    out["lhs_stderr"] = json_real(rep.lhs_stderr);
    out["samples"] = rep.samples;
    out["seed"] = rep.seed;
    out["crosscheck_gap"] = json_real(rep.crosscheck_gap);
    out["sheet_verified"] = rep.sheet_verified;
    out["pass"] = rep.pass;
    return out;
}

// Convergence table: fixed columns for downstream plotting.
struct ConvergenceRow {
    std::size_t samples = 0;
    double lhs = 0.0, rhs = 0.0, gap = 0.0, stderr_ = 0.0;
};

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "samples,lhs,rhs,abs_gap,stderr\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", r.samples, r.lhs,
                      r.rhs, r.gap, r.stderr_);
        os << buf;
    }
}

}  // namespace radical
