#include "otm/config_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace otm {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double number_at(const Json& j, const char* where) {
    if (!j.is_number()) bad(std::string(where) + ": expected a number");
    return j.get<double>();
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) bad("matrix: expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
    if (cols == 0) bad("matrix: rows must be non-empty arrays");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            bad("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& entry = row[static_cast<std::size_t>(c)];
            if (!entry.is_array() || entry.size() != 2)
                bad("matrix: every entry must be [re, im]");
            m(r, c) = Complex(number_at(entry[0], "matrix entry"),
                              number_at(entry[1], "matrix entry"));
        }
    }
    if (!is_finite(m)) bad("matrix: entries must be finite");
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

SystemSpec spec_from_json(const Json& j) {
    if (!j.is_object()) bad("config: expected a JSON object");

    SystemSpec spec;
    bool seeded = false;
    if (j.contains("preset")) {
        const std::string name = j.at("preset").get<std::string>();
        if (name == "paper-2qubit") {
            spec = preset_two_qubit_quench();
            seeded = true;
        } else {
            bad("config: unknown preset \"" + name + "\"");
        }
    }

    if (j.contains("beta")) spec.beta = number_at(j.at("beta"), "beta");
    if (j.contains("h0")) spec.h0 = matrix_from_json(j.at("h0"));
    if (j.contains("h_tau")) spec.h_tau = matrix_from_json(j.at("h_tau"));
    if (j.contains("u")) {
        const Json& u = j.at("u");
        if (u.is_object()) {
            if (!u.contains("generator") || !u.contains("time"))
                bad("config: \"u\" object form needs \"generator\" and \"time\"");
            const Matrix k = matrix_from_json(u.at("generator"));
            if (!is_hermitian(k)) throw NotHermitian("config: evolution generator");
            const double t = number_at(u.at("time"), "u.time");
            spec.u_evol = mat_fn_hermitian(k, Complex(0.0, -t));
        } else {
            spec.u_evol = matrix_from_json(u);
        }
    }
    if (j.contains("initial_basis")) spec.initial_basis = matrix_from_json(j.at("initial_basis"));

    if (!seeded && (spec.h0.size() == 0 || spec.h_tau.size() == 0 || spec.u_evol.size() == 0))
        bad("config: \"h0\", \"h_tau\" and \"u\" are required without a preset");

    validate_spec(spec);
    return spec;
}

Json spec_to_json(const SystemSpec& spec) {
    Json j = Json::object();
    j["beta"] = spec.beta;
    j["h0"] = matrix_to_json(spec.h0);
    j["h_tau"] = matrix_to_json(spec.h_tau);
    j["u"] = matrix_to_json(spec.u_evol);
    if (spec.initial_basis) j["initial_basis"] = matrix_to_json(*spec.initial_basis);
    return j;
}

NoiseModel noise_from_json(const Json& j) {
    if (!j.is_object()) bad("noise: expected a JSON object");
    NoiseModel noise;
    if (j.contains("depol_1q")) noise.depol_1q = number_at(j.at("depol_1q"), "depol_1q");
    if (j.contains("depol_ctrl")) noise.depol_ctrl = number_at(j.at("depol_ctrl"), "depol_ctrl");
    if (j.contains("readout_p01")) noise.readout_p01 = number_at(j.at("readout_p01"), "readout_p01");
    if (j.contains("readout_p10")) noise.readout_p10 = number_at(j.at("readout_p10"), "readout_p10");
    validate_noise(noise);
    return noise;
}

Json noise_to_json(const NoiseModel& noise) {
    Json j = Json::object();
    j["depol_1q"] = noise.depol_1q;
    j["depol_ctrl"] = noise.depol_ctrl;
    j["readout_p01"] = noise.readout_p01;
    j["readout_p10"] = noise.readout_p10;
    return j;
}

std::string fmt_sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round_sig9(double v) { return std::strtod(fmt_sig9(v).c_str(), nullptr); }

}  // namespace otm
