#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "parasphere/sphere.hpp"

namespace parasphere {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoxAxis {
    double lo = 0.0, hi = 0.0;
};

struct SamplePlan {
    enum class Kind { Grid, Random } kind = Kind::Grid;
    GridSpec grid;                      // Grid
    int count = 0;                      // Random
    std::uint64_t seed = 0;             // Random
    std::vector<BoxAxis> box_x, box_v;  // Random

    std::vector<Vec> points(int m) const;
    std::size_t size(int m) const;
};

struct RunConfig {
    int m = 1;
    std::string prepotential;
    std::vector<cplx> base;
    SamplePlan plan;
    std::map<std::string, double> tolerances; // overrides by residual name
    std::string report_path, csv_path, obj_path;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::json echo() const;
};

// Default tolerance per residual name: 1e-9 for closed-form quantities,
// 1e-6 / 1e-5 for the FD-backed identities.
std::map<std::string, double> default_tolerances();

struct CheckOutcome {
    nlohmann::json report;
    int exit_code = 0; // 0 pass, 1 residual failure, 3 mostly-degenerate plan
};

CheckOutcome run_check(const RunConfig& cfg, double tol_scale = 1.0, int jobs = 1);

struct RealizeOutcome {
    nlohmann::json report;
    int exit_code = 0;
    std::size_t csv_rows = 0;
    std::size_t obj_vertices = 0;
};

RealizeOutcome run_realize(const RunConfig& cfg);

struct InfoSummary {
    int m = 0;
    MatrixSignature sig_b, sig_g;
    double curvature = 0.0;
    bool curvature_is_gauss = false;
    bool congruence_applicable = false;
    std::string congruence_note;
};

InfoSummary run_info(const RunConfig& cfg);

// 17-significant-digit formatting used by the CSV/OBJ emitters.
std::string format_double(double v);

} // namespace parasphere
