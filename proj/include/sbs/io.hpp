#pragma once

// Serialization: density operators and certification reports as JSON, sweep
// outputs as CSV (headers are part of the interface and fixed), flat sphere
// parameter files. CSV numbers are printed with %.17g so identical runs are
// byte-identical.

#include <string>
#include <vector>

#include <json.hpp>

#include "sbs/broadcast.hpp"
#include "sbs/qstate.hpp"
#include "sbs/sphere.hpp"

namespace sbs {

std::string format_double(double v);  // %.17g

// {"dims": [...], "re": [[...]], "im": [[...]]}
nlohmann::json density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const nlohmann::json& j, double tol = default_tol);
DensityOperator load_density(const std::string& path, double tol = default_tol);

nlohmann::json report_to_json(const SbsReport& report);
nlohmann::json witness_to_json(const WitnessReport& report);

// Flat key-value file holding SphereParams (field names as keys) plus the
// partition and limit-mode selection.
struct SphereConfig {
    SphereParams params;
    FractionPartition partition;
    LimitMode mode = LimitMode::Thermodynamic;
};

SphereConfig sphere_config_from_json(const nlohmann::json& j);
nlohmann::json sphere_config_to_json(const SphereConfig& config);
SphereConfig load_sphere_config(const std::string& path);

// header: f,I_bits
std::string phase_csv(const std::vector<PhasePoint>& points);
nlohmann::json phase_json(const std::vector<PhasePoint>& points);

// header: t_over_tau,f,L,I_bits,H_S,bound_rhs,decoh_factor,macro_overlap,applicable
std::string bound_csv(const BoundReport& report);
nlohmann::json bound_json(const BoundReport& report);

// header: t_over_tau,delta,f_star,R_delta  (R_delta empty when not reached)
struct RedundancyRow {
    double t_over_tau = 0.0;
    double delta = 0.0;
    RedundancyResult result;
};
std::string redundancy_csv(const std::vector<RedundancyRow>& rows);
nlohmann::json redundancy_json(const std::vector<RedundancyRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sbs
