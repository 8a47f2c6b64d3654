#include "sbs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sbs {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json density_to_json(const DensityOperator& rho) {
    json j;
    j["dims"] = rho.dims.extents;
    const long n = rho.entries.rows();
    json re = json::array();
    json im = json::array();
    for (long r = 0; r < n; ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (long c = 0; c < n; ++c) {
            re_row.push_back(rho.entries(r, c).real());
            im_row.push_back(rho.entries(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

DensityOperator density_from_json(const json& j, double tol) {
    if (!j.contains("dims") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("density file needs dims, re, im");
    SubsystemDims dims{j.at("dims").get<std::vector<int>>()};
    dims.validate();
    const long n = dims.total();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<long>(re.size()) != n || static_cast<long>(im.size()) != n)
        throw std::invalid_argument("matrix size does not match dims");
    Matrix m(n, n);
    for (long r = 0; r < n; ++r) {
        const auto& re_row = re.at(static_cast<size_t>(r));
        const auto& im_row = im.at(static_cast<size_t>(r));
        if (static_cast<long>(re_row.size()) != n || static_cast<long>(im_row.size()) != n)
            throw std::invalid_argument("ragged matrix row");
        for (long c = 0; c < n; ++c)
            m(r, c) = Cx(re_row.at(static_cast<size_t>(c)).get<double>(),
                         im_row.at(static_cast<size_t>(c)).get<double>());
    }
    return DensityOperator::checked(std::move(dims), std::move(m), tol);
}

DensityOperator load_density(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return density_from_json(j, tol);
}

json report_to_json(const SbsReport& report) {
    json j;
    j["spectrum"] = report.spectrum;
    j["system_entropy"] = report.system_entropy;
    j["coherence_residual"] = report.coherence_residual;
    json dist = json::array();
    for (long r = 0; r < report.distinguishability.rows(); ++r) {
        json row = json::array();
        for (long c = 0; c < report.distinguishability.cols(); ++c)
            row.push_back(report.distinguishability(r, c));
        dist.push_back(std::move(row));
    }
    j["distinguishability"] = std::move(dist);
    j["product_deviation"] = report.product_deviation;
    json sweep = json::array();
    for (const auto& e : report.entropic_sweep)
        sweep.push_back(json{{"subset", e.subset},
                             {"mutual_information", e.mutual_information},
                             {"gap", e.gap}});
    j["entropic_sweep"] = std::move(sweep);
    j["max_entropic_gap"] = report.max_entropic_gap;
    j["coherence_pass"] = report.coherence_pass;
    j["distinguishability_pass"] = report.distinguishability_pass;
    j["product_pass"] = report.product_pass;
    j["entropic_pass"] = report.entropic_pass;
    j["verdict"] = report.verdict;
    return j;
}

json witness_to_json(const WitnessReport& report) {
    return json{{"p", report.p},
                {"ptilde", report.ptilde},
                {"mutual_information", report.mutual_information},
                {"system_entropy", report.system_entropy},
                {"spectrum_entropy", report.spectrum_entropy},
                {"entropic_gap", report.entropic_gap},
                {"ppt_min_eigenvalue", report.ppt_min_eigenvalue},
                {"entropic_holds", report.entropic_holds},
                {"ppt_violated", report.ppt_violated}};
}

SphereConfig sphere_config_from_json(const json& j) {
    SphereConfig c;
    c.params.radius = j.at("radius").get<double>();
    c.params.permittivity = j.at("permittivity").get<double>();
    c.params.displacement = j.at("displacement").get<double>();
    c.params.wavenumber = j.at("wavenumber").get<double>();
    c.params.theta = j.value("theta", 0.0);
    c.params.photon_density = j.at("photon_density").get<double>();
    c.params.light_speed = j.at("light_speed").get<double>();
    c.params.box_edge = j.at("box_edge").get<double>();
    const double m = j.value("macro_fraction", 0.1);
    c.partition.macro_size = m;
    c.partition.macro_count = static_cast<int>(std::lround(1.0 / m));
    c.partition.micro_photons = j.value("micro_photons", 0);
    const std::string mode = j.value("mode", "thermodynamic");
    if (mode == "thermodynamic")
        c.mode = LimitMode::Thermodynamic;
    else if (mode == "finite")
        c.mode = LimitMode::FiniteBox;
    else
        throw std::invalid_argument("mode must be 'finite' or 'thermodynamic'");
    c.params.validate();
    c.partition.validate();
    return c;
}

json sphere_config_to_json(const SphereConfig& config) {
    return json{{"radius", config.params.radius},
                {"permittivity", config.params.permittivity},
                {"displacement", config.params.displacement},
                {"wavenumber", config.params.wavenumber},
                {"theta", config.params.theta},
                {"photon_density", config.params.photon_density},
                {"light_speed", config.params.light_speed},
                {"box_edge", config.params.box_edge},
                {"macro_fraction", config.partition.macro_size},
                {"micro_photons", config.partition.micro_photons},
                {"mode", config.mode == LimitMode::Thermodynamic ? "thermodynamic" : "finite"}};
}

SphereConfig load_sphere_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return sphere_config_from_json(j);
}

std::string phase_csv(const std::vector<PhasePoint>& points) {
    std::ostringstream out;
    out << "f,I_bits\n";
    for (const auto& p : points)
        out << format_double(p.fraction) << ',' << format_double(p.mutual_information) << '\n';
    return out.str();
}

json phase_json(const std::vector<PhasePoint>& points) {
    json rows = json::array();
    for (const auto& p : points)
        rows.push_back(json{{"f", p.fraction}, {"I_bits", p.mutual_information}});
    return rows;
}

std::string bound_csv(const BoundReport& report) {
    std::ostringstream out;
    out << "t_over_tau,f,L,I_bits,H_S,bound_rhs,decoh_factor,macro_overlap,applicable\n";
    for (const auto& p : report.points) {
        out << format_double(p.t_over_tau) << ',' << format_double(p.fraction) << ','
            << format_double(p.box_edge) << ',' << format_double(p.mutual_information) << ','
            << format_double(p.system_entropy) << ',' << format_double(p.rhs) << ','
            << format_double(p.decoh_factor) << ',' << format_double(p.macro_overlap) << ','
            << (p.applicable ? 1 : 0) << '\n';
    }
    return out.str();
}

json bound_json(const BoundReport& report) {
    json rows = json::array();
    for (const auto& p : report.points)
        rows.push_back(json{{"t", p.t},
                            {"t_over_tau", p.t_over_tau},
                            {"f", p.fraction},
                            {"L", p.box_edge},
                            {"I_bits", p.mutual_information},
                            {"H_S", p.system_entropy},
                            {"exact_gap", p.exact_gap},
                            {"eps_full", p.eps_full},
                            {"eps_traced", p.eps_traced},
                            {"record_overlap", p.record_overlap},
                            {"term_full", p.term_full},
                            {"term_traced_entropy", p.term_traced_entropy},
                            {"term_traced_linear", p.term_traced_linear},
                            {"term_records", p.term_records},
                            {"bound_rhs", p.rhs},
                            {"estimate_rhs", p.estimate_rhs},
                            {"decoh_factor", p.decoh_factor},
                            {"macro_overlap", p.macro_overlap},
                            {"slack", p.slack},
                            {"applicable", p.applicable}});
    return json{{"points", std::move(rows)}, {"worst_slack", report.worst_slack}};
}

std::string redundancy_csv(const std::vector<RedundancyRow>& rows) {
    std::ostringstream out;
    out << "t_over_tau,delta,f_star,R_delta\n";
    for (const auto& r : rows) {
        out << format_double(r.t_over_tau) << ',' << format_double(r.delta) << ',';
        if (r.result.reached)
            out << format_double(r.result.f_star) << ',' << format_double(r.result.value);
        else
            out << ",";
        out << '\n';
    }
    return out.str();
}

json redundancy_json(const std::vector<RedundancyRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back(json{{"t_over_tau", r.t_over_tau},
                           {"delta", r.delta},
                           {"reached", r.result.reached},
                           {"f_star", r.result.f_star},
                           {"R_delta", r.result.value}});
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace sbs
