// Command-line surface: state-file certification, sphere model sweeps, bound
// suites, the two-qubit witness, and the dense collision-model checker.
// Exit codes: 0 = pass, 1 = certification/inequality failure, 2 = bad input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbs/broadcast.hpp"
#include "sbs/info.hpp"
#include "sbs/io.hpp"
#include "sbs/qstate.hpp"
#include "sbs/sphere.hpp"

namespace {

using nlohmann::json;

// "a:b:step" inclusive grid, or a single value
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(spec));
        return out;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("grid wants a:b:step");
    const double a = std::stod(spec.substr(0, c1));
    const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    for (int k = 0;; ++k) {
        const double v = a + k * step;
        if (v > b + 0.5 * step) break;
        out.push_back(std::min(v, b));
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

// time token: plain seconds, or a multiple of tau_D with suffix "tau"
double parse_time(const std::string& token, double tau) {
    if (token.size() > 3 && token.substr(token.size() - 3) == "tau")
        return std::stod(token.substr(0, token.size() - 3)) * tau;
    return std::stod(token);
}

std::vector<double> parse_time_grid(const std::string& spec, double tau) {
    const bool in_tau = spec.size() > 3 && spec.substr(spec.size() - 3) == "tau";
    const std::string core = in_tau ? spec.substr(0, spec.size() - 3) : spec;
    std::vector<double> grid = parse_grid(core);
    if (in_tau)
        for (double& v : grid) v *= tau;
    return grid;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        sbs::write_text_file(out_path, text);
}

sbs::SphereConfig default_config() {
    sbs::SphereConfig c;
    c.params.radius = 1e-7;
    c.params.permittivity = 4.0;
    c.params.displacement = 5e-8;
    c.params.wavenumber = 1e6;
    c.params.theta = 0.0;
    c.params.photon_density = 1e18;
    c.params.light_speed = 3e8;
    c.params.box_edge = 1e-7;
    c.partition.macro_size = 0.1;
    c.partition.macro_count = 10;
    c.mode = sbs::LimitMode::Thermodynamic;
    return c;
}

void print_warnings(const sbs::SphereParams& params) {
    for (const auto& w : params.warnings()) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrum-broadcast certification and sphere-model simulation"};
    app.require_subcommand(1);

    // check-sbs
    std::string state_path;
    std::string check_out;
    int system_index = 0;
    double tol = sbs::default_tol;
    auto* check = app.add_subcommand("check-sbs", "certify a density-operator file");
    check->add_option("state", state_path, "density operator JSON")->required();
    check->add_option("--system", system_index, "system subsystem index");
    check->add_option("--tol", tol, "residual tolerance");
    check->add_option("--out", check_out, "report path (default stdout)");

    // witness
    double witness_p = 0.3;
    std::string witness_out;
    auto* witness = app.add_subcommand("witness", "two-qubit entropic-condition counterexample");
    witness->add_option("p", witness_p, "branch weight in (0,1), not 1/2")->required();
    witness->add_option("--out", witness_out, "report path (default stdout)");

    // sphere
    auto* sphere = app.add_subcommand("sphere", "illuminated-sphere model");
    sphere->require_subcommand(1);
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string grid_t = "20tau";
    std::string grid_f = "0:1:0.1";
    std::string mode_override;
    double delta = 0.1;
    double p1 = 0.5;
    double coherence = -1.0;  // <0 means maximal sqrt(p1 p2)
    sphere->add_option("--config", config_path, "sphere parameter JSON");
    sphere->add_option("--out", out_path, "output path (default stdout)");
    sphere->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sphere->add_option("--grid-t", grid_t, "time grid a:b:step, suffix 'tau' allowed");
    sphere->add_option("--grid-f", grid_f, "fraction grid a:b:step");
    sphere->add_option("--mode", mode_override, "finite|thermodynamic")
        ->check(CLI::IsMember({"finite", "thermodynamic"}));
    sphere->add_option("--delta", delta, "redundancy information deficit");
    sphere->add_option("--p1", p1, "initial pointer population");
    sphere->add_option("--coherence", coherence,
                       "initial |c12| (default: maximal for the populations)");
    auto* tau_cmd = sphere->add_subcommand("tau-d", "decoherence time and photon count");
    std::string tau_time = "1tau";
    tau_cmd->add_option("--t", tau_time, "time (seconds, or suffix 'tau')");
    auto* curve_cmd = sphere->add_subcommand("curve", "I(t) at fixed fraction");
    double curve_f = 0.5;
    curve_cmd->add_option("--f", curve_f, "observed fraction");
    auto* phase_cmd = sphere->add_subcommand("phase-diagram", "I(f) table at fixed time");
    std::string phase_time = "20tau";
    int micro = 2;
    phase_cmd->add_option("--t", phase_time, "time (seconds, or suffix 'tau')");
    phase_cmd->add_option("--micro", micro, "micro photons at the f = 0 endpoint");
    auto* bounds_cmd = sphere->add_subcommand("bounds", "entropic bound suite on a grid");
    auto* red_cmd = sphere->add_subcommand("redundancy", "R_delta along the time grid");
    auto* lemma_cmd = sphere->add_subcommand("lemma1", "dense collision-model inequality check");
    std::uint64_t seed = 1;
    int lemma_count = 20;
    int lemma_envs = 4;
    int lemma_dim = 2;
    double lemma_f = 0.5;
    lemma_cmd->add_option("--seed", seed, "base RNG seed");
    lemma_cmd->add_option("--count", lemma_count, "number of instances");
    lemma_cmd->add_option("--envs", lemma_envs, "environments per instance");
    lemma_cmd->add_option("--dim", lemma_dim, "environment dimension");
    lemma_cmd->add_option("--f", lemma_f, "observed fraction");

    for (auto* s : {tau_cmd, curve_cmd, phase_cmd, bounds_cmd, red_cmd, lemma_cmd})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            const sbs::DensityOperator rho = sbs::load_density(state_path, tol);
            sbs::SbsTolerances tols;
            tols.residual = tol;
            sbs::SbsReport rep;
            try {
                rep = sbs::check_sbs(rho, system_index, tols);
            } catch (const std::runtime_error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            emit(sbs::report_to_json(rep).dump(2) + "\n", check_out);
            return rep.verdict ? 0 : 1;
        }

        if (witness->parsed()) {
            const sbs::WitnessReport rep = sbs::witness_report(witness_p);
            emit(sbs::witness_to_json(rep).dump(2) + "\n", witness_out);
            std::cout << (rep.entropic_holds && rep.ppt_violated
                              ? "entropic condition satisfied; state entangled\n"
                              : "witness inconclusive at this p\n");
            return rep.entropic_holds && rep.ppt_violated ? 0 : 1;
        }

        sbs::SphereConfig cfg =
            config_path.empty() ? default_config() : sbs::load_sphere_config(config_path);
        if (!mode_override.empty())
            cfg.mode = mode_override == "finite" ? sbs::LimitMode::FiniteBox
                                                 : sbs::LimitMode::Thermodynamic;
        print_warnings(cfg.params);
        const double tau = sbs::decoherence_time(cfg.params);
        sbs::InitialSystemState rho0;
        {
            const double p2 = 1.0 - p1;
            const double c12 = coherence < 0.0 ? std::sqrt(std::max(p1 * p2, 0.0)) : coherence;
            rho0.entries << sbs::Cx(p1, 0.0), sbs::Cx(c12, 0.0), sbs::Cx(c12, 0.0),
                sbs::Cx(p2, 0.0);
            rho0.validate();
        }

        if (tau_cmd->parsed()) {
            const double t = parse_time(tau_time, tau);
            json j{{"tau_d_seconds", tau},
                   {"t_seconds", t},
                   {"t_over_tau", t / tau},
                   {"photons_scattered", sbs::photons_scattered(cfg.params, t)},
                   {"single_photon_overlap_re", sbs::single_photon_overlap(cfg.params).real()},
                   {"single_photon_overlap_im", sbs::single_photon_overlap(cfg.params).imag()}};
            emit(j.dump(2) + "\n", out_path);
            return 0;
        }

        if (curve_cmd->parsed()) {
            const std::vector<double> times = parse_time_grid(grid_t, tau);
            sbs::FractionPartition part = cfg.partition;
            part.observed_fraction = curve_f;
            std::string csv = "t_over_tau,f,I_bits\n";
            json rows = json::array();
            for (double t : times) {
                const double info = sbs::exact_mutual_information(
                    sbs::exact_joint_state(cfg.params, rho0, part, t, cfg.mode));
                csv += sbs::format_double(t / tau) + "," + sbs::format_double(curve_f) + "," +
                       sbs::format_double(info) + "\n";
                rows.push_back(json{{"t_over_tau", t / tau}, {"f", curve_f}, {"I_bits", info}});
            }
            emit(format == "csv" ? csv : rows.dump(2) + "\n", out_path);
            return 0;
        }

        if (phase_cmd->parsed()) {
            const double t = parse_time(phase_time, tau);
            sbs::FractionPartition part = cfg.partition;
            part.micro_photons = micro;
            const std::vector<double> fractions = parse_grid(grid_f);
            const auto points =
                sbs::phase_diagram(cfg.params, rho0, part, fractions, t, cfg.mode);
            emit(format == "csv" ? sbs::phase_csv(points) : sbs::phase_json(points).dump(2) + "\n",
                 out_path);
            return 0;
        }

        if (bounds_cmd->parsed()) {
            const std::vector<double> times = parse_time_grid(grid_t, tau);
            const std::vector<double> fractions = parse_grid(grid_f);
            const sbs::BoundReport rep =
                sbs::bound_suite(cfg.params, rho0, cfg.partition, times, fractions, cfg.mode);
            emit(format == "csv" ? sbs::bound_csv(rep) : sbs::bound_json(rep).dump(2) + "\n",
                 out_path);
            return rep.worst_slack >= -1e-10 ? 0 : 1;
        }

        if (red_cmd->parsed()) {
            const std::vector<double> times = parse_time_grid(grid_t, tau);
            std::vector<sbs::RedundancyRow> rows;
            for (double t : times)
                rows.push_back({t / tau, delta,
                                sbs::redundancy(cfg.params, rho0, cfg.partition, t, delta,
                                                cfg.mode)});
            emit(format == "csv" ? sbs::redundancy_csv(rows)
                                 : sbs::redundancy_json(rows).dump(2) + "\n",
                 out_path);
            return 0;
        }

        if (lemma_cmd->parsed()) {
            json rows = json::array();
            std::string csv = "seed,envs,dim,f,kept,exact_gap,rhs,slack,holds\n";
            bool all_hold = true;
            for (int k = 0; k < lemma_count; ++k) {
                const auto inst =
                    sbs::random_lemma1_instance(seed + static_cast<std::uint64_t>(k),
                                                lemma_envs, lemma_dim, lemma_f);
                const auto rec = sbs::lemma1_check(inst);
                all_hold = all_hold && rec.holds;
                csv += std::to_string(seed + static_cast<std::uint64_t>(k)) + "," +
                       std::to_string(lemma_envs) + "," + std::to_string(lemma_dim) + "," +
                       sbs::format_double(lemma_f) + "," + std::to_string(rec.kept) + "," +
                       sbs::format_double(rec.exact_gap) + "," + sbs::format_double(rec.rhs) +
                       "," + sbs::format_double(rec.slack) + "," + (rec.holds ? "1" : "0") +
                       "\n";
                rows.push_back(json{{"seed", seed + static_cast<std::uint64_t>(k)},
                                    {"envs", lemma_envs},
                                    {"dim", lemma_dim},
                                    {"f", lemma_f},
                                    {"kept", rec.kept},
                                    {"exact_gap", rec.exact_gap},
                                    {"rhs", rec.rhs},
                                    {"slack", rec.slack},
                                    {"holds", rec.holds}});
            }
            emit(format == "csv" ? csv : rows.dump(2) + "\n", out_path);
            return all_hold ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
