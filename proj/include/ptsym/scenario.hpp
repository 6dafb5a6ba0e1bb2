#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptsym/analysis.hpp"

namespace ptsym {

/// One deterministic simulation run. Flat key=value text file; every key can
/// also be set through a CLI flag of the same name. Times are in 1/J,
/// energies and rates in J.
struct ScenarioConfig {
    int d = 4;
    double J = 1.0;
    double gamma = 0.0;
    std::string state = "psi1"; // name (psi1..psi4, E1..E4, v1..v4) or
                                // amplitude list "re,im;re,im;..."
    double tmax = 8.0;
    int samples = 400;
    std::set<std::string> outputs = {"norm"}; // norm, conserved, phases,
                                              // angles, spectrum, fits
    std::uint64_t seed = 1;
    double tol = kRankTolerance;  // rank / null-space threshold
    double expm_bound = 200.0;    // OverflowRisk guard for the propagator

    void apply(const std::string& key, const std::string& value);
    std::string echo() const; // losslessly round-trips through apply()
};

ScenarioConfig load_config_file(const std::filesystem::path& path);

/// Resolve a state description against a model: canonical names, the
/// intertwiner eigenbasis states v1..v4, or an explicit amplitude list.
Vector resolve_initial_state(const std::string& description, const PTModel& model);

struct Claim {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunRecord {
    nlohmann::ordered_json document;
    std::vector<std::string> files;
    std::vector<Claim> claims; // only repro runs carry claims

    bool all_claims_pass() const;
};

/// Execute the model -> conserved -> dynamics -> analysis pipeline and write
/// the requested CSV outputs plus a JSON run record into out_dir.
RunRecord run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir);

inline const std::vector<std::string> kFigureNames = {
    "fig1d", "fig1e", "fig1f", "fig2", "fig3ab", "fig3cd", "fig3eg", "fig3h"};

/// Canonical reproduction recipe for one figure: runs the associated
/// scenarios, writes plot-ready CSV, and evaluates the figure's quantitative
/// claims as pass/fail entries.
RunRecord repro(const std::string& figure, const std::filesystem::path& out_dir);

/// Format a double with 17 significant digits (CSV / JSON reproducibility).
std::string format_g17(double value);

} // namespace ptsym
