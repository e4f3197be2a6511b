#pragma once

#include "daefc/linear_dae.hpp"
#include "daefc/registry.hpp"
#include "daefc/simulate.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

namespace daefc {

using Json = nlohmann::json;

// ---- system files ---------------------------------------------------------

// Parses {"kind": "linear", "E": [["p/q", ...], ...], ...}. Entries must be
// rational strings or integers; floats are rejected to keep the analysis
// pipeline exact.
LinearDae parse_linear_system(const Json& j);

// Parses {"kind": "nonlinear", ...} with either a registry "name" or a
// "template" block (normal-form plant given by float matrices plus optional
// polynomial nonlinearities), a funnel choice, reference signals, and
// controller parameters.
NonlinearExample parse_nonlinear_system(const Json& j);

struct SystemFile {
    std::string kind; // "linear" | "nonlinear"
    LinearDae linear;
    NonlinearExample nonlinear;
};

SystemFile parse_system_file(const Json& j);
SystemFile load_system_file(const std::string& path);

// ---- reports ---------------------------------------------------------------

Json to_json(const QMat& m);                // "p/q" strings
QMat qmat_from_json(const Json& j);
Json to_json(const RatFun& f);              // ascending num/den coefficient arrays
RatFun ratfun_from_json(const Json& j);
Json to_json(const RatMat& m);
RatMat ratmat_from_json(const Json& j);

Json to_json(const AnalysisReport& rep);
AnalysisReport analysis_report_from_json(const Json& j);
Json to_json(const TvrdReport& rep);
TvrdReport tvrd_report_from_json(const Json& j);
Json to_json(const VrdReport& rep);
VrdReport vrd_report_from_json(const Json& j);

// Full analyze payload: analysis + tvrd + vrd (+ gamma decomposition).
Json analyze_to_json(const LinearDae& sys);

// ---- trajectories ----------------------------------------------------------

// CSV with a header row; floats printed with 17 significant digits. When
// grid_only is set, only samples on the forced output grid are written.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool grid_only = false);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool grid_only = false);

Json summary_json(const Trajectory& traj, const MarginsReport& margins);

std::string format_double(double v); // 17 significant digits

} // namespace daefc
