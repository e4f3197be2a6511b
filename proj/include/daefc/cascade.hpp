#pragma once

#include "daefc/funnel.hpp"

#include <Eigen/Dense>

#include <optional>

namespace daefc {

// One evaluation of the funnel controller at a fixed time: the chained
// error/gain recursion per channel, the stacked signals, and the input.
struct CascadeResult {
    double t = 0.0;
    std::vector<std::vector<double>> e; // e[i][j], j = 0..r_i-1
    std::vector<std::vector<double>> k; // k[i][j], j = 0..r_i-2
    Eigen::VectorXd e_I;                // (e_{1,r_1-1}, ..., e_{q,r_q-1})
    Eigen::VectorXd e_II;               // (e_{q+1}, ..., e_m)
    double k_I = 1.0;
    double k_II = 1.0;
    Eigen::VectorXd u; // (-k_I e_I; -k_II e_II)
};

struct CascadeInput {
    double t = 0.0;
    std::vector<int> r;                     // length q, entries >= 1
    std::vector<Jet> y_jets;                // channel i: order >= r_i - 1
    std::vector<Jet> yref_jets;             // same orders
    std::vector<std::vector<Jet>> phi_jets; // [i][j], order >= r_i - 1 - j
    double phi_I = 0.0;
    double phi_II = 0.0;
    Eigen::VectorXd e_II;                   // X_II - X_ref_II
    double khat = 1.0;
};

// Propagates e_{i,j+1} = d/dt e_{ij} + k_{ij} e_{ij} with
// k_{ij} = 1/(1 - phi_ij^2 e_ij^2) in jet arithmetic, then assembles the
// stacked gains and u. Throws FunnelViolation as soon as any
// 1 - phi^2 e^2 factor is nonpositive. Extra jet coefficients beyond the
// required orders are ignored.
CascadeResult error_cascade(const CascadeInput& in);

// khat > f2_jac_sup / alpha (strict); throws PreconditionError if alpha <= 0.
bool check_gain_condition(double khat, double alpha, double f2_jac_sup);

struct InitialFunnelCheck {
    bool ok = true;
    // witness of the first failing inequality, when !ok
    int channel = -1;
    int level = 0; // FunnelViolation::kLevelI / kLevelII or a cascade level
    double product = 0.0; // the offending phi * |e|
};

// phi_I(0) ||e_I(0)|| < 1, phi_II(0) ||e_II(0)|| < 1 and
// phi_ij(0) |e_ij(0)| < 1 for every cascade level.
InitialFunnelCheck check_initial_funnel(const CascadeResult& at_zero,
                                        const std::vector<std::vector<double>>& phi_ij_at_zero,
                                        double phi_I_at_zero, double phi_II_at_zero);

} // namespace daefc
