#pragma once

#include "daefc/cascade.hpp"
#include "daefc/plant.hpp"

namespace daefc {

struct SimulationConfig {
    double t_end = 10.0;
    double rtol = 1e-10;
    double atol = 1e-10;
    double h0 = 1e-4;
    double hmin = 1e-13;
    double hmax = 0.1;
    double newton_tol = 1e-10;
    int newton_max = 25;
    // Accepted steps never cross multiples of this interval, so runs with
    // different tolerances share exact sample times; <= 0 disables.
    double sample_interval = 0.01;
    double consistency_tol = 1e-9;
    double margin_t_min = 0.05; // funnel floors are evaluated for t >= this

    void set_tolerance(double tol) { rtol = atol = tol; }
};

struct InitialState {
    Eigen::VectorXd X_I;
    Eigen::VectorXd X_II;
    Eigen::VectorXd w1; // T1 state
    Eigen::VectorXd w2; // T2 state
};

struct TrajectorySample {
    double t = 0.0;
    Eigen::VectorXd X_I;
    Eigen::VectorXd X_II;
    Eigen::VectorXd w1;
    Eigen::VectorXd w2;
    Eigen::VectorXd y; // m
    Eigen::VectorXd u; // m
    std::vector<std::vector<double>> e; // cascade values e[i][j]
    std::vector<std::vector<double>> k; // gains k[i][j]
    Eigen::VectorXd e_I, e_II;
    double k_I = 1.0, k_II = 1.0;
    double residual = 0.0; // ||F_II|| after the algebraic solve
    std::vector<std::vector<double>> margin; // 1/phi_ij - |e_ij|
    double margin_I = 0.0, margin_II = 0.0;
    bool on_sample_grid = false;
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long newton_iterations = 0;
    double min_step = 0.0;
    double max_step = 0.0;
};

struct Trajectory {
    int m = 0, q = 0;
    std::vector<int> r;
    std::vector<TrajectorySample> samples;
    StepStats stats;
    bool completed = false;
};

struct ConsistencyReport {
    bool consistent = false;
    Eigen::VectorXd residual;
    double norm = 0.0;
};

struct MarginsReport {
    // minimum over samples with t >= t_min of (1/phi - |e|) per level
    std::vector<std::vector<double>> floor_ij;
    double floor_I = 0.0;
    double floor_II = 0.0;
    double worst = 0.0;
    double worst_time = 0.0;
    bool all_positive = false;
};

// X_I(0) and X_II(0) from the history jets at t = 0; operator states from
// their definitions. Throws PreconditionError when a channel's history
// cannot deliver the required derivatives.
InitialState assemble_initial_state(const NonlinearFunctionalDae& plant);

// Controller evaluation at (t, X_I, X_II): jets of y_i come straight from
// the X_I slots, reference and funnel jets from the controller config.
CascadeResult cascade_at(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                         double t, const Eigen::VectorXd& X_I, const Eigen::VectorXd& X_II);

// F_II = f2(X_I, X_II) + f3(d3, eta2) + Gamma_II(d4, eta2) u_I
//        + f4(d5, eta2) u_II, with u_I taken from the cascade and u_II in
// the closed gain form -khat (X_II - X_ref_II)/(1 - phi_II^2 |...|^2).
Eigen::VectorXd residual_FII(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                             double t, const Eigen::VectorXd& X_I, const Eigen::VectorXd& X_II,
                             const Eigen::VectorXd& eta2, const CascadeResult& cascade);

// dF_II/dX_II = df2/dX_II - [khat f4 / (1 - phi_II^2 ||e_II||^2)] (I + G)
// with G the scaled outer product of e_II = X_II - X_ref_II.
Eigen::MatrixXd jacobian_FII_XII(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                                 double t, const Eigen::VectorXd& X_I,
                                 const Eigen::VectorXd& X_II, const Eigen::VectorXd& eta2);

// Evaluates the algebraic equation at t = 0 under the controller's initial
// input. Throws FunnelViolation if the initial cascade already violates.
ConsistencyReport check_consistency(const NonlinearFunctionalDae& plant,
                                    const ControllerConfig& ctrl, double tol = 1e-9);

// Half-explicit embedded RK 2(3) with per-stage Newton on the algebraic
// constraint. Throws PreconditionError when the pre-checks (gain condition,
// initial funnel, consistency) fail, FunnelViolation / NewtonFailure /
// StepUnderflow when the march breaks down.
Trajectory integrate(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                     const SimulationConfig& cfg);

MarginsReport monitor_funnel(const Trajectory& traj, double t_min = 0.05);

} // namespace daefc
