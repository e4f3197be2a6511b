#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace daefc {

// Finite-state realization of a causal operator: the output at time t
// depends only on the current state and current input, and the state
// advances through a locally Lipschitz rate map. The state is integrated
// by whoever drives the operator (the closed-loop solver or the harness),
// never by the operator itself.
struct RealizedOperator {
    int state_dim = 0;
    int input_dim = 0;
    int output_dim = 0;
    double history_support = 0.0; // h; state realizations use 0
    Eigen::VectorXd initial_state;

    using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd& state,
                                              const Eigen::VectorXd& input, double t)>;
    Map state_rate;
    Map output;

    // true when the output map ignores the instantaneous input, i.e. the
    // operator output is C^1 along continuous inputs (needed for T_2).
    bool output_state_only = false;
};

// State eta' = Q eta + Bin y, output eta. Warns (returns the flag) rather
// than fails when Q is not Hurwitz, since only the bounded-trajectory
// property is lost.
struct LtiFilterResult {
    RealizedOperator op;
    bool hurwitz = true;
};
LtiFilterResult make_lti_filter(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& Bin,
                                const Eigen::VectorXd& eta0);

// Stacked-state combination: output = direct * zeta + sum_i output_maps[i] *
// base_i.output(state_i, input_maps[i] * zeta, t) + offset. Realizes the
// affine operator shapes R zeta + P T(S zeta).
RealizedOperator affine_combine(const std::vector<RealizedOperator>& bases,
                                const std::vector<Eigen::MatrixXd>& input_maps,
                                const Eigen::MatrixXd& direct,
                                const std::vector<Eigen::MatrixXd>& output_maps,
                                const Eigen::VectorXd& offset);

// Identity-on-input operator (stateless).
RealizedOperator identity_operator(int dim);

// Drives an operator along a given input signal with a fixed-step RK4 on
// its state; returns outputs on the sample grid.
std::vector<Eigen::VectorXd> run_operator(const RealizedOperator& op,
                                          const std::function<Eigen::VectorXd(double)>& input,
                                          double t_end, int steps);

struct HarnessIssue {
    std::string what;
    double time;
    double value;
};

struct HarnessReport {
    bool causality_ok = true;
    bool bounded_ok = true;
    bool lipschitz_ok = true;
    double observed_output_bound = 0.0;
    double lipschitz_estimate = 0.0;
    std::vector<HarnessIssue> issues;

    bool pass() const { return causality_ok && bounded_ok && lipschitz_ok; }
};

// Empirical checks on randomized bounded continuous inputs: causality,
// boundedness, and a local Lipschitz estimate. Falsifies only; a passing
// report is not a certificate.
HarnessReport property_harness(const RealizedOperator& op, int trials, unsigned seed = 12345,
                               double horizon = 20.0, double bound_cap = 1e6);

} // namespace daefc
