#pragma once

#include "daefc/funnel.hpp"
#include "daefc/operators.hpp"

#include <array>

namespace daefc {

// Nonlinear functional DAE with q differential output channels of orders
// r_1..r_q and m-q algebraic channels:
//
//   (y_1^(r_1), ..., y_q^(r_q)) = f1(d1, T1 zeta) + Gamma_I(d2, T1 zeta) u_I
//   0 = f2(X_I, X_II) + f3(d3, T2 y) + Gamma_II(d4, T2 y) u_I
//       + f4(d5, T2 y) u_II
//
// with zeta = (X_I, X_II), X_I the stacked output derivatives and X_II the
// algebraic outputs. All callbacks must be safe for concurrent read-only
// use; one simulation owns its operator states.
struct NonlinearFunctionalDae {
    int m = 0;
    int q = 0;
    std::vector<int> r; // length q, positive entries

    using VecFun = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
    using MatFun = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
    using ScalFun = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

    VecFun f1;          // (d1, eta1) -> R^q
    MatFun gamma_I;     // (d2, eta1) -> q x q, Gamma_I + Gamma_I^T > 0
    VecFun f2;          // (X_I, X_II) -> R^{m-q}
    MatFun f2_jac_XI;   // (X_I, X_II) -> (m-q) x rbar
    MatFun f2_jac_XII;  // (X_I, X_II) -> (m-q) x (m-q)
    VecFun f3;          // (d3, eta2) -> R^{m-q}
    MatFun gamma_II;    // (d4, eta2) -> (m-q) x q
    ScalFun f4;         // (d5, eta2) -> scalar >= alpha
    double alpha = 1.0;
    double f2_jac_sup = 0.0; // declared sup of ||df2/dX_II||

    // d1..d5; a missing callback means the zero disturbance.
    std::array<std::function<Eigen::VectorXd(double)>, 5> disturbances;
    int disturbance_dim = 1;

    RealizedOperator T1; // input dim rbar + m - q (unused when q = 0)
    RealizedOperator T2; // input dim m; output must ignore the instantaneous input

    // Initial history y^0, one smooth channel per output. Only the jets at
    // t = 0 matter for the h = 0 realizations supported here.
    std::vector<SmoothSignal> history;

    int rbar() const;
    int alg_dim() const { return m - q; }
    Eigen::VectorXd disturbance(int index, double t) const;

    // Dimension and callback-presence checks; throws PreconditionError.
    void validate() const;
};

// Funnel choices per cascade level plus the stacked levels, the reference,
// and the algebraic gain offset.
struct ControllerConfig {
    std::vector<std::vector<FunnelFunction>> phi; // [i][j], i < q, j <= r_i-2
    FunnelFunction phi_I;
    FunnelFunction phi_II;
    double khat = 2.0;
    std::vector<SmoothSignal> yref; // length m

    void validate(const NonlinearFunctionalDae& plant) const;
};

// Fills every cascade level and both stacked levels with one funnel.
ControllerConfig uniform_controller(const NonlinearFunctionalDae& plant,
                                    const FunnelFunction& phi, double khat,
                                    std::vector<SmoothSignal> yref);

struct AssumptionCheck {
    bool gamma_I_positive = true;     // Gamma_I + Gamma_I^T > 0 on samples
    bool f4_above_floor = true;       // f4 >= alpha on samples
    bool f2_bound_consistent = true;  // ||df2/dX_II|| <= declared sup on samples
    std::string witness;
};

// Spot checks of the standing assumptions on randomized sample arguments.
AssumptionCheck check_assumptions(const NonlinearFunctionalDae& plant, int samples = 100,
                                  unsigned seed = 2024);

} // namespace daefc
