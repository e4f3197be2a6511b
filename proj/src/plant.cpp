#include "daefc/plant.hpp"

#include "daefc/errors.hpp"

#include <numeric>
#include <random>

namespace daefc {

int NonlinearFunctionalDae::rbar() const {
    return std::accumulate(r.begin(), r.end(), 0);
}

Eigen::VectorXd NonlinearFunctionalDae::disturbance(int index, double t) const {
    const auto& d = disturbances[index];
    if (!d)
        return Eigen::VectorXd::Zero(disturbance_dim);
    return d(t);
}

void NonlinearFunctionalDae::validate() const {
    if (m < 1 || q < 0 || q > m)
        throw PreconditionError("plant needs 0 <= q <= m and m >= 1");
    if (static_cast<int>(r.size()) != q)
        throw PreconditionError("r must have one entry per differential channel");
    for (int ri : r)
        if (ri < 1)
            throw PreconditionError("relative degree entries must be positive");
    if (q > 0) {
        if (!f1 || !gamma_I)
            throw PreconditionError("f1 and Gamma_I are required when q > 0");
        if (!T1.state_rate || !T1.output)
            throw PreconditionError("operator T1 is required when q > 0");
        if (T1.input_dim != rbar() + alg_dim())
            throw PreconditionError("T1 input dimension must be rbar + m - q");
    }
    if (alg_dim() > 0) {
        if (!f2 || !f2_jac_XII || !f4)
            throw PreconditionError("f2, its X_II Jacobian, and f4 are required when q < m");
        if (!T2.state_rate || !T2.output)
            throw PreconditionError("operator T2 is required when q < m");
        if (T2.input_dim != m)
            throw PreconditionError("T2 input dimension must be m");
        if (!T2.output_state_only)
            throw PreconditionError("T2 output must depend on the state only");
        if (alpha <= 0.0)
            throw PreconditionError("alpha must be positive");
    }
    if (static_cast<int>(history.size()) != m)
        throw PreconditionError("history must provide one channel per output");
}

void ControllerConfig::validate(const NonlinearFunctionalDae& plant) const {
    if (static_cast<int>(yref.size()) != plant.m)
        throw PreconditionError("reference must have one channel per output");
    for (const auto& ch : yref)
        if (!ch.valid())
            throw PreconditionError("reference channel has no jet callable");
    if (static_cast<int>(phi.size()) < plant.q)
        throw PreconditionError("funnel spec missing cascade channels");
    for (int i = 0; i < plant.q; ++i)
        if (static_cast<int>(phi[i].size()) < plant.r[i] - 1)
            throw PreconditionError("funnel spec missing cascade levels for channel " +
                                    std::to_string(i + 1));
    if (!phi_I.signal.valid() || !phi_II.signal.valid())
        throw PreconditionError("stacked funnel functions are required");
    if (khat <= 0.0)
        throw PreconditionError("khat must be positive");
}

ControllerConfig uniform_controller(const NonlinearFunctionalDae& plant,
                                    const FunnelFunction& phi, double khat,
                                    std::vector<SmoothSignal> yref) {
    ControllerConfig cfg;
    cfg.phi.resize(plant.q);
    for (int i = 0; i < plant.q; ++i)
        cfg.phi[i].assign(std::max(plant.r[i] - 1, 0), phi);
    cfg.phi_I = phi;
    cfg.phi_II = phi;
    cfg.khat = khat;
    cfg.yref = std::move(yref);
    return cfg;
}

AssumptionCheck check_assumptions(const NonlinearFunctionalDae& plant, int samples,
                                  unsigned seed) {
    plant.validate();
    AssumptionCheck chk;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    auto random_vec = [&](int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i)
            v(i) = box(rng);
        return v;
    };

    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd d = random_vec(plant.disturbance_dim);
        if (plant.q > 0) {
            Eigen::VectorXd eta1 = random_vec(plant.T1.output_dim);
            Eigen::MatrixXd g = plant.gamma_I(d, eta1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g + g.transpose());
            if (es.eigenvalues().minCoeff() <= 0.0) {
                chk.gamma_I_positive = false;
                chk.witness = "Gamma_I + Gamma_I^T not positive definite on a sample";
            }
        }
        if (plant.alg_dim() > 0) {
            Eigen::VectorXd eta2 = random_vec(plant.T2.output_dim);
            if (plant.f4(d, eta2) < plant.alpha) {
                chk.f4_above_floor = false;
                chk.witness = "f4 fell below alpha on a sample";
            }
            Eigen::VectorXd xi = random_vec(plant.rbar());
            Eigen::VectorXd xii = random_vec(plant.alg_dim());
            double nrm = plant.f2_jac_XII(xi, xii).norm();
            if (nrm > plant.f2_jac_sup * (1.0 + 1e-9)) {
                chk.f2_bound_consistent = false;
                chk.witness = "||df2/dX_II|| exceeded the declared sup on a sample";
            }
        }
    }
    return chk;
}

} // namespace daefc
