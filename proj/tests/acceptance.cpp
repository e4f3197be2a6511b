// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line, run as a single binary by ctest.

#include "test_helpers.hpp"

#include "daefc/errors.hpp"
#include "daefc/registry.hpp"
#include "daefc/simulate.hpp"

#include <doctest.h>

#include <chrono>
#include <map>
#include <cmath>
#include <cstdio>
#include <random>

using namespace daefc;
using namespace daefc::testing;

namespace {

struct Criterion {
    const char* label;
    bool ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Criterion(const char* label_) : label(label_) {}
    void require(bool cond) { ok = ok && cond; }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    ~Criterion() {
        std::printf("[%s] %s (%.2f s)\n", ok ? "PASS" : "FAIL", label, seconds());
        std::fflush(stdout);
    }
};

// The long simulation runs are shared between criteria 6, 7, and 10.
const Trajectory& example_run(double tol) {
    static std::map<double, Trajectory> cache;
    auto it = cache.find(tol);
    if (it == cache.end()) {
        auto ex = nonlinear_example("paper-sec5");
        SimulationConfig cfg;
        cfg.t_end = 10.0;
        cfg.set_tolerance(tol);
        it = cache.emplace(tol, integrate(ex.plant, ex.controller, cfg)).first;
    }
    return it->second;
}

LinearDae random_regular_square(std::mt19937& rng, int n, int m) {
    for (;;) {
        LinearDae sys = random_system(rng, n, m, m);
        if (!is_regular(sys))
            continue;
        return sys;
    }
}

} // namespace

TEST_CASE("criterion 1: tvrd non-existence case is exact") {
    Criterion crit("criterion 1: 4x4 example: H(s), gamma_hat, rank 1, exists=false");
    LinearDae sys = linear_example("tvrd-nonexist").system;
    RatMat H = compute_H(sys);
    RatMat expected(2, 2, {rf({-1, 1}), rf({1, 1}), rf({-1, 1}), rf({-2, 1})});
    crit.require(H == expected);
    TvrdReport tv = truncated_vrd(sys);
    crit.require(tv.gamma_hat == QMat::from_ints(2, 2, {1, 1, 1, 1}));
    crit.require(rank(tv.gamma_hat_q) == 1);
    crit.require(!tv.exists);
    crit.require(crit.seconds() < 1.0);
    CHECK(crit.ok);
}

TEST_CASE("criterion 2: tvrd (3,0) case is exact") {
    Criterion crit("criterion 2: exlin: G(s), H(s)=G^{-1}, tvrd (3,0), vrd fails");
    LinearDae sys = linear_example("exlin").system;

    RatMat G = transfer_function(sys);
    RatMat G_expected(2, 2,
                      {RatFun::zero(), rf({-1}, {0, 1}), rf({1, 1}, {6}),
                       rf({-8, -4, 1, 1, 1}, {0, 6})});
    crit.require(G == G_expected);

    RatMat H = compute_H(sys);
    RatMat H_expected(2, 2,
                      {rf({-8, -4, 1, 1, 1}, {1, 1}), rf({6}, {1, 1}), rf({0, -1}),
                       RatFun::zero()});
    crit.require(H == H_expected);
    crit.require(H == inverse(G));

    TvrdReport tv = truncated_vrd(sys);
    crit.require(tv.exists);
    crit.require(tv.r == std::vector<int>{3, 0});
    crit.require(tv.gamma_hat == QMat::from_ints(2, 2, {1, 0, 0, 0}));

    VrdReport v = vector_rd(sys);
    crit.require(!v.exists);
    crit.require(v.gamma == QMat(2, 2, {Rat(0), Rat(-1), Rat(0), Rat(1) / 6}));

    crit.require(crit.seconds() < 2.0);
    CHECK(crit.ok);
}

TEST_CASE("criterion 3: tvrd is invariant under output feedback") {
    Criterion crit("criterion 3: feedback invariance (50 K on exlin + 20 random systems)");
    std::mt19937 rng(20240803);

    LinearDae ex = linear_example("exlin").system;
    TvrdReport base = truncated_vrd(ex);
    for (int trial = 0; trial < 50; ++trial) {
        QMat K = random_qmat(rng, 2, 2, -3, 3);
        TvrdReport fed = truncated_vrd(apply_output_feedback(ex, K));
        crit.require(fed.exists == base.exists && fed.r == base.r);
    }

    int found = 0;
    while (found < 20) {
        LinearDae sys = random_system(rng, 3, 2, 2);
        if (!is_regular(sys) || !zero_dynamics_autonomous(sys) || !is_right_invertible(sys))
            continue;
        TvrdReport tv = truncated_vrd(sys);
        if (!tv.exists)
            continue;
        ++found;
        for (int k = 0; k < 3; ++k) {
            QMat K = random_qmat(rng, 2, 2, -2, 2);
            TvrdReport fed = truncated_vrd(apply_output_feedback(sys, K));
            crit.require(fed.exists && fed.r == tv.r);
        }
    }
    crit.require(crit.seconds() < 30.0);
    CHECK(crit.ok);
}

TEST_CASE("criterion 4: H equals the exact transfer-function inverse") {
    Criterion crit("criterion 4: H = G^{-1} exactly on 30 random regular systems");
    std::mt19937 rng(20240804);
    int done = 0;
    while (done < 30) {
        int n = 2 + static_cast<int>(done % 3);
        int m = 1 + static_cast<int>(done % 2);
        LinearDae sys = random_regular_square(rng, n, m);
        RatMat G = transfer_function(sys);
        if (determinant(G).is_zero())
            continue;
        crit.require(compute_H(sys) == inverse(G));
        ++done;
    }
    CHECK(crit.ok);
}

TEST_CASE("criterion 5: closed-form controller start of the simulation example") {
    Criterion crit("criterion 5: paper-sec5 controller start at t=0 and zero consistency residual");
    auto ex = nonlinear_example("paper-sec5");
    InitialState init = assemble_initial_state(ex.plant);
    CascadeResult c = cascade_at(ex.plant, ex.controller, 0.0, init.X_I, init.X_II);
    auto near = [&](double a, double b) { crit.require(std::abs(a - b) < 1e-12); };
    near(c.k[0][0], 1.0);
    near(c.k_I, 1.0);
    near(c.k_II, 2.0);
    near(c.e_I(0), -1.0);
    near(c.e_II(0), 0.0);
    near(c.u(0), 1.0);
    near(c.u(1), 0.0);
    ConsistencyReport cons = check_consistency(ex.plant, ex.controller, 1e-12);
    crit.require(cons.consistent);
    crit.require(cons.norm == 0.0);
    CHECK(crit.ok);
}

TEST_CASE("criterion 6: funnel invariance over the full horizon") {
    Criterion crit("criterion 6: paper-sec5 on [0,10] at 1e-10 stays inside all funnels");
    const Trajectory& traj = example_run(1e-10);
    crit.require(traj.completed);
    crit.require(traj.samples.back().t == 10.0);

    FunnelFunction phi = default_phi();
    for (const auto& s : traj.samples) {
        double p = phi(s.t);
        crit.require(p * std::abs(s.e[0][0]) < 1.0);
        crit.require(p * s.e_I.norm() < 1.0);
        crit.require(p * s.e_II.norm() < 1.0);
    }
    MarginsReport margins = monitor_funnel(traj, 0.05);
    crit.require(margins.all_positive);
    crit.require(margins.floor_I > 0.0 && margins.floor_II > 0.0 &&
                 margins.floor_ij[0][0] > 0.0);
    // qualitative shape: inputs bounded
    double umax = 0.0;
    for (const auto& s : traj.samples)
        umax = std::max(umax, s.u.cwiseAbs().maxCoeff());
    crit.require(std::isfinite(umax) && umax < 1e3);
    crit.require(crit.seconds() < 60.0);
    CHECK(crit.ok);
}

TEST_CASE("criterion 7: algebraic constraint residual stays small") {
    Criterion crit("criterion 7: ||F_II|| <= 1e-8 at every accepted step");
    const Trajectory& traj = example_run(1e-10);
    double worst = 0.0;
    for (const auto& s : traj.samples)
        worst = std::max(worst, s.residual);
    crit.require(worst <= 1e-8);
    CHECK(crit.ok);
}

TEST_CASE("criterion 8: constraint Jacobian matches finite differences") {
    Criterion crit("criterion 8: jacobian vs central differences at 100 admissible points");
    auto ex = nonlinear_example("paper-sec5");
    std::mt19937 rng(20240808);
    std::uniform_real_distribution<double> t_dist(0.05, 10.0);
    std::uniform_real_distribution<double> xi_dist(-0.5, 0.5);
    std::uniform_real_distribution<double> eta_dist(-0.5, 0.5);
    const double h = 1e-6;
    FunnelFunction phi = default_phi();

    for (int trial = 0; trial < 100; ++trial) {
        double t = t_dist(rng);
        double p = phi(t);
        // admissible: strictly inside the level-II funnel, and X_I close
        // enough to the reference that every cascade level stays inside too
        std::uniform_real_distribution<double> e_dist(-0.9 / p, 0.9 / p);
        Jet ref = ex.controller.yref[0].jet(t, 1);
        Eigen::VectorXd XI = (Eigen::VectorXd(2) << ref.deriv(0) + 0.2 * xi_dist(rng),
                              ref.deriv(1) + 0.2 * xi_dist(rng))
                                 .finished();
        Eigen::VectorXd XII =
            (Eigen::VectorXd(1) << ex.controller.yref[1](t) + e_dist(rng)).finished();
        Eigen::VectorXd eta = (Eigen::VectorXd(1) << eta_dist(rng)).finished();
        CascadeResult c = cascade_at(ex.plant, ex.controller, t, XI, XII);

        Eigen::MatrixXd jac = jacobian_FII_XII(ex.plant, ex.controller, t, XI, XII, eta);
        Eigen::VectorXd hi = XII, lo = XII;
        hi(0) += h;
        lo(0) -= h;
        double fd = (residual_FII(ex.plant, ex.controller, t, XI, hi, eta, c)(0) -
                     residual_FII(ex.plant, ex.controller, t, XI, lo, eta, c)(0)) /
                    (2 * h);
        crit.require(std::abs(jac(0, 0) - fd) / std::max(1.0, std::abs(jac(0, 0))) <= 1e-6);
    }
    CHECK(crit.ok);
}

TEST_CASE("criterion 9: cascade recursion against finite differences, r = 3") {
    Criterion crit("criterion 9: |e_{i,j+1} - (de_{ij} + k_{ij} e_{ij})| <= 1e-6 on 1000 points");
    FunnelFunction phi = default_phi();
    SmoothSignal y{[](double t, int order) {
        return sin(Jet::variable(t, order)) + 0.2 * exp(-Jet::variable(t, order));
    }};
    SmoothSignal yref{[](double t, int order) { return sin(Jet::variable(t, order)); }};

    auto eval = [&](double t) {
        CascadeInput in;
        in.t = t;
        in.r = {3};
        in.y_jets = {y.jet(t, 2)};
        in.yref_jets = {yref.jet(t, 2)};
        in.phi_jets = {{phi.jet(t, 2), phi.jet(t, 1)}};
        in.phi_I = phi(t);
        in.phi_II = phi(t);
        in.e_II = Eigen::VectorXd::Zero(0);
        in.khat = 2.0;
        return error_cascade(in);
    };

    const double h = 1e-5;
    for (int g = 0; g < 1000; ++g) {
        double t = 0.5 + g * (9.0 / 999.0);
        CascadeResult mid = eval(t);
        CascadeResult lo = eval(t - h);
        CascadeResult hi = eval(t + h);
        for (int j = 0; j < 2; ++j) {
            double de = (hi.e[0][j] - lo.e[0][j]) / (2 * h);
            crit.require(std::abs(mid.e[0][j + 1] - (de + mid.k[0][j] * mid.e[0][j])) <= 1e-6);
        }
    }
    CHECK(crit.ok);
}

TEST_CASE("criterion 10: self-convergence of the integrator") {
    Criterion crit("criterion 10: 1e-8 vs 1e-10 run differs by <= 1e-6 in sup norm over y");
    const Trajectory& coarse = example_run(1e-8);
    const Trajectory& fine = example_run(1e-10);

    std::map<double, Eigen::VectorXd> fine_at;
    for (const auto& s : fine.samples)
        if (s.on_sample_grid)
            fine_at[s.t] = s.y;
    double sup = 0.0;
    int matched = 0;
    for (const auto& s : coarse.samples) {
        if (!s.on_sample_grid)
            continue;
        auto it = fine_at.find(s.t);
        if (it == fine_at.end())
            continue;
        ++matched;
        sup = std::max(sup, (s.y - it->second).cwiseAbs().maxCoeff());
    }
    crit.require(matched >= 1000); // the full forced grid is shared
    crit.require(sup <= 1e-6);
    CHECK(crit.ok);
}

TEST_CASE("criterion 11: normal-form demo satisfies the same criteria") {
    Criterion crit("criterion 11: normal-form demo: funnels, residual, bounded x3");
    auto ex = nonlinear_example("linear-normalform-demo");
    SimulationConfig cfg;
    cfg.t_end = 10.0;
    cfg.set_tolerance(1e-10);
    Trajectory traj = integrate(ex.plant, ex.controller, cfg);
    crit.require(traj.completed);

    FunnelFunction phi = default_phi();
    double worst_res = 0.0, x3_max = 0.0;
    for (const auto& s : traj.samples) {
        double p = phi(s.t);
        crit.require(p * std::abs(s.e[0][0]) < 1.0);
        crit.require(p * s.e_I.norm() < 1.0);
        crit.require(p * s.e_II.norm() < 1.0);
        worst_res = std::max(worst_res, s.residual);
        x3_max = std::max(x3_max, ex.x3_from_sample(s).cwiseAbs().maxCoeff());
    }
    crit.require(worst_res <= 1e-8);
    crit.require(monitor_funnel(traj, 0.05).all_positive);
    crit.require(std::isfinite(x3_max) && x3_max <= 50.0);
    CHECK(crit.ok);
}
