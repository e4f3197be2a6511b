#include "daefc/errors.hpp"
#include "daefc/registry.hpp"
#include "daefc/simulate.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace daefc;

namespace {

// q = 0 plant: 0 = X_II - d3(t) + u_II, one algebraic output with a filter
// memory that never feeds back (zero input matrix).
NonlinearExample algebraic_only_example() {
    NonlinearExample ex;
    ex.name = "algebraic-only";
    NonlinearFunctionalDae plant;
    plant.m = 1;
    plant.q = 0;
    plant.alpha = 1.0;
    plant.f2_jac_sup = 1.0;
    plant.f2 = [](const Eigen::VectorXd&, const Eigen::VectorXd& xii) { return xii; };
    plant.f2_jac_XII = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(1, 1).eval();
    };
    plant.f3 = [](const Eigen::VectorXd& d, const Eigen::VectorXd&) {
        return (-d).eval();
    };
    plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1.0; };
    plant.disturbances[2] = [](double t) {
        return (Eigen::VectorXd(1) << std::sin(t)).finished();
    };
    plant.T2 = make_lti_filter((Eigen::MatrixXd(1, 1) << -1.0).finished(),
                               Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1))
                   .op;
    plant.history = {smooth_zero()};
    ex.plant = std::move(plant);
    ex.controller = uniform_controller(ex.plant, default_phi(), 2.0, {smooth_zero()});
    return ex;
}

} // namespace

TEST_CASE("initial state assembly") {
    auto ex = nonlinear_example("paper-sec5");
    InitialState init = assemble_initial_state(ex.plant);
    CHECK(init.X_I.norm() == 0.0);
    CHECK(init.X_II.norm() == 0.0);
    CHECK(init.w1.norm() == 0.0);
    CHECK(init.w2.norm() == 0.0);

    ex.plant.history = {smooth_constant(3.0), smooth_constant(-1.0)};
    init = assemble_initial_state(ex.plant);
    CHECK(init.X_I(0) == 3.0);
    CHECK(init.X_I(1) == 0.0); // derivative slot of a constant history
    CHECK(init.X_II(0) == -1.0);

    ex.plant.history = {smooth_poly({0.0, 0.0, 1.0}), smooth_zero()}; // t^2
    init = assemble_initial_state(ex.plant);
    CHECK(init.X_I(0) == 0.0);
    CHECK(init.X_I(1) == 0.0); // d/dt t^2 vanishes at 0

    ex.plant.history = {SmoothSignal{}, smooth_zero()};
    CHECK_THROWS_AS(assemble_initial_state(ex.plant), PreconditionError);
}

TEST_CASE("consistency of the initial value") {
    auto ex = nonlinear_example("paper-sec5");
    ConsistencyReport rep = check_consistency(ex.plant, ex.controller, 1e-12);
    CHECK(rep.consistent);
    CHECK(rep.norm == 0.0);

    // perturb y2(0) to 0.1: direct-evaluation oracle gives residual
    // f2 + f4 u_II = 0.1 + (-k_II e_II) = 0.1 - 2 * 0.1 = -0.1
    ex.plant.history = {smooth_zero(), smooth_constant(0.1)};
    rep = check_consistency(ex.plant, ex.controller, 1e-12);
    CHECK_FALSE(rep.consistent);
    CHECK(rep.residual(0) == doctest::Approx(-0.1).epsilon(1e-14));

    auto trivial = nonlinear_example("trivial-integrator");
    ConsistencyReport vac = check_consistency(trivial.plant, trivial.controller);
    CHECK(vac.consistent); // no algebraic part
    CHECK(vac.residual.size() == 0);
}

TEST_CASE("algebraic residual formula") {
    auto ex = nonlinear_example("paper-sec5");
    InitialState init = assemble_initial_state(ex.plant);
    CascadeResult c0 = cascade_at(ex.plant, ex.controller, 0.0, init.X_I, init.X_II);
    Eigen::VectorXd eta2 = Eigen::VectorXd::Zero(1);
    Eigen::VectorXd r0 = residual_FII(ex.plant, ex.controller, 0.0, init.X_I, init.X_II, eta2, c0);
    CHECK(r0.norm() == 0.0);

    // u_I == 0 and f2 the identity in X_II: residual = X_II + f3 + gain term
    Eigen::VectorXd xii = (Eigen::VectorXd(1) << 0.37).finished();
    SUBCASE("direct formula on the algebraic-only plant") {
        auto alg = algebraic_only_example();
        Eigen::VectorXd eta = Eigen::VectorXd::Zero(1);
        CascadeResult empty;
        empty.e_I = Eigen::VectorXd::Zero(0);
        empty.e_II = xii;
        empty.u = Eigen::VectorXd::Zero(1);
        // khat e_II term: -2 * 0.37 / (1 - phi^2 |0.37|^2)
        double t = 1.0;
        double phi = alg.controller.phi_II(t);
        double w = 1.0 - phi * phi * 0.37 * 0.37;
        double expect = 0.37 - std::sin(t) - 2.0 * 0.37 / w;
        Eigen::VectorXd r =
            residual_FII(alg.plant, alg.controller, t, Eigen::VectorXd::Zero(0), xii, eta, empty);
        CHECK(r(0) == doctest::Approx(expect).epsilon(1e-14));
    }

    SUBCASE("randomized duplicate evaluation") {
        std::mt19937 rng(4242);
        std::uniform_real_distribution<double> box(-0.1, 0.1);
        for (int trial = 0; trial < 25; ++trial) {
            double t = 0.3 + trial * 0.35;
            // admissible points sit near the reference so every cascade
            // level stays inside its funnel
            Jet ref = ex.controller.yref[0].jet(t, 1);
            Eigen::VectorXd XI =
                (Eigen::VectorXd(2) << ref.deriv(0) + box(rng), ref.deriv(1) + box(rng))
                    .finished();
            Eigen::VectorXd XII = (Eigen::VectorXd(1) << ex.controller.yref[1](t) + box(rng))
                                      .finished();
            Eigen::VectorXd eta = (Eigen::VectorXd(1) << box(rng)).finished();
            CascadeResult c = cascade_at(ex.plant, ex.controller, t, XI, XII);
            Eigen::VectorXd lib =
                residual_FII(ex.plant, ex.controller, t, XI, XII, eta, c);

            // independent re-implementation of the formula
            double y1 = XI(0), dy1 = XI(1), y2 = XII(0);
            double f2v = y1 * y1 * y1 + y1 * dy1 * dy1 * dy1 + y2;
            double f3v = eta(0);
            double gIIv = eta(0);
            double eII = y2 - ex.controller.yref[1](t);
            double phi = ex.controller.phi_II(t);
            double w = 1.0 - phi * phi * eII * eII;
            double uII = -2.0 * eII / w;
            double expect = f2v + f3v + gIIv * c.u(0) + uII;
            CHECK(lib(0) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("constraint Jacobian") {
    auto ex = nonlinear_example("paper-sec5");
    InitialState init = assemble_initial_state(ex.plant);
    Eigen::VectorXd eta2 = Eigen::VectorXd::Zero(1);

    // e_II = 0 at t = 0: jacobian reduces to df2/dX_II - khat f4 = 1 - 2
    Eigen::MatrixXd j0 =
        jacobian_FII_XII(ex.plant, ex.controller, 0.0, init.X_I, init.X_II, eta2);
    CHECK(j0(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));

    SUBCASE("matches central finite differences") {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> box(-0.1, 0.1);
        const double h = 1e-6;
        for (int trial = 0; trial < 20; ++trial) {
            double t = 0.2 + trial * 0.45;
            Jet ref = ex.controller.yref[0].jet(t, 1);
            Eigen::VectorXd XI =
                (Eigen::VectorXd(2) << ref.deriv(0) + box(rng), ref.deriv(1) + box(rng))
                    .finished();
            Eigen::VectorXd XII =
                (Eigen::VectorXd(1) << ex.controller.yref[1](t) + box(rng)).finished();
            Eigen::VectorXd eta = (Eigen::VectorXd(1) << box(rng)).finished();
            CascadeResult c = cascade_at(ex.plant, ex.controller, t, XI, XII);

            Eigen::MatrixXd jac = jacobian_FII_XII(ex.plant, ex.controller, t, XI, XII, eta);
            Eigen::VectorXd hi = XII, lo = XII;
            hi(0) += h;
            lo(0) -= h;
            double fd = (residual_FII(ex.plant, ex.controller, t, XI, hi, eta, c)(0) -
                         residual_FII(ex.plant, ex.controller, t, XI, lo, eta, c)(0)) /
                        (2 * h);
            CHECK(std::abs(jac(0, 0) - fd) / std::max(1.0, std::abs(jac(0, 0))) <= 1e-6);
        }
    }

    SUBCASE("gain part is negative definite (outer product is PSD)") {
        // two-dimensional algebraic block with flat f2: J = -c (I + G)
        NonlinearFunctionalDae plant;
        plant.m = 2;
        plant.q = 0;
        plant.alpha = 0.5;
        plant.f2_jac_sup = 0.0;
        plant.f2 = [](const Eigen::VectorXd&, const Eigen::VectorXd& xii) {
            return Eigen::VectorXd::Zero(xii.size()).eval();
        };
        plant.f2_jac_XII = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Zero(2, 2).eval();
        };
        plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 0.5; };
        plant.T2 = make_lti_filter((Eigen::MatrixXd(1, 1) << -1.0).finished(),
                                   Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1))
                       .op;
        plant.history = {smooth_zero(), smooth_zero()};
        ControllerConfig ctrl =
            uniform_controller(plant, default_phi(), 1.0, {smooth_zero(), smooth_zero()});

        std::mt19937 rng(999);
        std::uniform_real_distribution<double> box(-0.25, 0.25);
        for (int trial = 0; trial < 15; ++trial) {
            double t = 0.5 + trial * 0.6;
            Eigen::VectorXd XII = (Eigen::VectorXd(2) << box(rng), box(rng)).finished();
            Eigen::MatrixXd jac = jacobian_FII_XII(plant, ctrl, t, Eigen::VectorXd::Zero(0), XII,
                                                   Eigen::VectorXd::Zero(1));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((jac + jac.transpose()) / 2.0);
            CHECK(es.eigenvalues().maxCoeff() < 0.0);
        }
    }
}

TEST_CASE("trivial plant stays at zero") {
    auto ex = nonlinear_example("trivial-integrator");
    SimulationConfig cfg;
    cfg.t_end = 5.0;
    cfg.set_tolerance(1e-8);
    Trajectory traj = integrate(ex.plant, ex.controller, cfg);
    CHECK(traj.completed);
    for (const auto& s : traj.samples) {
        CHECK(s.y.norm() == 0.0);
        CHECK(s.u.norm() == 0.0);
    }
}

TEST_CASE("algebraic-only plant (q = 0) integrates and satisfies its constraint") {
    auto ex = algebraic_only_example();
    SimulationConfig cfg;
    cfg.t_end = 5.0;
    cfg.set_tolerance(1e-9);
    Trajectory traj = integrate(ex.plant, ex.controller, cfg);
    CHECK(traj.completed);
    double max_res = 0.0;
    for (const auto& s : traj.samples)
        max_res = std::max(max_res, s.residual);
    CHECK(max_res <= cfg.newton_tol);
    MarginsReport margins = monitor_funnel(traj);
    CHECK(margins.all_positive);
}

TEST_CASE("simulation-example run over a short horizon") {
    auto ex = nonlinear_example("paper-sec5");
    SimulationConfig cfg;
    cfg.t_end = 2.0;
    cfg.set_tolerance(1e-8);
    Trajectory traj = integrate(ex.plant, ex.controller, cfg);
    CHECK(traj.completed);
    MarginsReport margins = monitor_funnel(traj);
    CHECK(margins.all_positive);
    // first recorded sample reproduces the closed-form start
    CHECK(traj.samples.front().u(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(traj.samples.front().k_II == doctest::Approx(2.0).epsilon(1e-14));
    // trajectory invariants: strictly increasing times, residual within the
    // Newton tolerance at every accepted step
    for (size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    for (const auto& s : traj.samples)
        CHECK(s.residual <= cfg.newton_tol);
}

TEST_CASE("precondition failures are rejected before the march") {
    auto ex = nonlinear_example("paper-sec5");
    ex.controller.khat = 0.5;
    SimulationConfig cfg;
    CHECK_THROWS_WITH_AS(integrate(ex.plant, ex.controller, cfg),
                         doctest::Contains("gain condition"), PreconditionError);

    ex = nonlinear_example("paper-sec5");
    ex.plant.history = {smooth_zero(), smooth_constant(0.1)}; // inconsistent
    CHECK_THROWS_WITH_AS(integrate(ex.plant, ex.controller, cfg),
                         doctest::Contains("inconsistent"), PreconditionError);
}

TEST_CASE("an anti-stabilizing gain aborts with a funnel violation") {
    auto ex = nonlinear_example("trivial-integrator");
    // flip the sign of the input gain: u now pushes the error outward
    ex.plant.gamma_I = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return (-Eigen::MatrixXd::Identity(1, 1)).eval();
    };
    ex.controller.yref = {smooth_sin(0.5, 1.0)};
    SimulationConfig cfg;
    cfg.t_end = 10.0;
    cfg.set_tolerance(1e-6);
    CHECK_THROWS_AS(integrate(ex.plant, ex.controller, cfg), FunnelViolation);
}

TEST_CASE("funnel monitor") {
    auto ex = nonlinear_example("trivial-integrator");
    SimulationConfig cfg;
    cfg.t_end = 5.0;
    cfg.set_tolerance(1e-8);
    Trajectory traj = integrate(ex.plant, ex.controller, cfg);
    MarginsReport rep = monitor_funnel(traj, 0.05);
    CHECK(rep.all_positive);

    // zero-error run: floor_I equals min over samples of 1/phi
    double expect = std::numeric_limits<double>::infinity();
    FunnelFunction phi = default_phi();
    for (const auto& s : traj.samples)
        if (s.t >= 0.05)
            expect = std::min(expect, 1.0 / phi(s.t));
    CHECK(rep.floor_I == doctest::Approx(expect).epsilon(1e-12));

    // synthetic boundary touch is reported with its time stamp
    Trajectory fake;
    fake.m = 1;
    fake.q = 1;
    fake.r = {1};
    TrajectorySample s;
    s.t = 3.0;
    s.margin.resize(1);
    s.margin_I = -0.01;
    s.margin_II = 1.0;
    s.e_II = Eigen::VectorXd::Zero(1);
    fake.samples.push_back(s);
    MarginsReport touched = monitor_funnel(fake, 0.05);
    CHECK_FALSE(touched.all_positive);
    CHECK(touched.worst <= 0.0);
    CHECK(touched.worst_time == 3.0);
}

TEST_CASE("standing assumptions spot-check on the registry plants") {
    for (const auto& name : nonlinear_example_names()) {
        auto ex = nonlinear_example(name);
        AssumptionCheck chk = check_assumptions(ex.plant, 50);
        CHECK(chk.gamma_I_positive);
        CHECK(chk.f4_above_floor);
        CHECK(chk.f2_bound_consistent);
    }

    // violations are caught on samples
    auto ex = nonlinear_example("paper-sec5");
    ex.plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        return eta(0); // can fall below alpha = 1
    };
    AssumptionCheck bad = check_assumptions(ex.plant, 50);
    CHECK_FALSE(bad.f4_above_floor);

    ex = nonlinear_example("paper-sec5");
    ex.plant.f2_jac_sup = 0.5; // declared bound below the true value 1
    bad = check_assumptions(ex.plant, 50);
    CHECK_FALSE(bad.f2_bound_consistent);
}
