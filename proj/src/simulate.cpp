#include "daefc/simulate.hpp"

#include "daefc/errors.hpp"

#include <cmath>

namespace daefc {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

Eigen::VectorXd yref_II_at(const ControllerConfig& ctrl, const NonlinearFunctionalDae& plant,
                           double t) {
    Eigen::VectorXd v(plant.alg_dim());
    for (int i = 0; i < plant.alg_dim(); ++i)
        v(i) = ctrl.yref[plant.q + i](t);
    return v;
}

Eigen::VectorXd output_from_states(const NonlinearFunctionalDae& plant,
                                   const Eigen::VectorXd& X_I, const Eigen::VectorXd& X_II) {
    Eigen::VectorXd y(plant.m);
    int at = 0;
    for (int i = 0; i < plant.q; ++i) {
        y(i) = X_I(at);
        at += plant.r[i];
    }
    y.tail(plant.alg_dim()) = X_II;
    return y;
}

} // namespace

InitialState assemble_initial_state(const NonlinearFunctionalDae& plant) {
    plant.validate();
    InitialState init;
    init.X_I = Eigen::VectorXd::Zero(plant.rbar());
    init.X_II = Eigen::VectorXd::Zero(plant.alg_dim());
    int at = 0;
    for (int i = 0; i < plant.q; ++i) {
        if (!plant.history[i].valid())
            throw PreconditionError("history channel " + std::to_string(i + 1) +
                                    " cannot deliver the required derivatives");
        Jet j = plant.history[i].jet(0.0, plant.r[i] - 1);
        if (j.order() < plant.r[i] - 1)
            throw PreconditionError("history channel " + std::to_string(i + 1) +
                                    " is not smooth enough");
        for (int d = 0; d < plant.r[i]; ++d)
            init.X_I(at + d) = j.deriv(d);
        at += plant.r[i];
    }
    for (int i = 0; i < plant.alg_dim(); ++i) {
        if (!plant.history[plant.q + i].valid())
            throw PreconditionError("history channel " + std::to_string(plant.q + i + 1) +
                                    " is missing");
        init.X_II(i) = plant.history[plant.q + i](0.0);
    }
    init.w1 = plant.q > 0 ? plant.T1.initial_state : Eigen::VectorXd::Zero(0);
    init.w2 = plant.alg_dim() > 0 ? plant.T2.initial_state : Eigen::VectorXd::Zero(0);
    return init;
}

CascadeResult cascade_at(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                         double t, const Eigen::VectorXd& X_I, const Eigen::VectorXd& X_II) {
    CascadeInput in;
    in.t = t;
    in.r = plant.r;
    in.khat = ctrl.khat;
    int at = 0;
    for (int i = 0; i < plant.q; ++i) {
        const int o = plant.r[i] - 1;
        Jet y(o);
        for (int d = 0; d <= o; ++d)
            y.coeff_ref(d) = X_I(at + d) / factorial(d);
        in.y_jets.push_back(y);
        in.yref_jets.push_back(ctrl.yref[i].jet(t, o));
        std::vector<Jet> phis;
        for (int j = 0; j <= plant.r[i] - 2; ++j)
            phis.push_back(ctrl.phi[i][j].jet(t, o - j));
        in.phi_jets.push_back(std::move(phis));
        at += plant.r[i];
    }
    in.phi_I = ctrl.phi_I(t);
    in.phi_II = ctrl.phi_II(t);
    in.e_II = X_II - yref_II_at(ctrl, plant, t);
    return error_cascade(in);
}

Eigen::VectorXd residual_FII(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                             double t, const Eigen::VectorXd& X_I, const Eigen::VectorXd& X_II,
                             const Eigen::VectorXd& eta2, const CascadeResult& cascade) {
    const int na = plant.alg_dim();
    if (na == 0)
        return Eigen::VectorXd::Zero(0);
    Eigen::VectorXd e_II = X_II - yref_II_at(ctrl, plant, t);
    const double phi_II = ctrl.phi_II(t);
    const double w = 1.0 - phi_II * phi_II * e_II.squaredNorm();
    if (w <= 0.0)
        throw FunnelViolation(-1, FunnelViolation::kLevelII, t);
    Eigen::VectorXd u_II = -(ctrl.khat / w) * e_II;

    Eigen::VectorXd res = plant.f2(X_I, X_II);
    if (plant.f3)
        res += plant.f3(plant.disturbance(2, t), eta2);
    if (plant.q > 0 && plant.gamma_II)
        res += plant.gamma_II(plant.disturbance(3, t), eta2) * cascade.u.head(plant.q);
    res += plant.f4(plant.disturbance(4, t), eta2) * u_II;
    return res;
}

Eigen::MatrixXd jacobian_FII_XII(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                                 double t, const Eigen::VectorXd& X_I,
                                 const Eigen::VectorXd& X_II, const Eigen::VectorXd& eta2) {
    const int na = plant.alg_dim();
    Eigen::VectorXd e_II = X_II - yref_II_at(ctrl, plant, t);
    const double phi_II = ctrl.phi_II(t);
    const double w = 1.0 - phi_II * phi_II * e_II.squaredNorm();
    if (w <= 0.0)
        throw FunnelViolation(-1, FunnelViolation::kLevelII, t);
    Eigen::MatrixXd outer =
        (2.0 * phi_II * phi_II / w) * (e_II * e_II.transpose());
    const double f4v = plant.f4(plant.disturbance(4, t), eta2);
    return plant.f2_jac_XII(X_I, X_II) -
           (ctrl.khat * f4v / w) * (Eigen::MatrixXd::Identity(na, na) + outer);
}

namespace {

struct AlgebraicSolve {
    Eigen::VectorXd X_II;
    double residual_norm = 0.0;
    int iterations = 0;
};

AlgebraicSolve solve_algebraic(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                               const SimulationConfig& cfg, double t, const Eigen::VectorXd& X_I,
                               const Eigen::VectorXd& eta2, const CascadeResult& cascade,
                               Eigen::VectorXd warm_start) {
    AlgebraicSolve out;
    out.X_II = std::move(warm_start);
    if (plant.alg_dim() == 0)
        return out;

    Eigen::VectorXd res = residual_FII(plant, ctrl, t, X_I, out.X_II, eta2, cascade);
    out.residual_norm = res.norm();
    while (out.residual_norm > cfg.newton_tol) {
        if (out.iterations >= cfg.newton_max)
            throw NewtonFailure(t, out.residual_norm);
        Eigen::MatrixXd jac = jacobian_FII_XII(plant, ctrl, t, X_I, out.X_II, eta2);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible())
            throw NewtonFailure(t, out.residual_norm);
        Eigen::VectorXd delta = lu.solve(-res);

        // Damped update: a full step may hop outside the funnel even though
        // the solution is inside.
        double scale = 1.0;
        const double phi_II = ctrl.phi_II(t);
        Eigen::VectorXd ref = yref_II_at(ctrl, plant, t);
        Eigen::VectorXd trial;
        for (int halvings = 0;; ++halvings) {
            trial = out.X_II + scale * delta;
            double w = 1.0 - phi_II * phi_II * (trial - ref).squaredNorm();
            if (w > 0.0)
                break;
            if (halvings >= 30)
                throw FunnelViolation(-1, FunnelViolation::kLevelII, t);
            scale *= 0.5;
        }
        out.X_II = trial;
        ++out.iterations;
        res = residual_FII(plant, ctrl, t, X_I, out.X_II, eta2, cascade);
        out.residual_norm = res.norm();
    }
    return out;
}

struct StageEval {
    CascadeResult cascade;
    Eigen::VectorXd X_II;
    Eigen::VectorXd rate; // d/dt [X_I; w1; w2]
    double residual_norm = 0.0;
    int newton_iterations = 0;
};

// One half-explicit stage: solve the constraint at (t, X_I), then evaluate
// the differential right-hand side.
StageEval eval_stage(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                     const SimulationConfig& cfg, double t, const Eigen::VectorXd& Z,
                     const Eigen::VectorXd& X_II_warm) {
    const int nr = plant.rbar();
    const int n1 = plant.q > 0 ? plant.T1.state_dim : 0;
    const int n2 = plant.alg_dim() > 0 ? plant.T2.state_dim : 0;
    Eigen::VectorXd X_I = Z.head(nr);
    Eigen::VectorXd w1 = Z.segment(nr, n1);
    Eigen::VectorXd w2 = Z.segment(nr + n1, n2);

    StageEval ev;
    Eigen::VectorXd eta2 = Eigen::VectorXd::Zero(0);
    if (plant.alg_dim() > 0)
        eta2 = plant.T2.output(w2, Eigen::VectorXd::Zero(plant.m), t);

    ev.cascade = cascade_at(plant, ctrl, t, X_I, X_II_warm);
    AlgebraicSolve alg =
        solve_algebraic(plant, ctrl, cfg, t, X_I, eta2, ev.cascade, X_II_warm);
    ev.X_II = alg.X_II;
    ev.residual_norm = alg.residual_norm;
    ev.newton_iterations = alg.iterations;
    // Refresh e_II/k_II/u_II for the solved algebraic state.
    ev.cascade = cascade_at(plant, ctrl, t, X_I, ev.X_II);

    ev.rate = Eigen::VectorXd::Zero(Z.size());
    Eigen::VectorXd zeta(nr + plant.alg_dim());
    zeta << X_I, ev.X_II;
    if (plant.q > 0) {
        Eigen::VectorXd eta1 = plant.T1.output(w1, zeta, t);
        Eigen::VectorXd top = plant.f1(plant.disturbance(0, t), eta1) +
                              plant.gamma_I(plant.disturbance(1, t), eta1) *
                                  ev.cascade.u.head(plant.q);
        int at = 0;
        for (int i = 0; i < plant.q; ++i) {
            for (int d = 0; d + 1 < plant.r[i]; ++d)
                ev.rate(at + d) = X_I(at + d + 1);
            ev.rate(at + plant.r[i] - 1) = top(i);
            at += plant.r[i];
        }
        ev.rate.segment(nr, n1) = plant.T1.state_rate(w1, zeta, t);
    }
    if (plant.alg_dim() > 0) {
        Eigen::VectorXd y = output_from_states(plant, X_I, ev.X_II);
        ev.rate.segment(nr + n1, n2) = plant.T2.state_rate(w2, y, t);
    }
    return ev;
}

TrajectorySample make_sample(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                             double t, const Eigen::VectorXd& Z, const StageEval& ev) {
    const int nr = plant.rbar();
    const int n1 = plant.q > 0 ? plant.T1.state_dim : 0;
    const int n2 = plant.alg_dim() > 0 ? plant.T2.state_dim : 0;
    TrajectorySample s;
    s.t = t;
    s.X_I = Z.head(nr);
    s.w1 = Z.segment(nr, n1);
    s.w2 = Z.segment(nr + n1, n2);
    s.X_II = ev.X_II;
    s.y = output_from_states(plant, s.X_I, s.X_II);
    s.u = ev.cascade.u;
    s.e = ev.cascade.e;
    s.k = ev.cascade.k;
    s.e_I = ev.cascade.e_I;
    s.e_II = ev.cascade.e_II;
    s.k_I = ev.cascade.k_I;
    s.k_II = ev.cascade.k_II;
    s.residual = ev.residual_norm;

    s.margin.resize(plant.q);
    for (int i = 0; i < plant.q; ++i)
        for (int j = 0; j <= plant.r[i] - 2; ++j) {
            double phi = ctrl.phi[i][j](t);
            double inv = phi > 0.0 ? 1.0 / phi : std::numeric_limits<double>::infinity();
            s.margin[i].push_back(inv - std::abs(ev.cascade.e[i][j]));
        }
    double pI = ctrl.phi_I(t);
    s.margin_I = (pI > 0.0 ? 1.0 / pI : std::numeric_limits<double>::infinity()) -
                 ev.cascade.e_I.norm();
    double pII = ctrl.phi_II(t);
    s.margin_II = (pII > 0.0 ? 1.0 / pII : std::numeric_limits<double>::infinity()) -
                  ev.cascade.e_II.norm();
    return s;
}

} // namespace

ConsistencyReport check_consistency(const NonlinearFunctionalDae& plant,
                                    const ControllerConfig& ctrl, double tol) {
    ctrl.validate(plant);
    InitialState init = assemble_initial_state(plant);
    ConsistencyReport rep;
    if (plant.alg_dim() == 0) {
        rep.consistent = true; // no algebraic part
        rep.residual = Eigen::VectorXd::Zero(0);
        return rep;
    }
    CascadeResult cascade = cascade_at(plant, ctrl, 0.0, init.X_I, init.X_II);
    Eigen::VectorXd eta2 = plant.T2.output(init.w2, Eigen::VectorXd::Zero(plant.m), 0.0);
    rep.residual = residual_FII(plant, ctrl, 0.0, init.X_I, init.X_II, eta2, cascade);
    rep.norm = rep.residual.norm();
    rep.consistent = rep.norm <= tol;
    return rep;
}

Trajectory integrate(const NonlinearFunctionalDae& plant, const ControllerConfig& ctrl,
                     const SimulationConfig& cfg) {
    plant.validate();
    ctrl.validate(plant);
    if (!check_gain_condition(ctrl.khat, plant.alpha, plant.f2_jac_sup))
        throw PreconditionError("gain condition violated: khat too small for the declared f2 bound");

    InitialState init = assemble_initial_state(plant);
    {
        CascadeResult c0 = cascade_at(plant, ctrl, 0.0, init.X_I, init.X_II);
        std::vector<std::vector<double>> phi0(plant.q);
        for (int i = 0; i < plant.q; ++i)
            for (int j = 0; j <= plant.r[i] - 2; ++j)
                phi0[i].push_back(ctrl.phi[i][j](0.0));
        auto chk = check_initial_funnel(c0, phi0, ctrl.phi_I(0.0), ctrl.phi_II(0.0));
        if (!chk.ok)
            throw PreconditionError("initial data starts outside a funnel");
    }
    ConsistencyReport cons = check_consistency(plant, ctrl, cfg.consistency_tol);
    if (!cons.consistent)
        throw PreconditionError("inconsistent initial value: algebraic residual " +
                                std::to_string(cons.norm));

    Trajectory traj;
    traj.m = plant.m;
    traj.q = plant.q;
    traj.r = plant.r;

    const int nr = plant.rbar();
    const int n1 = plant.q > 0 ? plant.T1.state_dim : 0;
    const int n2 = plant.alg_dim() > 0 ? plant.T2.state_dim : 0;
    Eigen::VectorXd Z(nr + n1 + n2);
    Z << init.X_I, init.w1, init.w2;
    Eigen::VectorXd X_II = init.X_II;

    double t = 0.0;
    double h = std::min(cfg.h0, cfg.hmax);
    traj.stats.min_step = std::numeric_limits<double>::infinity();

    StageEval s1 = eval_stage(plant, ctrl, cfg, t, Z, X_II);
    traj.stats.newton_iterations += s1.newton_iterations;
    traj.samples.push_back(make_sample(plant, ctrl, t, Z, s1));
    traj.samples.back().on_sample_grid = true;

    double prev_err = 1.0;
    long grid_index = 1;
    const double eps_time = 1e-12;

    while (t < cfg.t_end - eps_time) {
        // Land exactly on the sample grid and the horizon.
        double limit = cfg.t_end;
        bool grid_hit = false;
        if (cfg.sample_interval > 0.0) {
            double next_grid = grid_index * cfg.sample_interval;
            if (next_grid < limit - eps_time) {
                limit = next_grid;
                grid_hit = true;
            }
        }
        bool boundary_hit = false;
        if (t + h >= limit - eps_time) {
            h = limit - t;
            boundary_hit = true;
        } else {
            grid_hit = false;
        }

        bool accepted = false;
        try {
            StageEval s2 = eval_stage(plant, ctrl, cfg, t + 0.5 * h, Z + 0.5 * h * s1.rate,
                                      s1.X_II);
            StageEval s3 = eval_stage(plant, ctrl, cfg, t + 0.75 * h, Z + 0.75 * h * s2.rate,
                                      s2.X_II);
            Eigen::VectorXd Znew =
                Z + h * (2.0 / 9.0 * s1.rate + 1.0 / 3.0 * s2.rate + 4.0 / 9.0 * s3.rate);
            StageEval s4 = eval_stage(plant, ctrl, cfg, t + h, Znew, s3.X_II);
            traj.stats.newton_iterations +=
                s2.newton_iterations + s3.newton_iterations + s4.newton_iterations;

            Eigen::VectorXd err = h * ((2.0 / 9.0 - 7.0 / 24.0) * s1.rate +
                                       (1.0 / 3.0 - 1.0 / 4.0) * s2.rate +
                                       (4.0 / 9.0 - 1.0 / 3.0) * s3.rate -
                                       1.0 / 8.0 * s4.rate);
            // The embedded difference estimates the second-order error while
            // the third-order solution is propagated; hold it to a quarter
            // of the requested tolerance.
            constexpr double kErrorSafety = 4.0;
            double err_norm = 0.0;
            for (int i = 0; i < err.size(); ++i) {
                double scale =
                    (cfg.atol + cfg.rtol * std::max(std::abs(Z(i)), std::abs(Znew(i)))) /
                    kErrorSafety;
                err_norm += (err(i) / scale) * (err(i) / scale);
            }
            err_norm = std::sqrt(err_norm / std::max<int>(1, err.size()));

            if (err_norm <= 1.0) {
                t = boundary_hit ? limit : t + h;
                Z = Znew;
                X_II = s4.X_II;
                s1 = s4; // first-same-as-last
                traj.stats.accepted += 1;
                traj.stats.min_step = std::min(traj.stats.min_step, h);
                traj.stats.max_step = std::max(traj.stats.max_step, h);
                traj.samples.push_back(make_sample(plant, ctrl, t, Z, s4));
                traj.samples.back().on_sample_grid = grid_hit || t >= cfg.t_end - eps_time;
                if (grid_hit)
                    ++grid_index;
                accepted = true;
            } else {
                traj.stats.rejected += 1;
            }

            // PI step-size controller (order-2 error estimate).
            double en = std::max(err_norm, 1e-10);
            double factor = 0.9 * std::pow(en, -0.7 / 3.0) * std::pow(prev_err, 0.4 / 3.0);
            factor = std::clamp(factor, 0.2, 5.0);
            h = std::clamp(h * factor, cfg.hmin, cfg.hmax);
            if (accepted)
                prev_err = en;
        } catch (const FunnelViolation&) {
            // A trial stage overshot; shrink the step before giving up.
            traj.stats.rejected += 1;
            h *= 0.5;
            if (h < cfg.hmin)
                throw;
        } catch (const NewtonFailure&) {
            traj.stats.rejected += 1;
            h *= 0.5;
            if (h < cfg.hmin)
                throw;
        }
        if (h < cfg.hmin)
            throw StepUnderflow(t);
    }
    traj.completed = true;
    return traj;
}

MarginsReport monitor_funnel(const Trajectory& traj, double t_min) {
    MarginsReport rep;
    rep.floor_ij.resize(traj.q);
    for (int i = 0; i < traj.q; ++i)
        rep.floor_ij[i].assign(std::max(traj.r[i] - 1, 0),
                               std::numeric_limits<double>::infinity());
    rep.floor_I = rep.floor_II = std::numeric_limits<double>::infinity();
    rep.worst = std::numeric_limits<double>::infinity();

    for (const auto& s : traj.samples) {
        if (s.t < t_min)
            continue;
        auto update = [&](double& floor, double value) {
            floor = std::min(floor, value);
            if (value < rep.worst) {
                rep.worst = value;
                rep.worst_time = s.t;
            }
        };
        for (int i = 0; i < traj.q; ++i)
            for (size_t j = 0; j < s.margin[i].size(); ++j)
                update(rep.floor_ij[i][j], s.margin[i][j]);
        update(rep.floor_I, s.margin_I);
        if (s.e_II.size() > 0)
            update(rep.floor_II, s.margin_II);
    }
    rep.all_positive = rep.worst > 0.0;
    return rep;
}

} // namespace daefc
