#include "daefc/errors.hpp"
#include "daefc/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitFunnel = 4;
constexpr int kExitSolver = 5;

daefc::SystemFile load_target(const std::string& target) {
    if (daefc::is_linear_example(target)) {
        daefc::SystemFile f;
        f.kind = "linear";
        f.linear = daefc::linear_example(target).system;
        return f;
    }
    if (daefc::is_nonlinear_example(target)) {
        daefc::SystemFile f;
        f.kind = "nonlinear";
        f.nonlinear = daefc::nonlinear_example(target);
        return f;
    }
    return daefc::load_system_file(target);
}

int cmd_analyze(const std::string& target, const std::string& out_path) {
    daefc::SystemFile file = load_target(target);
    if (file.kind != "linear") {
        std::cerr << "analyze: '" << target << "' is not a linear system\n";
        return kExitPrecondition;
    }
    daefc::Json report = daefc::analyze_to_json(file.linear);
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    }
    return kExitOk;
}

struct SimulateOptions {
    double t_end = 10.0;
    double tol = 1e-10;
    double khat = -1.0; // < 0: keep the config value
    std::string out_csv;
    std::string out_summary;
    bool grid_only = false;
};

int simulate_one(const std::string& target, const SimulateOptions& opt) {
    daefc::SystemFile file = load_target(target);
    if (file.kind != "nonlinear") {
        std::cerr << "simulate: '" << target << "' is not a simulatable system\n";
        return kExitPrecondition;
    }
    daefc::NonlinearExample ex = file.nonlinear;
    if (opt.khat > 0.0)
        ex.controller.khat = opt.khat;

    daefc::SimulationConfig cfg;
    cfg.t_end = opt.t_end;
    cfg.set_tolerance(opt.tol);

    daefc::Trajectory traj = daefc::integrate(ex.plant, ex.controller, cfg);
    daefc::MarginsReport margins = daefc::monitor_funnel(traj, cfg.margin_t_min);

    if (!opt.out_csv.empty())
        daefc::write_trajectory_csv(opt.out_csv, traj, opt.grid_only);
    daefc::Json summary = daefc::summary_json(traj, margins);
    if (ex.x3_from_sample) {
        double x3_max = 0.0;
        for (const auto& s : traj.samples)
            x3_max = std::max(x3_max, ex.x3_from_sample(s).cwiseAbs().maxCoeff());
        summary["x3_max_abs"] = x3_max;
    }
    if (opt.out_summary.empty()) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::ofstream out(opt.out_summary);
        out << summary.dump(2) << "\n";
    }
    return margins.all_positive ? kExitOk : kExitFunnel;
}

int cmd_simulate(const std::vector<std::string>& targets, const SimulateOptions& opt, bool batch) {
    if (!batch)
        return simulate_one(targets.front(), opt);

    // Independent configs run in parallel with isolated state; outputs are
    // derived from the input names.
    std::vector<std::future<int>> jobs;
    for (const auto& target : targets) {
        SimulateOptions each = opt;
        std::string stem = std::filesystem::path(target).stem().string();
        if (stem.empty())
            stem = target;
        each.out_csv = stem + "_traj.csv";
        each.out_summary = stem + "_summary.json";
        jobs.push_back(std::async(std::launch::async, simulate_one, target, each));
    }
    int worst = kExitOk;
    for (auto& job : jobs)
        worst = std::max(worst, job.get());
    return worst;
}

// ---- selftest: the golden-example battery ----------------------------------

struct SelfTest {
    std::string name;
    std::function<bool()> run;
};

daefc::RatFun rf(std::initializer_list<int> num, std::initializer_list<int> den) {
    std::vector<daefc::Rat> n, d;
    for (int v : num)
        n.emplace_back(v);
    for (int v : den)
        d.emplace_back(v);
    return daefc::RatFun(daefc::Poly(std::move(n)), daefc::Poly(std::move(d)));
}

std::vector<SelfTest> build_selftests(bool corrupt) {
    using namespace daefc;
    std::vector<SelfTest> tests;

    tests.push_back({"tvrd-nonexist H(s) and gamma_hat", [corrupt] {
        LinearDae sys = linear_example("tvrd-nonexist").system;
        RatMat H = compute_H(sys);
        RatMat expect(2, 2, {rf({-1, 1}, {1}), rf({1, 1}, {1}), rf({-1, 1}, {1}), rf({-2, 1}, {1})});
        if (corrupt)
            expect(0, 0) = rf({5}, {1}); // deliberate mismatch for the failure path
        TvrdReport tv = truncated_vrd(sys);
        return H == expect && tv.r == std::vector<int>{1, 1} && !tv.exists &&
               tv.gamma_hat == QMat::from_ints(2, 2, {1, 1, 1, 1}) && rank(tv.gamma_hat_q) == 1;
    }});

    tests.push_back({"exlin transfer function", [] {
        LinearDae sys = linear_example("exlin").system;
        RatMat G = transfer_function(sys);
        RatMat expect(2, 2,
                      {rf({0}, {1}), rf({-1}, {0, 1}),
                       rf({1, 1}, {6}), rf({-8, -4, 1, 1, 1}, {0, 6})});
        return G == expect;
    }});

    tests.push_back({"exlin H = G^{-1}", [] {
        LinearDae sys = linear_example("exlin").system;
        RatMat H = compute_H(sys);
        RatMat expect(2, 2,
                      {rf({-8, -4, 1, 1, 1}, {1, 1}), rf({6}, {1, 1}),
                       rf({0, -1}, {1}), rf({0}, {1})});
        return H == expect && H == inverse(transfer_function(sys));
    }});

    tests.push_back({"exlin truncated vrd (3,0)", [] {
        TvrdReport tv = truncated_vrd(linear_example("exlin").system);
        return tv.exists && tv.r == std::vector<int>{3, 0} &&
               tv.gamma_hat == QMat::from_ints(2, 2, {1, 0, 0, 0}) && tv.q == 1;
    }});

    tests.push_back({"exlin vector rd does not exist", [] {
        VrdReport v = vector_rd(linear_example("exlin").system);
        QMat expect(2, 2, {Rat(0), Rat(-1), Rat(0), Rat(1) / 6});
        return !v.exists && v.gamma == expect && rank(v.gamma) == 1;
    }});

    tests.push_back({"exlin output permutation gives tvrd (0,3)", [] {
        LinearDae sys = permute_outputs(linear_example("exlin").system, {1, 0});
        TvrdReport tv = truncated_vrd(sys);
        return tv.exists && tv.r == std::vector<int>{0, 3};
    }});

    tests.push_back({"feedback example G(s) = -s, vrd (-1)", [] {
        LinearDae sys = linear_example("feedback-minus-s").system;
        RatMat G = transfer_function(sys);
        VrdReport v = vector_rd(sys);
        return is_regular(sys) && G(0, 0) == rf({0, -1}, {1}) && v.exists &&
               v.r == std::vector<int>{-1} && v.gamma == QMat::from_ints(1, 1, {-1});
    }});

    tests.push_back({"feedback drops the vrd of G = -s to zero", [] {
        LinearDae sys = linear_example("feedback-minus-s").system;
        for (int k = 1; k <= 3; ++k) {
            QMat K(1, 1, {Rat(k)});
            LinearDae fed = apply_output_feedback(sys, K);
            RatMat Gk = transfer_function(fed);
            // G_K(s) = -s/(1 + K s), proper, so the vrd becomes (0).
            if (!(Gk(0, 0) == RatFun(Poly({Rat(0), Rat(-1)}), Poly({Rat(1), Rat(k)}))))
                return false;
            VrdReport v = vector_rd(fed);
            if (!v.exists || v.r != std::vector<int>{0})
                return false;
        }
        return true;
    }});

    tests.push_back({"strict relative degree example (non-autonomous ZD)", [] {
        LinearDae sys;
        sys.E = QMat::from_ints(1, 1, {1});
        sys.A = QMat::from_ints(1, 1, {0});
        sys.B = QMat::from_ints(1, 2, {1, 1});
        sys.C = QMat::from_ints(1, 1, {1});
        VrdReport v = vector_rd(sys);
        return !zero_dynamics_autonomous(sys) && is_right_invertible(sys) && v.exists &&
               v.strict && v.r == std::vector<int>{1} && v.gamma == QMat::from_ints(1, 2, {1, 1});
    }});

    tests.push_back({"limit entries of gamma_hat", [] {
        auto one = limit_at_infinity(rf({-1, 1}, {1}), -1);
        auto zero = limit_at_infinity(rf({6}, {1, 1}), 0);
        auto div = limit_at_infinity(rf({0, 0, 1}, {1}), -1);
        return one && *one == 1 && zero && *zero == 0 && !div;
    }});

    tests.push_back({"paper-sec5 controller values at t = 0", [] {
        auto ex = nonlinear_example("paper-sec5");
        InitialState init = assemble_initial_state(ex.plant);
        CascadeResult c = cascade_at(ex.plant, ex.controller, 0.0, init.X_I, init.X_II);
        auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
        return near(c.k[0][0], 1.0) && near(c.k_I, 1.0) && near(c.k_II, 2.0) &&
               near(c.e_I(0), -1.0) && near(c.e_II(0), 0.0) && near(c.u(0), 1.0) &&
               near(c.u(1), 0.0);
    }});

    tests.push_back({"paper-sec5 initial value is consistent", [] {
        auto ex = nonlinear_example("paper-sec5");
        ConsistencyReport rep = check_consistency(ex.plant, ex.controller, 1e-12);
        return rep.consistent && rep.norm == 0.0;
    }});

    tests.push_back({"paper-sec5 gain choice khat = 2 is admissible", [] {
        auto ex = nonlinear_example("paper-sec5");
        return check_gain_condition(2.0, ex.plant.alpha, ex.plant.f2_jac_sup) &&
               !check_gain_condition(1.0, ex.plant.alpha, ex.plant.f2_jac_sup);
    }});

    return tests;
}

int cmd_selftest(const std::string& filter, bool corrupt) {
    auto tests = build_selftests(corrupt);
    int failures = 0, ran = 0;
    for (auto& t : tests) {
        if (!filter.empty() && t.name.find(filter) == std::string::npos)
            continue;
        ++ran;
        bool ok = false;
        std::string error;
        try {
            ok = t.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << t.name;
        if (!ok && !error.empty())
            std::cout << " (" << error << ")";
        std::cout << "\n";
        if (!ok)
            ++failures;
    }
    std::cout << ran - failures << "/" << ran << " golden checks passed\n";
    return failures == 0 ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural analysis and funnel-control simulation for DAE systems"};
    app.require_subcommand(1);

    std::string analyze_target, analyze_out;
    CLI::App* analyze = app.add_subcommand("analyze", "exact analysis of a linear system");
    analyze->add_option("target", analyze_target, "registry name or JSON file")->required();
    analyze->add_option("--out", analyze_out, "write the JSON report here");

    std::vector<std::string> sim_targets;
    SimulateOptions sim_opt;
    bool batch = false;
    CLI::App* simulate = app.add_subcommand("simulate", "closed-loop funnel-control simulation");
    simulate->add_option("target", sim_targets, "registry name(s) or JSON file(s)")->required();
    simulate->add_option("--t-end", sim_opt.t_end, "simulation horizon");
    simulate->add_option("--tol", sim_opt.tol, "integration tolerance (rtol = atol)");
    simulate->add_option("--khat", sim_opt.khat, "override the algebraic gain offset");
    simulate->add_option("--out", sim_opt.out_csv, "trajectory CSV path");
    simulate->add_option("--summary", sim_opt.out_summary, "summary JSON path");
    simulate->add_flag("--grid-only", sim_opt.grid_only, "write only forced-grid samples");
    simulate->add_flag("--batch", batch, "treat targets as independent configs, run in parallel");

    std::string filter;
    bool corrupt = false;
    CLI::App* selftest = app.add_subcommand("selftest", "run the golden-example battery");
    selftest->add_option("--filter", filter, "run only checks whose name contains this");
    selftest->add_flag("--inject-corruption", corrupt, "corrupt one expectation (failure-path fixture)")
        ->group(""); // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze)
            return cmd_analyze(analyze_target, analyze_out);
        if (*simulate)
            return cmd_simulate(sim_targets, sim_opt, batch);
        if (*selftest)
            return cmd_selftest(filter, corrupt);
    } catch (const daefc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const daefc::FunnelViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFunnel;
    } catch (const daefc::NewtonFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const daefc::StepUnderflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const daefc::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
