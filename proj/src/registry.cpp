#include "daefc/registry.hpp"

#include "daefc/errors.hpp"

#include <cmath>

namespace daefc {

namespace {

LinearDae exlin_system() {
    LinearDae sys;
    sys.E = QMat::from_ints(5, 5,
                            {1, 0, 0, 0, 0,
                             0, 1, 0, 1, 0,
                             0, -1, 0, 0, 0,
                             0, 0, 0, 0, 1,
                             0, 1, 0, 0, 0});
    sys.A = QMat::from_ints(5, 5,
                            {-1, 1, -2, 0, 0,
                             3, 5, 0, 0, 0,
                             0, 0, 0, 0, 0,
                             0, 0, 0, 1, 0,
                             0, 0, 0, 0, 1});
    sys.B = QMat::from_ints(5, 2, {0, 0, 1, 0, 0, 1, 0, 0, 0, 0});
    sys.C = QMat::from_ints(2, 5, {0, 1, 0, 0, 0, 0, 0, 1, 0, 0});
    return sys;
}

LinearDae tvrd_nonexist_system() {
    LinearDae sys;
    sys.E = QMat::from_ints(4, 4,
                            {1, 0, 0, 0,
                             0, 1, 1, 0,
                             0, 1, 1, 0,
                             0, 0, 0, 0});
    sys.A = QMat::from_ints(4, 4,
                            {-1, 0, 0, 0,
                             0, 1, -1, 0,
                             0, 1, 2, 0,
                             0, 0, 0, 1});
    sys.B = QMat::from_ints(4, 2, {0, 0, 1, 0, 0, 1, 0, 0});
    sys.C = QMat::from_ints(2, 4, {0, 1, 0, 0, 0, 0, 1, 0});
    return sys;
}

LinearDae feedback_minus_s_system() {
    LinearDae sys;
    sys.E = QMat::from_ints(2, 2, {0, 1, 0, 0});
    sys.A = QMat::from_ints(2, 2, {1, 0, 0, 1});
    sys.B = QMat::from_ints(2, 1, {0, 1});
    sys.C = QMat::from_ints(1, 2, {1, 0});
    return sys;
}

// The convolution operator of the simulation example: state eta with
// eta' = -2 eta + 2 y1 - y2, output eta.
RealizedOperator memory_operator(double eta0) {
    Eigen::MatrixXd Q(1, 1), Bin(1, 2);
    Q << -2.0;
    Bin << 2.0, -1.0;
    Eigen::VectorXd e0(1);
    e0 << eta0;
    return make_lti_filter(Q, Bin, e0).op;
}

NonlinearFunctionalDae paper_sec5_plant(double eta0) {
    NonlinearFunctionalDae plant;
    plant.m = 2;
    plant.q = 1;
    plant.r = {2};
    plant.alpha = 1.0;
    plant.f2_jac_sup = 1.0;

    plant.f1 = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        Eigen::VectorXd v(1);
        v(0) = -std::sin(eta(0)) + eta(0) * eta(1) + eta(2) * eta(2) +
               eta(1) * eta(1) * eta(3);
        return v;
    };
    plant.gamma_I = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        Eigen::MatrixXd g(1, 1);
        g(0, 0) = eta(0) * eta(0) + std::pow(eta(2), 4) + 1.0;
        return g;
    };
    plant.f2 = [](const Eigen::VectorXd& xi, const Eigen::VectorXd& xii) {
        Eigen::VectorXd v(1);
        v(0) = std::pow(xi(0), 3) + xi(0) * std::pow(xi(1), 3) + xii(0);
        return v;
    };
    plant.f2_jac_XI = [](const Eigen::VectorXd& xi, const Eigen::VectorXd&) {
        Eigen::MatrixXd j(1, 2);
        j(0, 0) = 3.0 * xi(0) * xi(0) + std::pow(xi(1), 3);
        j(0, 1) = 3.0 * xi(0) * xi(1) * xi(1);
        return j;
    };
    plant.f2_jac_XII = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(1, 1).eval();
    };
    plant.f3 = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        Eigen::VectorXd v(1);
        v(0) = eta(0);
        return v;
    };
    plant.gamma_II = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        Eigen::MatrixXd g(1, 1);
        g(0, 0) = eta(0);
        return g;
    };
    plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1.0; };

    plant.T2 = memory_operator(eta0);

    // T1 stacks (y1, y1', y2) with the memory operator's output.
    RealizedOperator base = memory_operator(eta0);
    Eigen::MatrixXd select(2, 3);
    select << 1, 0, 0, 0, 0, 1;
    Eigen::MatrixXd direct(4, 3);
    direct << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0;
    Eigen::MatrixXd out_map(4, 1);
    out_map << 0, 0, 0, 1;
    plant.T1 = affine_combine({base}, {select}, direct, {out_map}, Eigen::VectorXd::Zero(4));

    plant.history = {smooth_zero(), smooth_zero()};
    return plant;
}

NonlinearExample make_paper_sec5() {
    NonlinearExample ex;
    ex.name = "paper-sec5";
    ex.description = "two-output functional DAE with memory operator, q = 1, r = (2)";
    ex.plant = paper_sec5_plant(0.0);
    ex.controller = uniform_controller(ex.plant, default_phi(), 2.0,
                                       {smooth_cos(1.0, 2.0), smooth_sin(1.0, 1.0)});
    return ex;
}

// Hand-converted normal-form instance with q = 1, r = (2), m = p = 2:
//   eta'  = -eta + y1
//   y1''  = -y1 - y1' + 0.5 y2 + eta + u1
//   0     = 0.3 y1 + 0.2 y1' + y2 + 0.5 eta + 0.5 u1 + u2
//   x3    = y1'                     (N = 0, E32 = [1 0], nu = 1)
NonlinearExample make_normalform_demo() {
    NonlinearExample ex;
    ex.name = "linear-normalform-demo";
    ex.description = "linear system in normal form with stable internal dynamics";

    NonlinearFunctionalDae plant;
    plant.m = 2;
    plant.q = 1;
    plant.r = {2};
    plant.alpha = 1.0;
    plant.f2_jac_sup = 1.0; // ||S2||

    Eigen::MatrixXd Q(1, 1), A12(1, 2);
    Q << -1.0;
    A12 << 1.0, 0.0;
    Eigen::RowVector2d R11(-1.0, -1.0);
    Eigen::RowVector2d R12(0.3, 0.2);
    const double S1 = 0.5, S2 = 1.0, P1 = 1.0, P2 = 0.5;
    const double Gamma11 = 1.0, Gamma21 = 0.5;

    RealizedOperator internal = make_lti_filter(Q, A12, Eigen::VectorXd::Zero(1)).op;
    plant.T2 = internal;

    Eigen::MatrixXd select(2, 3);
    select << 1, 0, 0, 0, 0, 1;
    Eigen::MatrixXd direct(1, 3);
    direct << R11(0), R11(1), S1;
    Eigen::MatrixXd out_map(1, 1);
    out_map << P1;
    plant.T1 = affine_combine({internal}, {select}, direct, {out_map}, Eigen::VectorXd::Zero(1));

    plant.f1 = [](const Eigen::VectorXd&, const Eigen::VectorXd& eta) { return eta; };
    plant.gamma_I = [Gamma11](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return (Eigen::MatrixXd(1, 1) << Gamma11).finished();
    };
    plant.f2 = [R12, S2](const Eigen::VectorXd& xi, const Eigen::VectorXd& xii) {
        Eigen::VectorXd v(1);
        v(0) = R12 * xi.head<2>() + S2 * xii(0);
        return v;
    };
    plant.f2_jac_XI = [R12](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd(R12);
    };
    plant.f2_jac_XII = [S2](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return (Eigen::MatrixXd(1, 1) << S2).finished();
    };
    plant.f3 = [P2](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        return (P2 * eta).eval();
    };
    plant.gamma_II = [Gamma21](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return (Eigen::MatrixXd(1, 1) << Gamma21).finished();
    };
    plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1.0; };
    plant.history = {smooth_zero(), smooth_zero()};

    ex.plant = std::move(plant);
    // Reference with vanishing value and first derivative in channel 1 at
    // t = 0, so the all-zero history is consistent.
    SmoothSignal yref1 = smooth_constant(1.0) + SmoothSignal{[](double t, int order) {
        return -cos(Jet::variable(t, order));
    }};
    ex.controller = uniform_controller(ex.plant, default_phi(), 2.0,
                                       {yref1, smooth_sin(1.0, 1.0)});

    // x3 = sum N^i E32 y^(i+1) collapses to y1' here.
    ex.x3_from_sample = [](const TrajectorySample& s) {
        Eigen::VectorXd x3(1);
        x3(0) = s.X_I(1);
        return x3;
    };
    return ex;
}

NonlinearExample make_trivial_integrator() {
    NonlinearExample ex;
    ex.name = "trivial-integrator";
    ex.description = "y' = u with q = m = 1 (no algebraic part)";

    NonlinearFunctionalDae plant;
    plant.m = 1;
    plant.q = 1;
    plant.r = {1};
    plant.f2_jac_sup = 0.0;
    plant.f1 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(1).eval();
    };
    plant.gamma_I = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(1, 1).eval();
    };
    plant.T1 = identity_operator(1);
    plant.history = {smooth_zero()};

    ex.plant = std::move(plant);
    ex.controller = uniform_controller(ex.plant, default_phi(), 1.0, {smooth_zero()});
    return ex;
}

} // namespace

std::vector<std::string> linear_example_names() {
    return {"tvrd-nonexist", "exlin", "feedback-minus-s"};
}

std::vector<std::string> nonlinear_example_names() {
    return {"paper-sec5", "linear-normalform-demo", "trivial-integrator"};
}

bool is_linear_example(const std::string& name) {
    for (const auto& n : linear_example_names())
        if (n == name)
            return true;
    return false;
}

bool is_nonlinear_example(const std::string& name) {
    for (const auto& n : nonlinear_example_names())
        if (n == name)
            return true;
    return false;
}

LinearExample linear_example(const std::string& name) {
    if (name == "exlin")
        return {"exlin", "5x5 regular DAE with truncated vector relative degree (3,0)",
                exlin_system()};
    if (name == "tvrd-nonexist")
        return {"tvrd-nonexist", "4x4 DAE without a truncated vector relative degree",
                tvrd_nonexist_system()};
    if (name == "feedback-minus-s")
        return {"feedback-minus-s", "2x2 system with transfer function -s", feedback_minus_s_system()};
    throw ParseError("unknown linear example '" + name + "'");
}

NonlinearExample nonlinear_example(const std::string& name) {
    if (name == "paper-sec5")
        return make_paper_sec5();
    if (name == "linear-normalform-demo")
        return make_normalform_demo();
    if (name == "trivial-integrator")
        return make_trivial_integrator();
    throw ParseError("unknown nonlinear example '" + name + "'");
}

} // namespace daefc
