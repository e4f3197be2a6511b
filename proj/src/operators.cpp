#include "daefc/operators.hpp"

#include "daefc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace daefc {

LtiFilterResult make_lti_filter(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& Bin,
                                const Eigen::VectorXd& eta0) {
    if (Q.rows() != Q.cols())
        throw PreconditionError("filter matrix Q must be square");
    if (Bin.rows() != Q.rows() || eta0.size() != Q.rows())
        throw PreconditionError("filter dimensions are inconsistent");

    LtiFilterResult res;
    res.op.state_dim = static_cast<int>(Q.rows());
    res.op.input_dim = static_cast<int>(Bin.cols());
    res.op.output_dim = res.op.state_dim;
    res.op.initial_state = eta0;
    res.op.output_state_only = true;
    res.op.state_rate = [Q, Bin](const Eigen::VectorXd& state, const Eigen::VectorXd& input,
                                 double) { return (Q * state + Bin * input).eval(); };
    res.op.output = [](const Eigen::VectorXd& state, const Eigen::VectorXd&, double) {
        return state;
    };

    Eigen::VectorXcd eig = Q.eigenvalues();
    for (int i = 0; i < eig.size(); ++i)
        if (eig(i).real() >= 0.0)
            res.hurwitz = false;
    return res;
}

RealizedOperator affine_combine(const std::vector<RealizedOperator>& bases,
                                const std::vector<Eigen::MatrixXd>& input_maps,
                                const Eigen::MatrixXd& direct,
                                const std::vector<Eigen::MatrixXd>& output_maps,
                                const Eigen::VectorXd& offset) {
    if (bases.size() != input_maps.size() || bases.size() != output_maps.size())
        throw PreconditionError("affine_combine needs one input and output map per base operator");
    const int in_dim = static_cast<int>(direct.cols());
    const int out_dim = static_cast<int>(direct.rows());
    if (offset.size() != out_dim)
        throw PreconditionError("offset dimension mismatch");

    int total_state = 0;
    for (size_t i = 0; i < bases.size(); ++i) {
        if (input_maps[i].cols() != in_dim || input_maps[i].rows() != bases[i].input_dim)
            throw PreconditionError("input selection map dimension mismatch");
        if (output_maps[i].rows() != out_dim || output_maps[i].cols() != bases[i].output_dim)
            throw PreconditionError("output map dimension mismatch");
        total_state += bases[i].state_dim;
    }

    RealizedOperator op;
    op.state_dim = total_state;
    op.input_dim = in_dim;
    op.output_dim = out_dim;
    op.initial_state = Eigen::VectorXd::Zero(total_state);
    {
        int at = 0;
        for (const auto& b : bases) {
            op.initial_state.segment(at, b.state_dim) = b.initial_state;
            at += b.state_dim;
        }
    }
    op.output_state_only = direct.isZero(0.0);
    for (const auto& b : bases)
        op.output_state_only = op.output_state_only && b.output_state_only;

    op.state_rate = [bases, input_maps](const Eigen::VectorXd& state, const Eigen::VectorXd& input,
                                        double t) {
        Eigen::VectorXd rate(state.size());
        int at = 0;
        for (size_t i = 0; i < bases.size(); ++i) {
            const int k = bases[i].state_dim;
            rate.segment(at, k) =
                bases[i].state_rate(state.segment(at, k), input_maps[i] * input, t);
            at += k;
        }
        return rate;
    };
    op.output = [bases, input_maps, direct, output_maps, offset](const Eigen::VectorXd& state,
                                                                 const Eigen::VectorXd& input,
                                                                 double t) {
        Eigen::VectorXd out = direct * input + offset;
        int at = 0;
        for (size_t i = 0; i < bases.size(); ++i) {
            const int k = bases[i].state_dim;
            out += output_maps[i] * bases[i].output(state.segment(at, k), input_maps[i] * input, t);
            at += k;
        }
        return out;
    };
    return op;
}

RealizedOperator identity_operator(int dim) {
    RealizedOperator op;
    op.input_dim = dim;
    op.output_dim = dim;
    op.initial_state = Eigen::VectorXd::Zero(0);
    op.state_rate = [](const Eigen::VectorXd& s, const Eigen::VectorXd&, double) { return s; };
    op.output = [](const Eigen::VectorXd&, const Eigen::VectorXd& input, double) { return input; };
    return op;
}

std::vector<Eigen::VectorXd> run_operator(const RealizedOperator& op,
                                          const std::function<Eigen::VectorXd(double)>& input,
                                          double t_end, int steps) {
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(steps + 1);
    Eigen::VectorXd state = op.initial_state;
    const double h = t_end / steps;
    outputs.push_back(op.output(state, input(0.0), 0.0));
    for (int n = 0; n < steps; ++n) {
        const double t = n * h;
        Eigen::VectorXd k1 = op.state_rate(state, input(t), t);
        Eigen::VectorXd k2 = op.state_rate(state + 0.5 * h * k1, input(t + 0.5 * h), t + 0.5 * h);
        Eigen::VectorXd k3 = op.state_rate(state + 0.5 * h * k2, input(t + 0.5 * h), t + 0.5 * h);
        Eigen::VectorXd k4 = op.state_rate(state + h * k3, input(t + h), t + h);
        state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        outputs.push_back(op.output(state, input(t + h), t + h));
    }
    return outputs;
}

namespace {

// Random bounded trigonometric test input.
std::function<Eigen::VectorXd(double)> random_input(int dim, std::mt19937& rng, double amp) {
    std::uniform_real_distribution<double> coeff(-amp, amp);
    std::uniform_real_distribution<double> freq(0.2, 3.0);
    Eigen::MatrixXd a(dim, 3), w(dim, 3), ph(dim, 3);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < 3; ++j) {
            a(i, j) = coeff(rng);
            w(i, j) = freq(rng);
            ph(i, j) = coeff(rng);
        }
    return [=](double t) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < 3; ++j)
                v(i) += a(i, j) * std::sin(w(i, j) * t + ph(i, j));
        return v;
    };
}

} // namespace

HarnessReport property_harness(const RealizedOperator& op, int trials, unsigned seed,
                               double horizon, double bound_cap) {
    HarnessReport rep;
    std::mt19937 rng(seed);
    const int steps = 2000;
    const double h = horizon / steps;

    for (int trial = 0; trial < trials; ++trial) {
        auto zeta = random_input(op.input_dim, rng, 1.0);
        auto eta = random_input(op.input_dim, rng, 1.0);
        const double t_split = horizon / 2.0;
        // xi agrees with zeta up to t_split, then diverges continuously
        auto xi = [&, t_split](double t) -> Eigen::VectorXd {
            if (t <= t_split)
                return zeta(t);
            const double ramp = t - t_split;
            return zeta(t) + ramp * eta(t);
        };

        auto out_a = run_operator(op, zeta, horizon, steps);
        auto out_b = run_operator(op, xi, horizon, steps);

        for (int n = 0; n <= steps; ++n) {
            const double t = n * h;
            double norm = out_a[n].norm();
            rep.observed_output_bound = std::max(rep.observed_output_bound, norm);
            if (norm > bound_cap && rep.bounded_ok) {
                rep.bounded_ok = false;
                rep.issues.push_back({"output exceeded bound cap", t, norm});
            }
            if (t <= t_split) {
                double diff = (out_a[n] - out_b[n]).norm();
                if (diff > 1e-7 * (1.0 + norm) && rep.causality_ok) {
                    rep.causality_ok = false;
                    rep.issues.push_back({"outputs diverge before the inputs do", t, diff});
                }
            }
        }

        // Lipschitz estimate: small perturbation of the whole input.
        const double eps = 1e-4;
        auto pert = [&](double t) { return (zeta(t) + eps * eta(t)).eval(); };
        auto out_c = run_operator(op, pert, horizon, steps);
        double max_delta_out = 0.0, max_delta_in = 0.0;
        for (int n = 0; n <= steps; ++n) {
            max_delta_out = std::max(max_delta_out, (out_c[n] - out_a[n]).norm());
            max_delta_in = std::max(max_delta_in, eps * eta(n * h).norm());
        }
        if (max_delta_in > 0.0) {
            double ratio = max_delta_out / max_delta_in;
            rep.lipschitz_estimate = std::max(rep.lipschitz_estimate, ratio);
            if (ratio > 1e8 && rep.lipschitz_ok) {
                rep.lipschitz_ok = false;
                rep.issues.push_back({"Lipschitz ratio blew up", horizon, ratio});
            }
        }
    }
    return rep;
}

} // namespace daefc
