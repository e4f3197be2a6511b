#include "daefc/cascade.hpp"

#include "daefc/errors.hpp"

namespace daefc {

CascadeResult error_cascade(const CascadeInput& in) {
    const int q = static_cast<int>(in.r.size());
    if (static_cast<int>(in.y_jets.size()) != q || static_cast<int>(in.yref_jets.size()) != q)
        throw PreconditionError("cascade needs one output and one reference jet per channel");

    CascadeResult out;
    out.t = in.t;
    out.e.resize(q);
    out.k.resize(q);
    out.e_I = Eigen::VectorXd::Zero(q);

    for (int i = 0; i < q; ++i) {
        const int ri = in.r[i];
        if (ri < 1)
            throw PreconditionError("relative degree entries must be positive");
        if (in.y_jets[i].order() < ri - 1 || in.yref_jets[i].order() < ri - 1)
            throw PreconditionError("jet order below r_i - 1 in cascade input");

        Jet e = (in.y_jets[i] - in.yref_jets[i]).truncated(ri - 1);
        out.e[i].push_back(e.value());
        for (int j = 0; j <= ri - 2; ++j) {
            if (static_cast<int>(in.phi_jets.size()) <= i ||
                static_cast<int>(in.phi_jets[i].size()) <= j)
                throw PreconditionError("missing funnel jet for cascade level");
            Jet phi = in.phi_jets[i][j].truncated(e.order());
            if (phi.order() < e.order())
                throw PreconditionError("funnel jet order below r_i - 1 - j");
            Jet w = 1.0 - phi * phi * e * e;
            if (w.value() <= 0.0)
                throw FunnelViolation(i, j, in.t);
            Jet gain = recip(w);
            out.k[i].push_back(gain.value());
            e = e.shift_derivative() + gain * e;
            out.e[i].push_back(e.value());
        }
        out.e_I(i) = e.value();
    }

    out.e_II = in.e_II;
    const double wI = 1.0 - in.phi_I * in.phi_I * out.e_I.squaredNorm();
    if (wI <= 0.0)
        throw FunnelViolation(-1, FunnelViolation::kLevelI, in.t);
    out.k_I = 1.0 / wI;
    const double wII = 1.0 - in.phi_II * in.phi_II * out.e_II.squaredNorm();
    if (wII <= 0.0)
        throw FunnelViolation(-1, FunnelViolation::kLevelII, in.t);
    out.k_II = in.khat / wII;

    out.u = Eigen::VectorXd::Zero(q + out.e_II.size());
    out.u.head(q) = -out.k_I * out.e_I;
    out.u.tail(out.e_II.size()) = -out.k_II * out.e_II;
    return out;
}

bool check_gain_condition(double khat, double alpha, double f2_jac_sup) {
    if (alpha <= 0.0)
        throw PreconditionError("alpha must be positive");
    if (f2_jac_sup < 0.0)
        throw PreconditionError("Jacobian bound must be nonnegative");
    return khat > f2_jac_sup / alpha;
}

InitialFunnelCheck check_initial_funnel(const CascadeResult& at_zero,
                                        const std::vector<std::vector<double>>& phi_ij_at_zero,
                                        double phi_I_at_zero, double phi_II_at_zero) {
    InitialFunnelCheck chk;
    for (size_t i = 0; i < at_zero.k.size(); ++i) {
        for (size_t j = 0; j < at_zero.k[i].size(); ++j) {
            double prod = phi_ij_at_zero[i][j] * std::abs(at_zero.e[i][j]);
            if (prod >= 1.0)
                return {false, static_cast<int>(i), static_cast<int>(j), prod};
        }
    }
    double lhs = phi_I_at_zero * at_zero.e_I.norm();
    if (lhs >= 1.0)
        return {false, -1, FunnelViolation::kLevelI, lhs};
    lhs = phi_II_at_zero * at_zero.e_II.norm();
    if (lhs >= 1.0)
        return {false, -1, FunnelViolation::kLevelII, lhs};
    return chk;
}

} // namespace daefc
