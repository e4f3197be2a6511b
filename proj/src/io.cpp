#include "daefc/io.hpp"

#include "daefc/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace daefc {

namespace {

Rat rational_from_json(const Json& j, const std::string& where) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rat(j.get<long>());
    if (j.is_number_float())
        throw ParseError(where + ": rational entries must be \"p/q\" strings or integers, not floats");
    throw ParseError(where + ": expected a rational entry");
}

QMat qmat_from_json_impl(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ParseError(where + ": expected an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    QMat out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw ParseError(where + ": row " + std::to_string(i + 1) + " has " +
                             std::to_string(j[i].size()) + " entries, expected " +
                             std::to_string(cols));
        for (int c = 0; c < cols; ++c)
            out(i, c) = rational_from_json(j[i][c], where + "[" + std::to_string(i + 1) + "][" +
                                                        std::to_string(c + 1) + "]");
    }
    return out;
}

Eigen::MatrixXd float_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ParseError(where + ": expected an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw ParseError(where + ": ragged rows");
        for (int c = 0; c < cols; ++c) {
            if (!j[i][c].is_number())
                throw ParseError(where + ": expected a number");
            out(i, c) = j[i][c].get<double>();
        }
    }
    return out;
}

SmoothSignal signal_from_json(const Json& j, const std::string& where) {
    if (j.is_null())
        return smooth_zero();
    if (!j.is_object() || !j.contains("type"))
        throw ParseError(where + ": signal needs a \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto num = [&](const char* key, double dflt) {
        return j.contains(key) ? j[key].get<double>() : dflt;
    };
    if (type == "zero")
        return smooth_zero();
    if (type == "constant")
        return smooth_constant(num("value", 0.0));
    if (type == "sin")
        return smooth_sin(num("amp", 1.0), num("freq", 1.0), num("phase", 0.0));
    if (type == "cos")
        return smooth_cos(num("amp", 1.0), num("freq", 1.0), num("phase", 0.0));
    if (type == "poly") {
        if (!j.contains("coeffs"))
            throw ParseError(where + ": poly signal needs \"coeffs\"");
        return smooth_poly(j["coeffs"].get<std::vector<double>>());
    }
    if (type == "sum") {
        if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
            throw ParseError(where + ": sum signal needs \"terms\"");
        SmoothSignal acc = signal_from_json(j["terms"][0], where);
        for (size_t i = 1; i < j["terms"].size(); ++i)
            acc = acc + signal_from_json(j["terms"][i], where);
        return acc;
    }
    throw ParseError(where + ": unknown signal type '" + type + "'");
}

FunnelFunction funnel_from_json(const Json& j) {
    if (j.is_null())
        return default_phi();
    if (j.contains("name")) {
        const std::string name = j["name"].get<std::string>();
        if (name == "paper-sec5" || name == "default")
            return default_phi();
        throw ParseError("unknown funnel name '" + name + "'");
    }
    if (j.contains("poly")) {
        double a = j.contains("atan_coeff") ? j["atan_coeff"].get<double>() : 0.0;
        double b = j.contains("atan_rate") ? j["atan_rate"].get<double>() : 1.0;
        return poly_atan_phi(j["poly"].get<std::vector<double>>(), a, b);
    }
    throw ParseError("funnel spec needs \"name\" or \"poly\"");
}

// One polynomial term c * prod X_I^e_I * prod X_II^e_II (or in eta).
struct Monomial {
    double c = 0.0;
    std::vector<int> xi;  // exponents over X_I (or eta)
    std::vector<int> xii; // exponents over X_II
};

std::vector<std::vector<Monomial>> monomials_from_json(const Json& j, const std::string& where) {
    std::vector<std::vector<Monomial>> rows;
    if (!j.is_array())
        throw ParseError(where + ": expected an array of rows of monomials");
    for (const auto& row : j) {
        std::vector<Monomial> out_row;
        for (const auto& m : row) {
            Monomial mono;
            mono.c = m.at("c").get<double>();
            if (m.contains("xi"))
                mono.xi = m["xi"].get<std::vector<int>>();
            if (m.contains("xii"))
                mono.xii = m["xii"].get<std::vector<int>>();
            out_row.push_back(std::move(mono));
        }
        rows.push_back(std::move(out_row));
    }
    return rows;
}

double eval_monomial(const Monomial& m, const Eigen::VectorXd& xi, const Eigen::VectorXd& xii) {
    double v = m.c;
    for (size_t i = 0; i < m.xi.size(); ++i)
        v *= std::pow(xi(static_cast<int>(i)), m.xi[i]);
    for (size_t i = 0; i < m.xii.size(); ++i)
        v *= std::pow(xii(static_cast<int>(i)), m.xii[i]);
    return v;
}

double eval_monomial_dxii(const Monomial& m, const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& xii, int wrt) {
    if (wrt >= static_cast<int>(m.xii.size()) || m.xii[wrt] == 0)
        return 0.0;
    double v = m.c * m.xii[wrt];
    for (size_t i = 0; i < m.xi.size(); ++i)
        v *= std::pow(xi(static_cast<int>(i)), m.xi[i]);
    for (size_t i = 0; i < m.xii.size(); ++i) {
        int e = m.xii[i] - (static_cast<int>(i) == wrt ? 1 : 0);
        v *= std::pow(xii(static_cast<int>(i)), e);
    }
    return v;
}

// Normal-form plant from float matrices: the linear class embedding with
// optional polynomial extras on f1 (in eta) and f2 (in X_I, X_II).
NonlinearExample plant_from_template(const Json& tpl, const Json& root) {
    NonlinearExample ex;
    ex.name = tpl.contains("label") ? tpl["label"].get<std::string>() : "normal-form";
    if (tpl.at("type").get<std::string>() != "normal-form")
        throw ParseError("unknown plant template type");

    NonlinearFunctionalDae plant;
    plant.r = tpl.at("r").get<std::vector<int>>();
    plant.q = static_cast<int>(plant.r.size());
    plant.m = tpl.at("m").get<int>();
    if (plant.m < plant.q)
        throw ParseError("template: m must be at least q");
    const int rbar = [&] {
        int s = 0;
        for (int ri : plant.r)
            s += ri;
        return s;
    }();
    const int na = plant.m - plant.q;

    Eigen::MatrixXd Q = float_matrix(tpl.at("Q"), "Q");
    Eigen::MatrixXd A12 = float_matrix(tpl.at("A12"), "A12");
    if (A12.rows() != Q.rows() || A12.cols() != plant.m)
        throw ParseError("template: A12 must be n1 x m");
    Eigen::VectorXd eta0 = Eigen::VectorXd::Zero(Q.rows());
    if (tpl.contains("eta0")) {
        auto v = tpl["eta0"].get<std::vector<double>>();
        if (static_cast<int>(v.size()) != Q.rows())
            throw ParseError("template: eta0 length must match Q");
        for (int i = 0; i < Q.rows(); ++i)
            eta0(i) = v[i];
    }

    Eigen::MatrixXd R1 = Eigen::MatrixXd::Zero(plant.q, rbar);
    Eigen::MatrixXd R2 = Eigen::MatrixXd::Zero(na, rbar);
    if (tpl.contains("R1"))
        R1 = float_matrix(tpl["R1"], "R1");
    if (tpl.contains("R2"))
        R2 = float_matrix(tpl["R2"], "R2");
    if (R1.rows() != plant.q || R1.cols() != rbar || R2.rows() != na || R2.cols() != rbar)
        throw ParseError("template: R1 must be q x rbar and R2 (m-q) x rbar");
    Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(plant.q, na);
    Eigen::MatrixXd S2 = Eigen::MatrixXd::Zero(na, na);
    if (tpl.contains("S1"))
        S1 = float_matrix(tpl["S1"], "S1");
    if (tpl.contains("S2"))
        S2 = float_matrix(tpl["S2"], "S2");
    Eigen::MatrixXd P1 = Eigen::MatrixXd::Zero(plant.q, Q.rows());
    Eigen::MatrixXd P2 = Eigen::MatrixXd::Zero(na, Q.rows());
    if (tpl.contains("P1"))
        P1 = float_matrix(tpl["P1"], "P1");
    if (tpl.contains("P2"))
        P2 = float_matrix(tpl["P2"], "P2");
    Eigen::MatrixXd G11 = Eigen::MatrixXd::Identity(plant.q, plant.q);
    Eigen::MatrixXd G21 = Eigen::MatrixXd::Zero(na, plant.q);
    if (tpl.contains("Gamma11"))
        G11 = float_matrix(tpl["Gamma11"], "Gamma11");
    if (tpl.contains("Gamma21"))
        G21 = float_matrix(tpl["Gamma21"], "Gamma21");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G11 + G11.transpose());
        if (plant.q > 0 && es.eigenvalues().minCoeff() <= 0.0)
            throw ParseError("template: Gamma11 + Gamma11^T must be positive definite");
    }

    auto f1_extra = tpl.contains("f1_poly")
                        ? monomials_from_json(tpl["f1_poly"], "f1_poly")
                        : std::vector<std::vector<Monomial>>{};
    auto f2_extra = tpl.contains("f2_poly")
                        ? monomials_from_json(tpl["f2_poly"], "f2_poly")
                        : std::vector<std::vector<Monomial>>{};
    if (!f1_extra.empty() && static_cast<int>(f1_extra.size()) != plant.q)
        throw ParseError("template: f1_poly needs one row per differential channel");
    if (!f2_extra.empty() && static_cast<int>(f2_extra.size()) != na)
        throw ParseError("template: f2_poly needs one row per algebraic channel");
    for (const auto& row : f1_extra)
        for (const auto& m : row)
            if (static_cast<int>(m.xi.size()) > plant.q || !m.xii.empty())
                throw ParseError("template: f1_poly exponents must index eta only");
    for (const auto& row : f2_extra)
        for (const auto& m : row)
            if (static_cast<int>(m.xi.size()) > rbar || static_cast<int>(m.xii.size()) > na)
                throw ParseError("template: f2_poly exponent list too long");

    bool f2_extra_touches_xii = false;
    for (const auto& row : f2_extra)
        for (const auto& m : row)
            for (int e : m.xii)
                if (e != 0)
                    f2_extra_touches_xii = true;

    plant.alpha = 1.0;
    if (tpl.contains("f2_jac_sup"))
        plant.f2_jac_sup = tpl["f2_jac_sup"].get<double>();
    else if (!f2_extra_touches_xii)
        plant.f2_jac_sup = S2.norm();
    else
        throw ParseError("template: declare f2_jac_sup when f2_poly depends on X_II");

    RealizedOperator internal = make_lti_filter(Q, A12, eta0).op;
    plant.T2 = internal;

    Eigen::MatrixXd select = Eigen::MatrixXd::Zero(plant.m, rbar + na);
    {
        int at = 0;
        for (int i = 0; i < plant.q; ++i) {
            select(i, at) = 1.0;
            at += plant.r[i];
        }
        for (int i = 0; i < na; ++i)
            select(plant.q + i, rbar + i) = 1.0;
    }
    Eigen::MatrixXd direct(plant.q, rbar + na);
    direct.leftCols(rbar) = R1;
    if (na > 0)
        direct.rightCols(na) = S1;
    plant.T1 = affine_combine({internal}, {select}, direct, {P1}, Eigen::VectorXd::Zero(plant.q));

    plant.f1 = [f1_extra](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        Eigen::VectorXd v = eta;
        for (size_t i = 0; i < f1_extra.size(); ++i)
            for (const auto& mono : f1_extra[i])
                v(static_cast<int>(i)) += eval_monomial(mono, eta, Eigen::VectorXd::Zero(0));
        return v;
    };
    plant.gamma_I = [G11](const Eigen::VectorXd&, const Eigen::VectorXd&) { return G11; };
    plant.f2 = [R2, S2, f2_extra](const Eigen::VectorXd& xi, const Eigen::VectorXd& xii) {
        Eigen::VectorXd v = R2 * xi + S2 * xii;
        for (size_t i = 0; i < f2_extra.size(); ++i)
            for (const auto& mono : f2_extra[i])
                v(static_cast<int>(i)) += eval_monomial(mono, xi, xii);
        return v;
    };
    plant.f2_jac_XI = [R2](const Eigen::VectorXd&, const Eigen::VectorXd&) { return R2; };
    plant.f2_jac_XII = [S2, f2_extra, na](const Eigen::VectorXd& xi, const Eigen::VectorXd& xii) {
        Eigen::MatrixXd jac = S2;
        for (size_t i = 0; i < f2_extra.size(); ++i)
            for (const auto& mono : f2_extra[i])
                for (int cc = 0; cc < na; ++cc)
                    jac(static_cast<int>(i), cc) += eval_monomial_dxii(mono, xi, xii, cc);
        return jac;
    };
    plant.f3 = [P2](const Eigen::VectorXd&, const Eigen::VectorXd& eta) {
        return (P2 * eta).eval();
    };
    plant.gamma_II = [G21](const Eigen::VectorXd&, const Eigen::VectorXd&) { return G21; };
    plant.f4 = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1.0; };

    plant.history.assign(plant.m, smooth_zero());
    if (root.contains("history")) {
        const auto& h = root["history"];
        if (static_cast<int>(h.size()) != plant.m)
            throw ParseError("history needs one channel per output");
        for (int i = 0; i < plant.m; ++i)
            plant.history[i] = signal_from_json(h[i], "history");
    }

    ex.plant = std::move(plant);
    return ex;
}

} // namespace

LinearDae parse_linear_system(const Json& j) {
    LinearDae sys;
    for (const char* key : {"E", "A", "B", "C"})
        if (!j.contains(key))
            throw ParseError(std::string("linear system needs matrix \"") + key + "\"");
    sys.E = qmat_from_json_impl(j["E"], "E");
    sys.A = qmat_from_json_impl(j["A"], "A");
    sys.B = qmat_from_json_impl(j["B"], "B");
    sys.C = qmat_from_json_impl(j["C"], "C");
    try {
        sys.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("inconsistent system dimensions: ") + e.what());
    }
    return sys;
}

NonlinearExample parse_nonlinear_system(const Json& j) {
    NonlinearExample ex;
    if (j.contains("name")) {
        ex = nonlinear_example(j["name"].get<std::string>());
    } else if (j.contains("template")) {
        ex = plant_from_template(j["template"], j);
    } else {
        throw ParseError("nonlinear system needs a registry \"name\" or a \"template\"");
    }

    FunnelFunction phi = j.contains("funnel") ? funnel_from_json(j["funnel"]) : default_phi();
    double khat = j.contains("khat") ? j["khat"].get<double>()
                                     : (ex.controller.yref.empty() ? 2.0 : ex.controller.khat);

    std::vector<SmoothSignal> yref = ex.controller.yref;
    if (j.contains("yref")) {
        const auto& yr = j["yref"];
        if (static_cast<int>(yr.size()) != ex.plant.m)
            throw ParseError("yref needs one channel per output");
        yref.clear();
        for (const auto& ch : yr)
            yref.push_back(signal_from_json(ch, "yref"));
    }
    if (yref.empty())
        throw ParseError("nonlinear system needs reference signals");

    if (j.contains("funnel") || j.contains("khat") || j.contains("yref") ||
        ex.controller.yref.empty())
        ex.controller = uniform_controller(ex.plant, phi, khat, std::move(yref));
    return ex;
}

SystemFile parse_system_file(const Json& j) {
    SystemFile out;
    if (!j.contains("kind"))
        throw ParseError("system file needs \"kind\": \"linear\" or \"nonlinear\"");
    out.kind = j["kind"].get<std::string>();
    if (out.kind == "linear")
        out.linear = parse_linear_system(j);
    else if (out.kind == "nonlinear")
        out.nonlinear = parse_nonlinear_system(j);
    else
        throw ParseError("unknown system kind '" + out.kind + "'");
    return out;
}

SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_system_file(j);
}

Json to_json(const QMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

QMat qmat_from_json(const Json& j) {
    return qmat_from_json_impl(j, "matrix");
}

namespace {

Json poly_to_json(const Poly& p) {
    Json arr = Json::array();
    for (const auto& c : p.coeffs())
        arr.push_back(to_string(c));
    return arr;
}

Poly poly_from_json(const Json& j) {
    std::vector<Rat> coeffs;
    for (const auto& c : j)
        coeffs.push_back(rational_from_json(c, "polynomial coefficient"));
    return Poly(std::move(coeffs));
}

} // namespace

Json to_json(const RatFun& f) {
    return Json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

RatFun ratfun_from_json(const Json& j) {
    return RatFun(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

Json to_json(const RatMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

RatMat ratmat_from_json(const Json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
    RatMat out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c)
            out(i, c) = ratfun_from_json(j[i][c]);
    return out;
}

Json to_json(const AnalysisReport& rep) {
    Json j;
    j["regular"] = rep.regular;
    j["zd_autonomous"] = rep.zd_autonomous;
    j["right_invertible"] = rep.right_invertible;
    j["right_invertible_criterion"] = "rank-surrogate";
    if (rep.zd_asymptotically_stable.has_value())
        j["zd_asymptotically_stable"] = *rep.zd_asymptotically_stable;
    else
        j["zd_asymptotically_stable"] = "unknown";
    j["stability_note"] = rep.stability_note;
    Json zeros = Json::array();
    for (const auto& z : rep.invariant_zeros)
        zeros.push_back(Json{{"re", z.value.real()}, {"im", z.value.imag()}, {"radius", z.radius}});
    j["invariant_zeros"] = std::move(zeros);
    return j;
}

AnalysisReport analysis_report_from_json(const Json& j) {
    AnalysisReport rep;
    rep.regular = j.at("regular").get<bool>();
    rep.zd_autonomous = j.at("zd_autonomous").get<bool>();
    rep.right_invertible = j.at("right_invertible").get<bool>();
    if (j.at("zd_asymptotically_stable").is_boolean())
        rep.zd_asymptotically_stable = j["zd_asymptotically_stable"].get<bool>();
    rep.stability_note = j.at("stability_note").get<std::string>();
    for (const auto& z : j.at("invariant_zeros"))
        rep.invariant_zeros.push_back(
            {{z.at("re").get<double>(), z.at("im").get<double>()}, z.at("radius").get<double>()});
    return rep;
}

namespace {

Json qmat_float_json(const QMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(to_double(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json ratmat_display_json(const RatMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Json to_json(const TvrdReport& rep) {
    Json j;
    j["exists"] = rep.exists;
    j["r"] = rep.r;
    j["q"] = rep.q;
    j["gamma_hat"] = to_json(rep.gamma_hat);
    j["gamma_hat_float"] = qmat_float_json(rep.gamma_hat);
    j["gamma_hat_q"] = to_json(rep.gamma_hat_q);
    j["H"] = to_json(rep.H);
    j["H_display"] = ratmat_display_json(rep.H);
    return j;
}

TvrdReport tvrd_report_from_json(const Json& j) {
    TvrdReport rep;
    rep.exists = j.at("exists").get<bool>();
    rep.r = j.at("r").get<std::vector<int>>();
    rep.q = j.at("q").get<int>();
    rep.gamma_hat = qmat_from_json(j.at("gamma_hat"));
    rep.gamma_hat_q = j.at("gamma_hat_q").empty() && rep.q == 0
                          ? QMat(rep.gamma_hat.rows(), 0)
                          : qmat_from_json(j.at("gamma_hat_q"));
    rep.H = ratmat_from_json(j.at("H"));
    return rep;
}

Json to_json(const VrdReport& rep) {
    Json j;
    j["exists"] = rep.exists;
    j["r"] = rep.r;
    j["strict"] = rep.strict;
    j["gamma"] = to_json(rep.gamma);
    j["gamma_float"] = qmat_float_json(rep.gamma);
    return j;
}

VrdReport vrd_report_from_json(const Json& j) {
    VrdReport rep;
    rep.exists = j.at("exists").get<bool>();
    rep.r = j.at("r").get<std::vector<int>>();
    rep.strict = j.at("strict").get<bool>();
    rep.gamma = qmat_from_json(j.at("gamma"));
    return rep;
}

Json analyze_to_json(const LinearDae& sys) {
    Json j;
    j["analysis"] = to_json(analyze(sys));

    if (zero_dynamics_autonomous(sys) && is_right_invertible(sys)) {
        TvrdReport tv = truncated_vrd(sys);
        j["tvrd"] = to_json(tv);
        if (tv.exists) {
            GammaDecomposition gd = gamma_decomposition(tv.gamma_hat, tv.r);
            j["gamma_decomposition"] =
                Json{{"gamma", to_json(gd.gamma)}, {"input_reordering", gd.input_reordering}};
        }
    } else {
        j["tvrd"] = Json{{"error", "preconditions not met (autonomy/right-invertibility)"}};
    }

    if (is_regular(sys)) {
        j["vrd"] = to_json(vector_rd(sys));
        j["transfer_function"] = ratmat_display_json(transfer_function(sys));
    } else {
        j["vrd"] = Json{{"error", "system is not regular"}};
    }
    return j;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> csv_header(const Trajectory& traj) {
    std::vector<std::string> cols;
    cols.push_back("t");
    for (int i = 0; i < traj.m; ++i)
        cols.push_back("y" + std::to_string(i + 1));
    for (int i = 0; i < traj.q; ++i)
        for (int d = 1; d < traj.r[i]; ++d)
            cols.push_back("y" + std::to_string(i + 1) + "_d" + std::to_string(d));
    for (int i = 0; i < traj.m; ++i)
        cols.push_back("u" + std::to_string(i + 1));
    for (int i = 0; i < traj.q; ++i)
        for (int d = 0; d < traj.r[i]; ++d)
            cols.push_back("e" + std::to_string(i + 1) + "_" + std::to_string(d));
    for (int i = traj.q; i < traj.m; ++i)
        cols.push_back("eII_" + std::to_string(i + 1));
    for (int i = 0; i < traj.q; ++i)
        for (int d = 0; d + 1 < traj.r[i]; ++d)
            cols.push_back("k" + std::to_string(i + 1) + "_" + std::to_string(d));
    cols.push_back("k_I");
    cols.push_back("k_II");
    cols.push_back("residual");
    for (int i = 0; i < traj.q; ++i)
        for (int d = 0; d + 1 < traj.r[i]; ++d)
            cols.push_back("margin" + std::to_string(i + 1) + "_" + std::to_string(d));
    cols.push_back("margin_I");
    cols.push_back("margin_II");
    return cols;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool grid_only) {
    auto cols = csv_header(traj);
    for (size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << "\r\n";

    for (const auto& s : traj.samples) {
        if (grid_only && !s.on_sample_grid)
            continue;
        std::vector<double> row;
        row.push_back(s.t);
        for (int i = 0; i < traj.m; ++i)
            row.push_back(s.y(i));
        {
            int at = 0;
            for (int i = 0; i < traj.q; ++i) {
                for (int d = 1; d < traj.r[i]; ++d)
                    row.push_back(s.X_I(at + d));
                at += traj.r[i];
            }
        }
        for (int i = 0; i < traj.m; ++i)
            row.push_back(s.u(i));
        for (int i = 0; i < traj.q; ++i)
            for (int d = 0; d < traj.r[i]; ++d)
                row.push_back(s.e[i][d]);
        for (int i = 0; i < s.e_II.size(); ++i)
            row.push_back(s.e_II(i));
        for (int i = 0; i < traj.q; ++i)
            for (size_t d = 0; d < s.k[i].size(); ++d)
                row.push_back(s.k[i][d]);
        row.push_back(s.k_I);
        row.push_back(s.k_II);
        row.push_back(s.residual);
        for (int i = 0; i < traj.q; ++i)
            for (size_t d = 0; d < s.margin[i].size(); ++d)
                row.push_back(s.margin[i][d]);
        row.push_back(s.margin_I);
        row.push_back(s.margin_II);

        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\r\n";
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, bool grid_only) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    write_trajectory_csv(out, traj, grid_only);
}

Json summary_json(const Trajectory& traj, const MarginsReport& margins) {
    Json j;
    j["completed"] = traj.completed;
    j["samples"] = traj.samples.size();
    if (!traj.samples.empty())
        j["t_end"] = traj.samples.back().t;

    Json floors;
    floors["levels"] = margins.floor_ij;
    floors["I"] = margins.floor_I;
    floors["II"] = std::isinf(margins.floor_II) ? Json() : Json(margins.floor_II);
    floors["worst"] = margins.worst;
    floors["worst_time"] = margins.worst_time;
    j["min_margins"] = std::move(floors);
    j["funnel_invariant"] = margins.all_positive;

    double max_residual = 0.0, max_kI = 0.0, max_kII = 0.0;
    for (const auto& s : traj.samples) {
        max_residual = std::max(max_residual, s.residual);
        max_kI = std::max(max_kI, s.k_I);
        max_kII = std::max(max_kII, s.k_II);
    }
    j["max_residual"] = max_residual;
    j["residual_ok"] = max_residual <= 1e-8;
    j["max_gains"] = Json{{"k_I", max_kI}, {"k_II", max_kII}};
    j["steps"] = Json{{"accepted", traj.stats.accepted},
                      {"rejected", traj.stats.rejected},
                      {"newton_iterations", traj.stats.newton_iterations},
                      {"min_step", traj.stats.min_step},
                      {"max_step", traj.stats.max_step}};
    return j;
}

} // namespace daefc
