#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "porder/classify.hpp"
#include "porder/kpoint.hpp"
#include "porder/sequence_io.hpp"
#include "porder/spectral.hpp"
#include "porder/testbed.hpp"

namespace porder {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json, both };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "both") return OutputFormat::both;
    throw ConfigError("unknown format '" + s + "' (expected csv, json or both)");
}

struct ExperimentConfig {
    std::string experiment;
    json overrides = json::object();
    std::string out_dir;
    OutputFormat format = OutputFormat::csv;
};

struct RunResult {
    std::string name;
    json params = json::object();
    double measured = 0.0;
    double predicted = 0.0;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string reason;       // why a run failed, empty when it passed
    json detail = json::object();
};

struct Artifact {
    std::string path;  // relative to the experiment output directory
    std::string content;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<RunResult> runs;
    std::vector<Artifact> artifacts;

    bool pass() const {
        return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.pass; });
    }
};

inline json to_json(const RunResult& r) {
    json j{{"name", r.name},         {"params", r.params}, {"measured", r.measured},
           {"predicted", r.predicted}, {"gap", r.gap},     {"tolerance", r.tolerance},
           {"pass", r.pass}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

inline json to_json(const ExperimentReport& rep) {
    json runs = json::array();
    for (const auto& r : rep.runs) runs.push_back(to_json(r));
    return {{"experiment", rep.experiment}, {"runs", runs}, {"pass", rep.pass()}};
}

inline json to_json(const RateReport& r) {
    json alts = json::array();
    for (const auto& a : r.alternatives)
        alts.push_back({{"model", a.model.describe()}, {"residual", a.residual}, {"fitted_base", a.fitted_base}});
    json q = json::array();
    for (const auto& v : r.q_order_tail) q.push_back({v.k, v.value});
    return {{"best_model", r.best_model.describe()},
            {"p_base", r.p_base},
            {"fitted_base", r.fitted_base},
            {"residual", r.residual},
            {"qup", {{"verdict", to_string(r.qup.kind)}, {"C", r.qup.C}, {"spread", r.qup.spread}}},
            {"up",
             {{"verdict", to_string(r.up.kind)},
              {"C", r.up.C},
              {"low", r.up.low},
              {"high", r.up.high},
              {"slope", r.up.slope}}},
            {"q_order_tail_size", r.q_order_tail.size()},
            {"alternatives", alts}};
}

// Declared parameters with their defaults; overrides must match the JSON type.
using ParamSet = json;

struct Experiment {
    std::string name;
    std::string description;
    std::string figure;
    ParamSet defaults;
    std::function<ExperimentReport(const json& params, OutputFormat fmt)> run;
};

namespace detail {

inline void check_type(const std::string& key, const json& def, const json& v) {
    auto kind = [](const json& x) {
        if (x.is_boolean()) return 0;
        if (x.is_number_integer()) return 1;
        if (x.is_number()) return 2;
        if (x.is_string()) return 3;
        if (x.is_array()) return 4;
        return 5;
    };
    int kd = kind(def), kv = kind(v);
    bool ok = kd == kv || (kd == 2 && kv == 1);
    if (!ok) throw ConfigError("parameter '" + key + "' expects " + std::string(def.type_name()) + ", got " + v.dump());
    if (kd == 4 && !def.empty()) {
        for (const auto& x : v) check_type(key + "[]", def.front(), x);
    }
}

inline json merge_params(const ParamSet& defaults, const json& overrides) {
    json p = defaults;
    if (!overrides.is_object()) throw ConfigError("overrides must be an object");
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        if (!defaults.contains(it.key())) throw ConfigError("unknown parameter '" + it.key() + "'");
        check_type(it.key(), defaults[it.key()], it.value());
        p[it.key()] = it.value();
    }
    return p;
}

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline void emit_sequence(ExperimentReport& rep, OutputFormat fmt, const std::string& stem, const ErrorSequence& seq) {
    if (fmt != OutputFormat::json) {
        std::ostringstream os;
        write_csv(os, seq);
        rep.artifacts.push_back({stem + "_errors.csv", os.str()});
    }
    if (fmt != OutputFormat::csv) rep.artifacts.push_back({stem + "_errors.json", to_json(seq).dump(1)});
}

// k-th root series exp(-lambda_k / psi(k)) alongside lambda_k.
inline void emit_root_series(ExperimentReport& rep, OutputFormat fmt, const std::string& stem,
                             const ErrorSequence& seq, const PowerFunction& psi) {
    TailWindow all{2, std::numeric_limits<std::size_t>::max(), 0};
    auto s = root_series(seq, psi, all);
    if (fmt != OutputFormat::json) {
        std::ostringstream os;
        os.precision(17);
        os << "k,lambda,root\n";
        for (const auto& v : s) {
            const SeqEntry* e = nullptr;
            for (const auto& x : seq.entries())
                if (x.k == v.k) e = &x;
            os << v.k << ',' << e->err.lambda.to_string(20) << ',' << v.value << '\n';
        }
        rep.artifacts.push_back({stem + "_root.csv", os.str()});
    }
    if (fmt != OutputFormat::csv) {
        json a = json::array();
        for (const auto& v : s) a.push_back({{"k", v.k}, {"root", v.value}});
        rep.artifacts.push_back({stem + "_root.json", json{{"psi", psi.describe()}, {"series", a}}.dump(1)});
    }
}

inline void emit_q_series(ExperimentReport& rep, OutputFormat fmt, const std::string& stem,
                          const std::vector<KValue>& q) {
    if (fmt != OutputFormat::json) {
        std::ostringstream os;
        os.precision(17);
        os << "k,q\n";
        for (const auto& v : q) os << v.k << ',' << v.value << '\n';
        rep.artifacts.push_back({stem + "_q.csv", os.str()});
    }
    if (fmt != OutputFormat::csv) {
        json a = json::array();
        for (const auto& v : q) a.push_back({{"k", v.k}, {"q", v.value}});
        rep.artifacts.push_back({stem + "_q.json", a.dump(1)});
    }
}

inline void emit_history(ExperimentReport& rep, const std::string& stem, const History<XReal>& h) {
    std::ostringstream os;
    os << "k,x,lambda\n";
    for (std::size_t i = 0; i < h.size(); ++i)
        os << h.k[i] << ',' << h.x[i].to_string(40) << ',' << lambda_text(h.err[i]) << '\n';
    rep.artifacts.push_back({stem + "_iterates.csv", os.str()});
}

inline RunResult finish(RunResult r, double measured, double predicted, double tol) {
    r.measured = measured;
    r.predicted = predicted;
    r.gap = std::abs(measured - predicted);
    r.tolerance = tol;
    r.pass = std::isfinite(r.gap) && r.gap <= tol && r.reason.empty();
    if (!r.pass && r.reason.empty()) r.reason = "gap " + fmt_num(r.gap) + " exceeds tolerance " + fmt_num(tol);
    return r;
}

inline RunResult failed(std::string name, json params, std::string reason) {
    RunResult r;
    r.name = std::move(name);
    r.params = std::move(params);
    r.reason = std::move(reason);
    r.measured = r.predicted = r.gap = std::numeric_limits<double>::quiet_NaN();
    return r;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double median_last_q(const std::vector<KValue>& q, std::size_t n) {
    if (q.size() < n) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v;
    for (std::size_t i = q.size() - n; i < q.size(); ++i) v.push_back(q[i].value);
    return median(v);
}

inline RunControl control_from(const json& p) {
    RunControl c;
    if (p.contains("max_iter")) c.max_iter = p["max_iter"].get<long>();
    if (p.contains("stop_lambda")) c.stop_lambda = p["stop_lambda"].get<double>();
    if (p.contains("burn_in")) c.burn_in = p["burn_in"].get<long>();
    return c;
}

inline std::string tag(double v) {
    std::string s = fmt_num(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    std::replace(s.begin(), s.end(), '-', 'm');
    return s;
}

// ---- individual experiments -------------------------------------------------

inline ExperimentReport run_fig2(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"fig2_newton_fracpower", {}, {}};
    const double c = p["c"], x0 = p["x0"], tol = p["tol"], r_tol = p["r_tol"];
    const long min_iter = p["min_iterations"];
    RunControl ctrl = control_from(p);
    for (double r : p["r_values"].get<std::vector<double>>()) {
        json params{{"r", r}, {"c", c}, {"x0", x0}};
        const std::string name = "newton_frac_r" + tag(r);
        try {
            auto e = frac_newton_function(r, c);
            auto h = lambda_map_iterate(e.log_domain_map, -ln(XReal(x0)), ctrl);
            auto seq = h.errors(name);
            auto qup = qup_limit_estimate(seq, e.prediction.psi);
            auto cls = classify_psi(seq);
            RunResult rr;
            rr.name = name;
            rr.params = params;
            rr.detail = {{"termination", to_string(h.reason)},
                         {"iterations", h.size() - 1},
                         {"qup_verdict", to_string(qup.kind)},
                         {"classification", to_json(cls)}};
            if (static_cast<long>(h.size()) - 1 < min_iter)
                rr.reason = "only " + std::to_string(h.size() - 1) + " iterations recorded";
            else if (cls.best_model.model() != Model::Power)
                rr.reason = "classified as " + cls.best_model.describe();
            else if (std::abs(cls.best_model.r() - r) > r_tol)
                rr.reason = "fitted exponent " + fmt_num(cls.best_model.r()) + " differs from r";
            rr.detail["fitted_exponent"] = cls.best_model.r();
            rep.runs.push_back(finish(rr, qup.C, *e.prediction.base, tol));
            emit_sequence(rep, fmt, name, seq);
            emit_root_series(rep, fmt, name, seq, e.prediction.psi);
        } catch (const std::exception& ex) {
            rep.runs.push_back(failed(name, params, ex.what()));
        }
    }
    RunControl base = ctrl;
    base.max_iter = p["baseline_iter"];
    {
        const std::string name = "newton_x2_linear";
        json params{{"x0", x0}};
        try {
            auto e = newton_double_root();
            auto h = newton_scalar(e.problem, XReal(x0), base);
            auto seq = h.errors(name);
            RunResult rr;
            rr.name = name;
            rr.params = params;
            rr.detail = {{"termination", to_string(h.reason)}};
            rep.runs.push_back(finish(rr, p_base_estimate(seq, PowerFunction::linear()), 0.5, tol));
            emit_sequence(rep, fmt, name, seq);
            emit_root_series(rep, fmt, name, seq, PowerFunction::linear());
            emit_history(rep, name, h);
        } catch (const std::exception& ex) {
            rep.runs.push_back(failed(name, params, ex.what()));
        }
    }
    {
        const std::string name = "newton_x_minus_x2_quadratic";
        json params{{"x0", x0}};
        try {
            auto e = newton_simple_root();
            auto h = newton_scalar(e.problem, XReal(x0), base);
            auto seq = h.errors(name);
            auto q = q_order_estimate(seq).values;
            RunResult rr;
            rr.name = name;
            rr.params = params;
            rr.detail = {{"termination", to_string(h.reason)}};
            rep.runs.push_back(finish(rr, median_last_q(q, 3), 2.0, tol));
            emit_sequence(rep, fmt, name, seq);
            emit_q_series(rep, fmt, name, q);
            emit_history(rep, name, h);
        } catch (const std::exception& ex) {
            rep.runs.push_back(failed(name, params, ex.what()));
        }
    }
    return rep;
}

inline ExperimentReport run_fig3(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"fig3_newton_lith", {}, {}};
    const double x0 = p["x0"], alpha = p["alpha"], tol = p["tol"];
    RunControl ctrl = control_from(p);
    ClassifyConfig cfg;
    cfg.window.burn_in = p["burn_in"];
    struct Case {
        std::string name;
        CatalogEntry entry;
    };
    std::vector<Case> cases = {{"linearithmic", linearithmic_function(alpha)},
                               {"anti_linearithmic", anti_linearithmic_function(alpha)}};
    for (auto& cs : cases) {
        json params{{"x0", x0}, {"alpha", alpha}};
        try {
            const auto& e = cs.entry;
            auto h = lambda_map_iterate(e.log_domain_map, -ln(XReal(x0)), ctrl);
            auto seq = h.errors(cs.name);
            auto cls = classify_psi(seq, cfg);
            RunResult rr;
            rr.name = cs.name;
            rr.params = params;
            rr.detail = {{"termination", to_string(h.reason)}, {"classification", to_json(cls)}};
            if (cls.best_model.model() != e.prediction.psi.model())
                rr.reason = "classified as " + cls.best_model.describe() + ", expected " + e.prediction.psi.describe();
            rep.runs.push_back(finish(rr, cls.fitted_base, *e.prediction.base, tol));
            emit_sequence(rep, fmt, cs.name, seq);
            emit_root_series(rep, fmt, cs.name, seq, e.prediction.psi);
        } catch (const std::exception& ex) {
            rep.runs.push_back(failed(cs.name, params, ex.what()));
        }
    }
    return rep;
}

inline ExperimentReport run_fig4(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"fig4_gd_frac", {}, {}};
    const double r0 = p["r0"], eta = p["eta"], tol = p["tol"], r_tol = p["r_tol"];
    RunControl ctrl = control_from(p);
    for (double r : p["r_values"].get<std::vector<double>>()) {
        json params{{"r", r}, {"eta", eta}, {"r0", r0}};
        const std::string name = "gd_frac_r" + tag(r);
        try {
            auto e = gd_fractional_profile(r);
            auto h = gradient_descent_radial(e.radial_profile, XReal(r0), XReal(eta), ctrl);
            auto seq = h.errors(name);
            auto qup = qup_limit_estimate(seq, e.prediction.psi);
            auto cls = classify_psi(seq);
            RunResult rr;
            rr.name = name;
            rr.params = params;
            rr.detail = {{"termination", to_string(h.reason)},
                         {"iterations", h.size() - 1},
                         {"qup_verdict", to_string(qup.kind)},
                         {"fitted_exponent", cls.best_model.r()},
                         {"classification", to_json(cls)}};
            if (cls.best_model.model() != Model::Power)
                rr.reason = "classified as " + cls.best_model.describe();
            else if (std::abs(cls.best_model.r() - r) > r_tol)
                rr.reason = "fitted exponent " + fmt_num(cls.best_model.r()) + " differs from r";
            rep.runs.push_back(finish(rr, qup.C, *e.prediction.base, tol));
            emit_sequence(rep, fmt, name, seq);
            emit_root_series(rep, fmt, name, seq, e.prediction.psi);
        } catch (const std::exception& ex) {
            rep.runs.push_back(failed(name, params, ex.what()));
        }
    }
    return rep;
}

inline std::vector<XReal> holder_initial_points(const CatalogEntry& e, int K, double x0, double x1) {
    std::vector<XReal> pts = {XReal(x0), XReal(x1)};
    // Extra starting points come from secant steps on the latest pair.
    while (static_cast<int>(pts.size()) < K)
        pts.push_back(secant_step(e.problem.f, pts[pts.size() - 2], pts.back()));
    return pts;
}

inline ExperimentReport run_fig5(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"fig5_kpoint_holder", {}, {}};
    const double x0 = p["x0"], x1 = p["x1"], tol = p["tol"];
    const std::size_t last = p["median_of_last"];
    RunControl ctrl = control_from(p);
    for (int K : p["K_values"].get<std::vector<int>>()) {
        for (double nu : p["nu_values"].get<std::vector<double>>()) {
            json params{{"K", K}, {"nu", nu}, {"x0", x0}, {"x1", x1}};
            const std::string name = "kpoint_K" + std::to_string(K) + "_nu" + tag(nu);
            try {
                auto e = holder_test_function(K, nu);
                auto h = kpoint_inverse_interp(e.problem, holder_initial_points(e, K, x0, x1), ctrl);
                auto seq = h.errors(name);
                auto q = q_order_estimate(seq).values;
                RunResult rr;
                rr.name = name;
                rr.params = params;
                rr.detail = {{"termination", to_string(h.reason)}, {"valid_q", q.size()}};
                if (q.size() < last) rr.reason = "only " + std::to_string(q.size()) + " valid q_k values";
                rep.runs.push_back(finish(rr, median_last_q(q, last), *e.prediction.order, tol));
                emit_sequence(rep, fmt, name, seq);
                emit_q_series(rep, fmt, name, q);
                emit_history(rep, name, h);
            } catch (const std::exception& ex) {
                rep.runs.push_back(failed(name, params, ex.what()));
            }
        }
    }
    return rep;
}

// Random J with prescribed spectral radius and an x0 that passes the general-position check.
struct RandomLinearCase {
    Eigen::MatrixXd J;
    Eigen::VectorXd x0;
    double rho = 0.0;
};

inline RandomLinearCase random_linear_case(std::mt19937_64& rng, int n_max, double rho_lo, double rho_hi,
                                           double gp_tol) {
    std::uniform_int_distribution<int> dim(2, n_max);
    std::uniform_real_distribution<double> target(rho_lo, rho_hi);
    std::normal_distribution<double> g;
    for (;;) {
        const int n = dim(rng);
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = g(rng);
        const double t = target(rng);
        Eigen::MatrixXd J = A * (t / spectral_radius(A));
        SpectralInfo info;
        try {
            info = dominant_projector(J);
        } catch (const SpectralError&) {
            continue;
        }
        for (int attempt = 0; attempt < 100; ++attempt) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x(i) = g(rng);
            x.normalize();
            if (general_position_check(info, x, gp_tol)) return {J, x, info.rho};
        }
    }
}

inline VectorProblem linear_problem(const Eigen::MatrixXd& J) {
    const Eigen::Index n = J.rows();
    std::vector<std::vector<XReal>> M(n, std::vector<XReal>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M[i][j] = XReal(J(i, j));
    VectorProblem p;
    p.name = "g(x) = Jx";
    p.fixed_point = XVec(n, XReal(0L));
    p.jacobian_at_star = J;
    p.g = [M](const XVec& x) {
        XVec y(x.size(), XReal(0L));
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
        return y;
    };
    return p;
}

inline ExperimentReport run_thm41(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"thm41_spectral", {}, {}};
    std::mt19937_64 rng(p["seed"].get<std::uint64_t>());
    const int count = p["matrices"], n_max = p["n_max"];
    const double lo = p["rho_min"], hi = p["rho_max"], tol = p["tol"], gp_tol = p["gp_tol"];
    const long iters = p["iterations"];
    TailWindow w{p["burn_in"].get<long>(), p["window_last"].get<std::size_t>(), 8};
    RunControl ctrl;
    ctrl.max_iter = iters;
    ctrl.stop_lambda = 1e9;
    ctrl.divergence_window = std::numeric_limits<int>::max();
    for (int m = 0; m < count; ++m) {
        auto cs = random_linear_case(rng, n_max, lo, hi, gp_tol);
        json jm = json::array();
        for (Eigen::Index i = 0; i < cs.J.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < cs.J.cols(); ++j) row.push_back(cs.J(i, j));
            jm.push_back(row);
        }
        auto prob = linear_problem(cs.J);
        XVec x0(cs.x0.size());
        for (Eigen::Index i = 0; i < cs.x0.size(); ++i) x0[i] = XReal(cs.x0(i));
        auto h = fixed_point_iterate(prob, x0, ctrl);
        for (Norm nrm : {Norm::l1, Norm::l2, Norm::linf}) {
            const std::string name = "matrix" + std::to_string(m) + "_" + to_string(nrm);
            json params{{"n", cs.J.rows()}, {"norm", to_string(nrm)}, {"J", jm}};
            try {
                auto seq = errors_from_iterates(h.x, prob.fixed_point, nrm, name);
                RunResult rr;
                rr.name = name;
                rr.params = params;
                rr.detail = {{"termination", to_string(h.reason)}};
                rep.runs.push_back(finish(rr, p_base_estimate(seq, PowerFunction::linear(), w), cs.rho, tol));
                emit_sequence(rep, fmt, name, seq);
            } catch (const std::exception& ex) {
                rep.runs.push_back(failed(name, params, ex.what()));
            }
        }
    }
    {
        const std::string name = "nilpotent";
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(3, 3);
        N(0, 1) = 1.0;
        N(1, 2) = 1.0;
        json params{{"n", 3}};
        auto prob = linear_problem(N);
        auto h = fixed_point_iterate(prob, XVec{XReal(0.3), XReal(-0.7), XReal(0.5)}, ctrl);
        RunResult rr;
        rr.name = name;
        rr.params = params;
        rr.detail = {{"termination", to_string(h.reason)}, {"steps", h.k.back()}};
        if (h.reason != Termination::exact_fixed_point) rr.reason = "expected exact termination";
        rep.runs.push_back(finish(rr, static_cast<double>(h.k.back()), 3.0, 0.0));
        emit_sequence(rep, fmt, name, h.errors(name));
    }
    return rep;
}

inline ExperimentReport run_s34(const json& p, OutputFormat fmt) {
    ExperimentReport rep{"counterexamples_s34", {}, {}};
    const double a = p["a"];
    const double qtol = p["qup_tol"];
    {
        const std::string name = "power_modulation";
        const double C = p["linear_base"];
        json params{{"C", C}, {"a", a}, {"k_max", p["k_max_power"]}};
        auto seq = synth_sequence({C, PowerFunction::linear(), Modulation::power(a)}, p["k_max_power"].get<long>());
        auto qf = q_factor_behavior(q_factor_estimate(seq, 1.0));
        auto up = up_theta_check(seq, PowerFunction::linear(), XReal(C));
        auto qup = qup_limit_estimate(seq, PowerFunction::linear(), {}, qtol);
        RunResult rr;
        rr.name = name;
        rr.params = params;
        rr.detail = {{"q_factor", to_string(qf.kind)}, {"q_factor_limit", qf.limit},
                     {"up", to_string(up.kind)},     {"qup", to_string(qup.kind)}};
        if (qf.kind != QFactorBehavior::Kind::converges) rr.reason = "q-factor does not converge";
        else if (up.bounded()) rr.reason = "ratio unexpectedly theta-bounded";
        rep.runs.push_back(finish(rr, qf.limit, C, qtol));
        emit_sequence(rep, fmt, name, seq);
    }
    {
        const std::string name = "alternating_modulation";
        const double C = p["linear_base"];
        json params{{"C", C}, {"a", a}, {"k_max", p["k_max_alternating"]}};
        auto seq = synth_sequence({C, PowerFunction::linear(), Modulation::alternating(a)},
                                  p["k_max_alternating"].get<long>());
        auto qf = q_factor_behavior(q_factor_estimate(seq, 1.0));
        auto qup = qup_limit_estimate(seq, PowerFunction::linear(), {}, qtol);
        RunResult rr;
        rr.name = name;
        rr.params = params;
        rr.detail = {{"q_factor", to_string(qf.kind)}, {"qup", to_string(qup.kind)}, {"qup_spread", qup.spread}};
        if (!qup.limit()) rr.reason = "no QUP limit";
        else if (qf.kind != QFactorBehavior::Kind::unbounded) rr.reason = "q-factor not flagged oscillatory";
        rep.runs.push_back(finish(rr, qup.C, C, qtol));
        emit_sequence(rep, fmt, name, seq);
    }
    {
        const std::string name = "superlinear_power_modulation";
        const double C = p["superlinear_base"], q = p["q"];
        const double am = p["a_superlinear"];
        json params{{"C", C}, {"q", q}, {"a", am}, {"k_max", p["k_max_superlinear"]}};
        auto psi = PowerFunction::exponential(q);
        auto seq = synth_sequence({C, psi, Modulation::power(am)}, p["k_max_superlinear"].get<long>());
        auto qup = qup_limit_estimate(seq, psi, {}, qtol);
        auto up = up_theta_check(seq, psi, XReal(C));
        RunResult rr;
        rr.name = name;
        rr.params = params;
        rr.detail = {{"qup", to_string(qup.kind)}, {"up", to_string(up.kind)}, {"up_slope", up.slope}};
        if (!qup.limit()) rr.reason = "no QUP limit";
        else if (up.bounded()) rr.reason = "ratio unexpectedly theta-bounded";
        rep.runs.push_back(finish(rr, qup.C, C, qtol));
        emit_sequence(rep, fmt, name, seq);
    }
    return rep;
}

}  // namespace detail

inline const std::vector<Experiment>& registry() {
    static const std::vector<Experiment> reg = {
        {"fig2_newton_fracpower",
         "Newton on exp(-c(-ln|x|)^(1/r)): fractional-power rates, plus x^2 and x - x^2 baselines",
         "Figure 2",
         {{"r_values", {0.25, 0.5, 0.75}},
          {"c", 1.0},
          {"x0", 0.01},
          {"max_iter", 20000},
          {"stop_lambda", 1e9},
          {"baseline_iter", 200},
          {"min_iterations", 200},
          {"tol", 0.05},
          {"r_tol", 0.05},
          {"precision", 512}},
         detail::run_fig2},
        {"fig3_newton_lith", "Newton on the linearithmic and anti-linearithmic designed functions", "Figure 3",
         {{"x0", 0.01}, {"alpha", 0.0}, {"max_iter", 300}, {"stop_lambda", 1e9}, {"burn_in", 20}, {"tol", 0.1},
          {"precision", 512}},
         detail::run_fig3},
        {"fig4_gd_frac", "Radial gradient descent with fractional-power gradient profiles", "Figure 4",
         {{"r_values", {0.25, 0.5, 0.75}},
          {"eta", 1.0},
          {"r0", 0.01},
          {"max_iter", 100000},
          {"stop_lambda", 1e7},
          {"tol", 0.02},
          {"r_tol", 0.05},
          {"precision", 512}},
         detail::run_fig4},
        {"fig5_kpoint_holder", "Secant (K=2) and inverse Muller (K=3) on Hoelder test functions", "Figure 5",
         {{"K_values", {2, 3}},
          {"nu_values", {0.25, 0.5, 1.0}},
          {"x0", 1.0},
          {"x1", 0.8},
          {"max_iter", 200},
          {"stop_lambda", 1e9},
          {"median_of_last", 5},
          {"tol", 0.05},
          {"precision", 512}},
         detail::run_fig5},
        {"thm41_spectral", "Random affine maps g(x) = Jx: k-th root limit versus spectral radius", "Theorem 4.1",
         {{"seed", 20241016},
          {"matrices", 20},
          {"n_max", 6},
          {"rho_min", 0.1},
          {"rho_max", 0.9},
          {"iterations", 200},
          {"burn_in", 5},
          {"window_last", 10},
          {"gp_tol", 0.25},
          {"tol", 1e-2},
          {"precision", 512}},
         detail::run_thm41},
        {"counterexamples_s34", "Synthetic sequences separating Q-, QUP- and UP-order", "Hierarchy counterexamples",
         {{"linear_base", 0.5},
          {"a", 1.0},
          {"k_max_power", 300},
          {"k_max_alternating", 4000},
          {"superlinear_base", 0.4},
          {"q", 2.0},
          {"a_superlinear", 2.0},
          {"k_max_superlinear", 60},
          {"qup_tol", 5e-3},
          {"precision", 512}},
         detail::run_s34},
    };
    return reg;
}

inline const Experiment& find_experiment(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return e;
    throw ConfigError("unknown experiment '" + name + "'");
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const Experiment& ex = find_experiment(cfg.experiment);
    json params = detail::merge_params(ex.defaults, cfg.overrides);
    const long bits = params["precision"].get<long>();
    if (bits < kMinPrecision) throw ConfigError("precision must be at least 128 bits");
    PrecisionScope scope(bits);
    return ex.run(params, cfg.format);
}

}  // namespace porder
