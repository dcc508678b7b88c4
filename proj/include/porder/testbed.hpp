#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "porder/power_function.hpp"
#include "porder/solvers.hpp"

namespace porder {

struct Prediction {
    PowerFunction psi = PowerFunction::linear();
    std::optional<double> base;   // expected P-base
    std::optional<double> order;  // expected Q-order
    std::string provenance;
};

using RealFn = std::function<XReal(const XReal&)>;

struct CatalogEntry {
    std::string name;
    ScalarProblem problem;           // empty f for radial gradient profiles
    RealFn radial_profile;           // gradient profile f(rho) for radial GD entries
    std::map<std::string, double> params;
    Prediction prediction;
    RealFn log_domain_map;           // lambda_{k+1} = map(lambda_k), when available
};

namespace detail {

inline XReal dist(const XReal& x, const XReal& alpha) { return abs(x - alpha); }

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw std::domain_error(msg);
}

}  // namespace detail

// f(x) = exp(-c L^{1/r}), L = -ln|x - alpha|, Newton error ratio (r/c) L^{1 - 1/r}.
inline CatalogEntry frac_newton_function(double r, double c = 1.0, double alpha = 0.0) {
    detail::require(r > 0.0 && r < 1.0, "frac_newton_function: r must lie in (0,1)");
    detail::require(c > 0.0, "frac_newton_function: c must be positive");
    const XReal xr(r), xc(c), xa(alpha), inv_r = XReal(1L) / XReal(r);
    CatalogEntry e;
    e.name = "newton_frac_power";
    e.params = {{"r", r}, {"c", c}, {"alpha", alpha}, {"s", 1.0 / r - 1.0}, {"C0", r / c}};
    e.problem.name = "fractional-power Newton";
    e.problem.root = xa;
    e.problem.f = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal L = -ln(detail::dist(x, xa));
        return exp(-xc * pow(L, inv_r));
    };
    e.problem.df = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal L = -ln(detail::dist(x, xa));
        XReal f = exp(-xc * pow(L, inv_r));
        return f * (xc / xr) * pow(L, inv_r - XReal(1L)) / (x - xa);
    };
    e.problem.in_domain = [=](const XReal& x) { return detail::dist(x, xa) < exp(XReal(-1L)); };
    e.log_domain_map = [=](const XReal& L) {
        return L - ln(abs(XReal(1L) - (xr / xc) * pow(L, XReal(1L) - inv_r)));
    };
    const double s = 1.0 / r - 1.0, c0 = r / c;
    e.prediction = {PowerFunction::power(r), std::exp(-std::pow(c0 * (s + 1.0), 1.0 / (s + 1.0))), std::nullopt,
                    "C = exp(-(C0 (s+1))^(1/(s+1))) with s = 1/r - 1, C0 = r/c"};
    return e;
}

// f(x) = |x - alpha| exp(-(ln L)^2 / 2); Newton error ratio ln L / (L + ln L).
inline CatalogEntry linearithmic_function(double alpha = 0.0) {
    const XReal xa(alpha), half("0.5");
    CatalogEntry e;
    e.name = "newton_linearithmic";
    e.params = {{"alpha", alpha}};
    e.problem.name = "linearithmic Newton";
    e.problem.root = xa;
    e.problem.f = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal eps = detail::dist(x, xa), lL = ln(-ln(eps));
        return eps * exp(-half * lL * lL);
    };
    e.problem.df = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal eps = detail::dist(x, xa), L = -ln(eps), lL = ln(L);
        XReal f = eps * exp(-half * lL * lL);
        return f * (XReal(1L) + lL / L) / (x - xa);
    };
    e.problem.in_domain = [=](const XReal& x) { return detail::dist(x, xa) < exp(-exp(XReal(1L))); };
    e.log_domain_map = [](const XReal& L) {
        XReal lL = ln(L);
        return L + ln(L + lL) - ln(lL);
    };
    e.prediction = {PowerFunction::linearithmic(), std::exp(-1.0), std::nullopt,
                    "error ~ eps0/(k-1)!, so -ln eps ~ k ln k - k and C = 1/e"};
    return e;
}

// f(x) = |x - alpha|^{ln L' - 1}; Newton error ratio 1 - 1/ln L'.
inline CatalogEntry anti_linearithmic_function(double alpha = 0.0) {
    const XReal xa(alpha);
    CatalogEntry e;
    e.name = "newton_anti_linearithmic";
    e.params = {{"alpha", alpha}};
    e.problem.name = "anti-linearithmic Newton";
    e.problem.root = xa;
    e.problem.f = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal Lp = -ln(detail::dist(x, xa));
        return exp(-(ln(Lp) - XReal(1L)) * Lp);
    };
    e.problem.df = [=](const XReal& x) {
        if (x == xa) return XReal(0L);
        XReal Lp = -ln(detail::dist(x, xa)), lLp = ln(Lp);
        return exp(-(lLp - XReal(1L)) * Lp) * lLp / (x - xa);
    };
    e.problem.in_domain = [=](const XReal& x) { return detail::dist(x, xa) < exp(-exp(XReal(1L))); };
    e.log_domain_map = [](const XReal& L) { return L - ln(XReal(1L) - XReal(1L) / ln(L)); };
    e.prediction = {PowerFunction::anti_linearithmic(), std::exp(-1.0), std::nullopt,
                    "log-error increments ~ 1/ln k sum to li(k) ~ k/ln k, so C = 1/e"};
    return e;
}

inline double char_root(int K, double nu);

// K = 2: f = x + x|x|^nu/(1+nu); K = 3: f = x + x|x|^{1+nu}/(2+nu). Root 0, f'(0) = 1.
inline CatalogEntry holder_test_function(int K, double nu) {
    detail::require(K == 2 || K == 3, "holder_test_function supports K in {2, 3}");
    detail::require(nu > 0.0 && nu <= 1.0, "holder_test_function: nu must lie in (0,1]");
    const XReal p = K == 2 ? XReal(nu) : XReal(1.0 + nu);
    const XReal den = p + XReal(1L);
    CatalogEntry e;
    e.name = K == 2 ? "holder_secant" : "holder_muller";
    e.params = {{"K", static_cast<double>(K)}, {"nu", nu}};
    e.problem.name = "Hoelder test function";
    e.problem.root = XReal(0L);
    e.problem.f = [=](const XReal& x) { return x + x * pow(abs(x), p) / den; };
    e.problem.df = [=](const XReal& x) { return XReal(1L) + pow(abs(x), p); };
    const double q = char_root(K, nu);
    e.prediction = {PowerFunction::exponential(q), std::nullopt, q, "order q_K(nu), root of q^K = q^{K-1} + ... + q + nu"};
    return e;
}

// Radial GD profile f(rho) = rho (-ln rho)^{1 - 1/r} on (0, 1/e].
inline CatalogEntry gd_fractional_profile(double r) {
    detail::require(r > 0.0 && r < 1.0, "gd_fractional_profile: r must lie in (0,1)");
    const XReal ex = XReal(1L) - XReal(1L) / XReal(r);
    CatalogEntry e;
    e.name = "gd_frac_power";
    e.params = {{"r", r}};
    e.radial_profile = [=](const XReal& rho) {
        XReal m = -ln(rho);
        // Accept rho = 1/e up to rounding.
        const XReal slack = pow(XReal(2L), 16L - static_cast<long>(default_precision()));
        if (m < XReal(1L) - slack) throw NumericError(NumericErrc::domain, "gd profile needs rho <= 1/e");
        return rho * pow(m, ex);
    };
    e.log_domain_map = [=](const XReal& v) { return v - ln(abs(XReal(1L) - pow(v, ex))); };
    e.prediction = {PowerFunction::power(r), std::exp(-std::pow(1.0 / r, r)), std::nullopt,
                    "v_k ~ (1/r)^r k^r, so C = exp(-(1/r)^r)"};
    return e;
}

// Newton baselines: f = x^2 halves the error, f = x - x^2 is quadratic.
inline CatalogEntry newton_double_root() {
    CatalogEntry e;
    e.name = "newton_x2";
    e.problem = {[](const XReal& x) { return x * x; }, [](const XReal& x) { return XReal(2L) * x; }, XReal(0L),
                 "f = x^2", {}};
    e.prediction = {PowerFunction::linear(), 0.5, 1.0, "error halves each step"};
    return e;
}

inline CatalogEntry newton_simple_root() {
    CatalogEntry e;
    e.name = "newton_x_minus_x2";
    e.problem = {[](const XReal& x) { return x - x * x; }, [](const XReal& x) { return XReal(1L) - XReal(2L) * x; },
                 XReal(0L), "f = x - x^2", {}};
    e.prediction = {PowerFunction::exponential(2.0), std::nullopt, 2.0, "simple root, quadratic"};
    return e;
}

// Unique root in (1, 2) of q^K - sum_{j=1}^{K-1} q^j - nu, bisected to double resolution.
inline double char_root(int K, double nu) {
    detail::require(K >= 2, "char_root: K must be >= 2");
    detail::require(nu > 0.0 && nu <= 1.0, "char_root: nu must lie in (0,1]");
    auto p = [&](long double q) {
        long double s = 0.0L, qj = 1.0L;
        for (int j = 1; j < K; ++j) {
            qj *= q;
            s += qj;
        }
        return qj * q - s - static_cast<long double>(nu);
    };
    long double lo = 1.0L, hi = 2.0L;
    for (int it = 0; it < 200; ++it) {
        long double mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (p(mid) < 0 ? lo : hi) = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

inline double char_poly(int K, double nu, double q) {
    double s = 0.0, qj = 1.0;
    for (int j = 1; j < K; ++j) {
        qj *= q;
        s += qj;
    }
    return qj * q - s - nu;
}

struct Modulation {
    enum class Kind { none, power, alternating, ratio_oscillation } kind = Kind::none;
    double value = 0.0;  // a for power/alternating, C2 for ratio_oscillation

    static Modulation none() { return {}; }
    static Modulation power(double a) { return {Kind::power, a}; }
    static Modulation alternating(double a) { return {Kind::alternating, a}; }
    static Modulation ratio_oscillation(double c2) { return {Kind::ratio_oscillation, c2}; }
};

struct SynthSpec {
    double C = 0.5;
    PowerFunction psi = PowerFunction::linear();
    Modulation modulation;
};

// lambda_k = psi(k)(-ln C) - (modulation log term) for k = 2 .. k_max.
inline ErrorSequence synth_sequence(const SynthSpec& spec, long k_max) {
    detail::require(k_max >= 10, "synth_sequence: k_max must be >= 10");
    detail::require(spec.C > 0.0 && spec.C < 1.0, "synth_sequence: C must lie in (0,1)");
    const XReal lc = -ln(XReal(spec.C));
    std::optional<XReal> lc2;
    if (spec.modulation.kind == Modulation::Kind::ratio_oscillation) {
        detail::require(spec.modulation.value > 0.0 && spec.modulation.value < 1.0,
                        "synth_sequence: C2 must lie in (0,1)");
        lc2 = -ln(XReal(spec.modulation.value));
    }
    const XReal a(spec.modulation.value);
    ErrorSequence seq("synthetic " + spec.psi.describe());
    for (long k = 2; k <= k_max; ++k) {
        XReal psi = spec.psi.eval_x(k);
        XReal lam = psi * lc;
        switch (spec.modulation.kind) {
            case Modulation::Kind::none: break;
            case Modulation::Kind::power: lam -= a * ln(XReal(k)); break;
            case Modulation::Kind::alternating:
                lam -= (k % 2 == 0 ? a : -a) * ln(XReal(k));
                break;
            case Modulation::Kind::ratio_oscillation:
                if (k % 2 == 1) lam = psi * *lc2;
                break;
        }
        seq.push_lambda(k, std::move(lam));
    }
    return seq;
}

inline std::vector<CatalogEntry> catalog() {
    std::vector<CatalogEntry> out;
    for (double r : {0.25, 0.5, 0.75}) out.push_back(frac_newton_function(r));
    out.push_back(linearithmic_function());
    out.push_back(anti_linearithmic_function());
    for (int K : {2, 3})
        for (double nu : {0.25, 0.5, 1.0}) out.push_back(holder_test_function(K, nu));
    for (double r : {0.25, 0.5, 0.75}) out.push_back(gd_fractional_profile(r));
    out.push_back(newton_double_root());
    out.push_back(newton_simple_root());
    return out;
}

inline nlohmann::json catalog_json(const std::vector<CatalogEntry>& entries) {
    auto arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json pred{{"model", e.prediction.psi.describe()}, {"provenance", e.prediction.provenance}};
        if (e.prediction.base) pred["base"] = *e.prediction.base;
        if (e.prediction.order) pred["order"] = *e.prediction.order;
        arr.push_back({{"name", e.name}, {"params", e.params}, {"prediction", pred},
                       {"log_domain_map", static_cast<bool>(e.log_domain_map)}});
    }
    return arr;
}

}  // namespace porder
