#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "porder/estimators.hpp"

namespace porder {

struct ClassifyConfig {
    TailWindow window{};
    std::size_t min_points = 20;   // non-zero entries required after burn-in
    double tie_rel = 0.05;
    double tie_abs = 1e-12;
    double qup_tol = 5e-3;
    UpOptions up{};
    int grid_points = 300;
};

struct ModelFit {
    PowerFunction model = PowerFunction::linear();
    double theta = 0.0;        // shape parameter of the winning parametrization
    double residual = std::numeric_limits<double>::infinity();
    double fitted_base = 0.0;  // exp(-a) with lambda ~ a psi(k) + b
};

struct RateReport {
    PowerFunction best_model = PowerFunction::linear();
    double p_base = 0.0;
    double fitted_base = 0.0;
    double theta = 0.0;
    QupVerdict qup;
    UpVerdict up;
    std::vector<KValue> q_order_tail;
    double residual = 0.0;
    std::vector<ModelFit> alternatives;  // remaining families, ranked by residual
    std::vector<long> flagged;           // k with non-positive lambda increments
};

namespace detail {

// Log-increment data: y_i = ln(lambda_{i+1} - lambda_i) between consecutive tail entries.
struct IncrementData {
    std::vector<double> k0, k1, y;
};

struct Score {
    double rms = std::numeric_limits<double>::infinity();
    double a = 0.0;
};

// lambda ~ a psi(k) + b, so ln(dlambda) - ln(dpsi) = ln a + noise.
inline Score score_increments(const IncrementData& d, const std::function<double(double, double)>& log_dpsi) {
    const std::size_t n = d.y.size();
    std::vector<double> w(n);
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double l = log_dpsi(d.k0[i], d.k1[i]);
        if (!std::isfinite(l)) return {};
        w[i] = d.y[i] - l;
        c += w[i];
    }
    c /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : w) ss += (v - c) * (v - c);
    return {std::sqrt(ss / static_cast<double>(n)), std::exp(c)};
}

struct ParamFit {
    Score score;
    double theta = 0.0;
};

// Log-spaced grid above lo, then a bounded Brent refine around the best node.
inline ParamFit optimize(const std::function<Score(double)>& f, double lo, double hi, int grid) {
    std::vector<double> t(static_cast<std::size_t>(grid)), v(t.size());
    const double e0 = -8.0, e1 = std::log10(hi - lo);
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = lo + std::pow(10.0, e0 + (e1 - e0) * static_cast<double>(i) / static_cast<double>(grid - 1));
        v[i] = f(t[i]).rms;
        if (v[i] < v[best]) best = i;
    }
    double a = t[best == 0 ? 0 : best - 1];
    double b = t[std::min(best + 1, t.size() - 1)];
    double th = t[best];
    if (std::isfinite(v[best]) && b > a) {
        auto r = boost::math::tools::brent_find_minima([&](double x) { return f(x).rms; }, a, b, 40);
        if (r.second <= v[best]) th = r.first;
    }
    return {f(th), th};
}

inline double log_expm1(double x) { return std::log(std::expm1(x)); }

}  // namespace detail

inline const std::vector<Model>& classifier_families() {
    static const std::vector<Model> order = {Model::Exponential, Model::Power, Model::Linearithmic,
                                             Model::AntiLinearithmic, Model::Logarithmic};
    return order;
}

// Best fit of one family to the log-increment data, minimized over that family's
// shift or exponent parametrizations.
inline ModelFit fit_family(Model m, const detail::IncrementData& d, int grid) {
    using detail::optimize;
    using detail::Score;
    using detail::score_increments;
    const double kmin = *std::min_element(d.k0.begin(), d.k0.end());
    const double lk = -std::log(kmin);
    auto mid = [](double a, double b) { return 0.5 * (a + b); };
    std::vector<detail::ParamFit> cands;
    switch (m) {
        case Model::Exponential:
            cands.push_back(optimize(
                [&](double r) {
                    const double lr = std::log(r);
                    return score_increments(d, [&](double a, double b) {
                        return a * lr + detail::log_expm1((b - a) * lr);
                    });
                },
                1.0, 10.0, grid));
            break;
        case Model::Power:
            cands.push_back(optimize(
                [&](double r) {
                    return score_increments(d, [&](double a, double b) {
                        return r * std::log(a) + detail::log_expm1(r * std::log(b / a));
                    });
                },
                0.0, 10.0, grid));
            break;
        case Model::Linearithmic:
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        return std::log(b * (std::log(b) + s) - a * (std::log(a) + s));
                    });
                },
                lk, 1e4, grid));
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        return std::log(std::log(mid(a, b)) + s) + std::log(b - a);
                    });
                },
                lk, 1e4, grid));
            break;
        case Model::AntiLinearithmic:
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        return std::log(b / (std::log(b) + s) - a / (std::log(a) + s));
                    });
                },
                lk + 1.0, 1e4, grid));
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        return -std::log(std::log(mid(a, b)) + s) + std::log(b - a);
                    });
                },
                lk, 1e4, grid));
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        const double lm = std::log(mid(a, b));
                        return -std::log(lm - std::log(lm) + s) + std::log(b - a);
                    });
                },
                lk + std::log(std::log(kmin)), 1e4, grid));
            break;
        case Model::Logarithmic:
            cands.push_back(optimize(
                [&](double s) {
                    return score_increments(d, [&](double a, double b) {
                        return std::log(std::log1p((b - a) / (a + s)));
                    });
                },
                -kmin, 1e5, grid));
            break;
        default:
            throw RateError(RateErrc::domain, "not a classifier family");
    }
    const auto& w = *std::min_element(cands.begin(), cands.end(),
                                      [](const auto& x, const auto& y) { return x.score.rms < y.score.rms; });
    ModelFit f;
    f.residual = w.score.rms;
    f.theta = w.theta;
    f.fitted_base = std::exp(-w.score.a);
    switch (m) {
        case Model::Exponential:
            f.model = PowerFunction::exponential(std::max(w.theta, 1.0 + 1e-12));
            break;
        case Model::Power: f.model = PowerFunction::power(std::max(w.theta, 1e-12)); break;
        case Model::Linearithmic: f.model = PowerFunction::linearithmic(); break;
        case Model::AntiLinearithmic: f.model = PowerFunction::anti_linearithmic(); break;
        default: f.model = PowerFunction::logarithmic(); break;
    }
    return f;
}

inline RateReport classify_psi(const ErrorSequence& seq, const ClassifyConfig& cfg = {}) {
    auto usable = usable_entries(seq, cfg.window.burn_in);
    if (usable.size() < cfg.min_points)
        throw RateError(RateErrc::insufficient_data,
                        "classify_psi needs " + std::to_string(cfg.min_points) + " non-zero entries after burn-in");
    auto tail = tail_entries(seq, cfg.window);

    RateReport rep;
    detail::IncrementData d;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
        XReal inc = tail[i + 1]->err.lambda - tail[i]->err.lambda;
        if (inc.sign() <= 0) {
            rep.flagged.push_back(tail[i + 1]->k);
            continue;
        }
        d.k0.push_back(static_cast<double>(std::max(tail[i]->k, 2L)));
        d.k1.push_back(static_cast<double>(std::max(tail[i + 1]->k, 3L)));
        d.y.push_back(ln(inc).to_double());
    }
    if (d.y.size() < 5) throw RateError(RateErrc::insufficient_data, "too few increasing tail entries");

    std::vector<ModelFit> fits;
    for (Model m : classifier_families()) {
        ModelFit f = fit_family(m, d, cfg.grid_points);
        // An exponential base at 1 is a degenerate fit, not a candidate.
        if (m == Model::Exponential && !(f.theta > 1.0 + 1e-6)) continue;
        // A vanishing power exponent is a logarithm in disguise.
        if (m == Model::Power && !(f.theta > 1e-3)) continue;
        fits.push_back(f);
    }
    double best_res = std::numeric_limits<double>::infinity();
    for (const auto& f : fits) best_res = std::min(best_res, f.residual);
    std::size_t pick = 0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].residual <= (1.0 + cfg.tie_rel) * best_res + cfg.tie_abs) {
            pick = i;
            break;
        }
    }
    const ModelFit& win = fits[pick];
    rep.best_model = win.model;
    rep.residual = win.residual;
    rep.fitted_base = win.fitted_base;
    rep.theta = win.theta;
    for (std::size_t i = 0; i < fits.size(); ++i)
        if (i != pick) rep.alternatives.push_back(fits[i]);
    std::sort(rep.alternatives.begin(), rep.alternatives.end(),
              [](const ModelFit& a, const ModelFit& b) { return a.residual < b.residual; });

    rep.p_base = std::clamp(p_base_estimate(seq, rep.best_model, cfg.window), 0.0, 1.0);
    rep.qup = qup_limit_estimate(seq, rep.best_model, cfg.window, cfg.qup_tol);
    double c = rep.qup.limit() ? rep.qup.C : rep.p_base;
    if (c > 0.0 && c < 1.0) rep.up = up_theta_check(seq, rep.best_model, XReal(c), cfg.window, cfg.up);
    auto q = q_order_estimate(seq);
    for (const auto& v : q.values)
        if (v.k >= tail.front()->k) rep.q_order_tail.push_back(v);
    return rep;
}

}  // namespace porder
