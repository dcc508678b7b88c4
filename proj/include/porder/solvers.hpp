#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "porder/error_sequence.hpp"

namespace porder {

using XVec = std::vector<XReal>;

enum class Norm { l1, l2, linf };

inline const char* to_string(Norm p) {
    switch (p) {
        case Norm::l1: return "l1";
        case Norm::l2: return "l2";
        case Norm::linf: return "linf";
    }
    return "?";
}

inline XReal norm(const XVec& v, Norm p) {
    XReal acc(0L);
    for (const auto& x : v) {
        switch (p) {
            case Norm::l1: acc += abs(x); break;
            case Norm::l2: acc += x * x; break;
            case Norm::linf: acc = max(acc, abs(x)); break;
        }
    }
    return p == Norm::l2 ? sqrt(acc) : acc;
}

inline XVec to_xvec(const std::vector<double>& v) { return XVec(v.begin(), v.end()); }

inline XVec operator-(const XVec& a, const XVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    XVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline ErrorSequence errors_from_iterates(const std::vector<XVec>& iterates, const XVec& x_star, Norm p,
                                          std::string label = {}) {
    ErrorSequence seq(std::move(label));
    for (std::size_t k = 0; k < iterates.size(); ++k) {
        if (iterates[k].size() != x_star.size() || x_star.empty())
            throw std::invalid_argument("errors_from_iterates: dimension mismatch");
        LogError e = to_log_error(norm(iterates[k] - x_star, p));
        bool zero = e.is_exact_zero;
        seq.push(static_cast<long>(k), std::move(e));
        if (zero) break;
    }
    return seq;
}

enum class Termination {
    stop_threshold,
    max_iter,
    exact_fixed_point,
    diverged,
    domain_exit,
    derivative_zero,
    degenerate_nodes,
    precision_exhausted,
};

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::stop_threshold: return "stop-threshold";
        case Termination::max_iter: return "max-iter";
        case Termination::exact_fixed_point: return "exact-fixed-point";
        case Termination::diverged: return "diverged";
        case Termination::domain_exit: return "domain-exit";
        case Termination::derivative_zero: return "derivative-zero";
        case Termination::degenerate_nodes: return "degenerate-nodes";
        case Termination::precision_exhausted: return "precision-exhausted";
    }
    return "?";
}

// Thrown from inside a step to end the run with a given reason.
class StepFailure : public std::runtime_error {
public:
    StepFailure(Termination why, const std::string& what) : std::runtime_error(what), why_(why) {}
    Termination why() const { return why_; }

private:
    Termination why_;
};

struct RunControl {
    long max_iter = 500;
    double stop_lambda = 5000.0;
    double divergence_lambda = -std::numeric_limits<double>::infinity();
    long burn_in = 5;
    long record_every = 1;
    int divergence_window = 10;
};

template <class State>
struct History {
    std::vector<long> k;
    std::vector<State> x;
    std::vector<LogError> err;
    Termination reason = Termination::max_iter;
    std::string message;

    std::size_t size() const { return k.size(); }

    ErrorSequence errors(std::string label = {}) const {
        ErrorSequence seq(std::move(label));
        for (std::size_t i = 0; i < k.size(); ++i) seq.push(k[i], err[i]);
        return seq;
    }
};

namespace detail {

// Shared loop: records iterates, applies stop, exact-zero and divergence rules.
template <class State, class Step, class ErrFn>
History<State> drive(State x, Step&& step, ErrFn&& errfn, const RunControl& ctrl, long k0 = 0) {
    if (ctrl.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(ctrl.stop_lambda > 0)) throw std::invalid_argument("stop_lambda must be > 0");
    History<State> h;
    const XReal stop(ctrl.stop_lambda);
    auto record = [&](long k, const State& s, const LogError& e) {
        h.k.push_back(k);
        h.x.push_back(s);
        h.err.push_back(e);
    };
    LogError e = errfn(x);
    record(k0, x, e);
    if (e.is_exact_zero) {
        h.reason = Termination::exact_fixed_point;
        return h;
    }
    int decreasing = 0;
    XReal last = e.lambda;
    for (long k = k0 + 1; k <= k0 + ctrl.max_iter; ++k) {
        try {
            x = step(x);
            e = errfn(x);
        } catch (const StepFailure& f) {
            h.reason = f.why();
            h.message = f.what();
            return h;
        } catch (const NumericError& f) {
            h.reason = Termination::domain_exit;
            h.message = f.what();
            return h;
        }
        const bool due = (k - k0) % ctrl.record_every == 0;
        if (e.is_exact_zero) {
            record(k, x, e);
            h.reason = Termination::exact_fixed_point;
            return h;
        }
        if (e.lambda >= stop) {
            record(k, x, e);
            h.reason = Termination::stop_threshold;
            return h;
        }
        if (k > ctrl.burn_in && e.lambda.to_double() <= ctrl.divergence_lambda) {
            record(k, x, e);
            h.reason = Termination::diverged;
            h.message = "lambda fell below divergence_lambda";
            return h;
        }
        if (due) {
            if (k > ctrl.burn_in) {
                decreasing = e.lambda < last ? decreasing + 1 : 0;
            }
            last = e.lambda;
            record(k, x, e);
            if (decreasing >= ctrl.divergence_window) {
                h.reason = Termination::diverged;
                h.message = "lambda decreased for " + std::to_string(decreasing) + " recorded steps";
                return h;
            }
        } else if (k == k0 + ctrl.max_iter) {
            record(k, x, e);
        }
    }
    h.reason = Termination::max_iter;
    return h;
}

}  // namespace detail

struct ScalarProblem {
    std::function<XReal(const XReal&)> f;
    std::function<XReal(const XReal&)> df;
    XReal root;
    std::string name;
    std::function<bool(const XReal&)> in_domain;  // optional
};

struct VectorProblem {
    std::function<XVec(const XVec&)> g;
    XVec fixed_point;
    std::optional<Eigen::MatrixXd> jacobian_at_star;
    std::string name;
};

inline History<XVec> fixed_point_iterate(const VectorProblem& p, const XVec& x0, const RunControl& ctrl = {},
                                         Norm nrm = Norm::l2) {
    if (x0.size() != p.fixed_point.size()) throw std::invalid_argument("x0 dimension mismatch");
    return detail::drive<XVec>(
        x0,
        [&](const XVec& x) {
            XVec y = p.g(x);
            if (y.size() != x.size()) throw StepFailure(Termination::domain_exit, "map changed dimension");
            return y;
        },
        [&](const XVec& x) { return to_log_error(norm(x - p.fixed_point, nrm)); }, ctrl);
}

inline History<XReal> fixed_point_iterate(const std::function<XReal(const XReal&)>& g, const XReal& x_star,
                                          const XReal& x0, const RunControl& ctrl = {}) {
    return detail::drive<XReal>(
        x0, [&](const XReal& x) { return g(x); },
        [&](const XReal& x) { return to_log_error(abs(x - x_star)); }, ctrl);
}

inline History<XReal> newton_scalar(const ScalarProblem& p, const XReal& x0, const RunControl& ctrl = {}) {
    if (x0 == p.root) throw std::invalid_argument("newton_scalar: x0 equals the root");
    if (p.df(x0).is_zero()) throw std::invalid_argument("newton_scalar: f'(x0) = 0");
    return detail::drive<XReal>(
        x0,
        [&](const XReal& x) {
            XReal d = p.df(x);
            if (d.is_zero()) throw StepFailure(Termination::derivative_zero, "f'(x_k) = 0");
            XReal y = x - p.f(x) / d;
            if (p.in_domain && y != p.root && !p.in_domain(y))
                throw StepFailure(Termination::domain_exit, "iterate left the domain");
            return y;
        },
        [&](const XReal& x) { return to_log_error(abs(x - p.root)); }, ctrl);
}

// Iterates lambda_{k+1} = map(lambda_k); the state is lambda itself.
inline History<XReal> lambda_map_iterate(const std::function<XReal(const XReal&)>& map, const XReal& lambda0,
                                         const RunControl& ctrl = {}) {
    return detail::drive<XReal>(
        lambda0, [&](const XReal& l) { return map(l); },
        [](const XReal& l) { return LogError::from_lambda(l); }, ctrl);
}

// r_{k+1} = r_k |1 - eta f(r_k) / r_k| for a radial gradient profile f.
inline History<XReal> gradient_descent_radial(const std::function<XReal(const XReal&)>& profile, const XReal& r0,
                                              const XReal& eta, const RunControl& ctrl = {}) {
    if (!(r0.sign() > 0)) throw std::invalid_argument("gradient_descent_radial: r0 must be positive");
    if (!(eta.sign() > 0)) throw std::invalid_argument("gradient_descent_radial: eta must be positive");
    return detail::drive<XReal>(
        r0, [&](const XReal& r) { return r * abs(XReal(1L) - eta * profile(r) / r); },
        [](const XReal& r) { return to_log_error(r); }, ctrl);
}

// Full n-dimensional GD on F(x) = Phi(|x|_2): x_{k+1} = x_k (1 - eta f(r_k) / r_k).
inline History<XVec> gradient_descent_vector(const std::function<XReal(const XReal&)>& profile, const XVec& x0,
                                             const XReal& eta, const RunControl& ctrl = {}) {
    return detail::drive<XVec>(
        x0,
        [&](const XVec& x) {
            XReal r = norm(x, Norm::l2);
            XReal s = XReal(1L) - eta * profile(r) / r;
            XVec y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * s;
            return y;
        },
        [](const XVec& x) { return to_log_error(norm(x, Norm::l2)); }, ctrl);
}

}  // namespace porder
