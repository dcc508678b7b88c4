#pragma once

#include <algorithm>
#include <climits>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "porder/solvers.hpp"

namespace porder {

class DegenerateNodes : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Newton form P(y) = c0 + c1 (y - y0) + c2 (y - y0)(y - y1) + ...
struct NewtonPoly {
    std::vector<XReal> nodes;
    std::vector<XReal> coeffs;

    XReal operator()(const XReal& y) const {
        XReal acc = coeffs.back();
        for (std::size_t j = coeffs.size() - 1; j-- > 0;) acc = coeffs[j] + (y - nodes[j]) * acc;
        return acc;
    }
};

// Interpolates x as a function of y through pairs (y_i, x_i).
inline NewtonPoly divided_differences(const std::vector<std::pair<XReal, XReal>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("divided_differences: no points");
    const std::size_t n = pairs.size();
    NewtonPoly p;
    std::vector<XReal> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.nodes.push_back(pairs[i].first);
        t[i] = pairs[i].second;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (p.nodes[i] == p.nodes[j]) throw DegenerateNodes("divided_differences: duplicate nodes");
    p.coeffs.push_back(t[0]);
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) t[i] = (t[i] - t[i - 1]) / (p.nodes[i] - p.nodes[i - level]);
        p.coeffs.push_back(t[level]);
    }
    return p;
}

// Classical secant update from (x_{k-1}, x_k).
inline XReal secant_step(const std::function<XReal(const XReal&)>& f, const XReal& xm, const XReal& x) {
    XReal fx = f(x);
    return x - fx * (x - xm) / (fx - f(xm));
}

// K-point inverse interpolation: x_{k+1} = P_k(0) with P_k through the K most recent
// (f(x_j), x_j). The initial points are recorded as k = 0 .. K-1.
inline History<XReal> kpoint_inverse_interp(const ScalarProblem& p, const std::vector<XReal>& initial,
                                            const RunControl& ctrl = {}) {
    const std::size_t K = initial.size();
    if (K < 2) throw std::invalid_argument("kpoint_inverse_interp: K must be >= 2");
    if (ctrl.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
            if (initial[i] == initial[j]) throw std::invalid_argument("kpoint_inverse_interp: repeated initial point");

    History<XReal> h;
    auto err = [&](const XReal& x) { return to_log_error(abs(x - p.root)); };
    std::deque<std::pair<XReal, XReal>> pts;  // (f(x), x), oldest first
    for (std::size_t i = 0; i < K; ++i) {
        XReal fx = p.f(initial[i]);
        LogError e = err(initial[i]);
        h.k.push_back(static_cast<long>(i));
        h.x.push_back(initial[i]);
        h.err.push_back(e);
        if (fx.is_zero() || e.is_exact_zero) {
            h.reason = Termination::exact_fixed_point;
            return h;
        }
        pts.emplace_back(std::move(fx), initial[i]);
    }
    const XReal stop(ctrl.stop_lambda);
    const long prec = static_cast<long>(default_precision());
    int decreasing = 0;
    for (long k = static_cast<long>(K); k < static_cast<long>(K) + ctrl.max_iter; ++k) {
        XReal next;
        try {
            NewtonPoly P = divided_differences({pts.begin(), pts.end()});
            // Expanded terms c_j prod_{i<j}(-y_i) show how much cancellation P(0) suffers.
            XReal prod(1L);
            long top = LONG_MIN;
            for (std::size_t j = 0; j < P.coeffs.size(); ++j) {
                XReal term = P.coeffs[j] * prod;
                if (!term.is_zero()) top = std::max(top, term.binary_exponent());
                prod *= -P.nodes[j];
            }
            next = P(XReal(0L));
            if (!next.is_zero() && top != LONG_MIN && top - next.binary_exponent() > prec - 64) {
                h.reason = Termination::precision_exhausted;
                h.message = "interpolation step cancels more bits than the working precision holds";
                return h;
            }
            if (p.in_domain && !p.in_domain(next)) throw StepFailure(Termination::domain_exit, "iterate left the domain");
        } catch (const DegenerateNodes& e) {
            h.reason = Termination::degenerate_nodes;
            h.message = e.what();
            return h;
        } catch (const StepFailure& e) {
            h.reason = e.why();
            h.message = e.what();
            return h;
        } catch (const NumericError& e) {
            h.reason = Termination::domain_exit;
            h.message = e.what();
            return h;
        }
        XReal fx;
        try {
            fx = p.f(next);
        } catch (const NumericError& e) {
            h.reason = Termination::domain_exit;
            h.message = e.what();
            return h;
        }
        LogError e = err(next);
        const bool decreased = !e.is_exact_zero && !h.err.back().is_exact_zero && e.lambda < h.err.back().lambda;
        h.k.push_back(k);
        h.x.push_back(next);
        h.err.push_back(e);
        if (e.is_exact_zero || fx.is_zero()) {
            h.reason = Termination::exact_fixed_point;
            return h;
        }
        if (e.lambda >= stop) {
            h.reason = Termination::stop_threshold;
            return h;
        }
        if (k > ctrl.burn_in) {
            decreasing = decreased ? decreasing + 1 : 0;
            if (decreasing >= ctrl.divergence_window) {
                h.reason = Termination::diverged;
                h.message = "lambda decreased for " + std::to_string(decreasing) + " steps";
                return h;
            }
        }
        pts.pop_front();
        pts.emplace_back(std::move(fx), std::move(next));
    }
    h.reason = Termination::max_iter;
    return h;
}

}  // namespace porder
