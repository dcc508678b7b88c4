#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "porder/error_sequence.hpp"
#include "porder/power_function.hpp"

namespace porder {

struct KValue {
    long k;
    double value;
};

// -lambda / psi(k) evaluated without forming lambda or psi in double.
inline double neg_lambda_over_psi(const XReal& lambda, const PowerFunction& psi, long k) {
    if (lambda.is_zero()) return 0.0;
    double lp = psi.log_eval(static_cast<double>(k));
    double la = ln(abs(lambda)).to_double();
    double mag = std::exp(la - lp);
    return lambda.sign() > 0 ? -mag : mag;
}

// exp(-lambda_k / psi(k)) over the tail window.
inline std::vector<KValue> root_series(const ErrorSequence& seq, const PowerFunction& psi,
                                       const TailWindow& w) {
    std::vector<KValue> out;
    for (const SeqEntry* e : tail_entries(seq, w))
        out.push_back({e->k, std::exp(neg_lambda_over_psi(e->err.lambda, psi, e->k))});
    return out;
}

inline double p_base_estimate(const ErrorSequence& seq, const PowerFunction& psi, const TailWindow& w = {}) {
    auto s = root_series(seq, psi, w);
    if (s.size() < 5) throw RateError(RateErrc::insufficient_data, "p_base_estimate needs 5 non-zero tail entries");
    double m = 0.0;
    for (const auto& v : s) m = std::max(m, v.value);
    return m;
}

struct QupVerdict {
    enum class Kind { limit_exists, no_limit, insufficient_data } kind = Kind::insufficient_data;
    double C = 0.0;
    double spread = 0.0;
    bool limit() const { return kind == Kind::limit_exists; }
};

inline const char* to_string(QupVerdict::Kind k) {
    switch (k) {
        case QupVerdict::Kind::limit_exists: return "limit-exists";
        case QupVerdict::Kind::no_limit: return "no-limit";
        case QupVerdict::Kind::insufficient_data: return "insufficient-data";
    }
    return "?";
}

inline QupVerdict qup_limit_estimate(const ErrorSequence& seq, const PowerFunction& psi,
                                     const TailWindow& w = {}, double tol = 5e-3) {
    QupVerdict v;
    auto s = root_series(seq, psi, w);
    if (s.size() < 8) return v;
    double lo = s.front().value, hi = lo, sum = 0.0;
    for (const auto& p : s) {
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
        sum += p.value;
    }
    v.spread = hi - lo;
    v.C = sum / static_cast<double>(s.size());
    v.kind = v.spread <= tol ? QupVerdict::Kind::limit_exists : QupVerdict::Kind::no_limit;
    return v;
}

struct UpVerdict {
    enum class Kind { theta_bounded, unbounded_ratio, insufficient_data } kind = Kind::insufficient_data;
    double C = 0.0;
    double low = 0.0;
    double high = 0.0;
    double slope = 0.0;
    double range = 0.0;
    bool bounded() const { return kind == Kind::theta_bounded; }
};

inline const char* to_string(UpVerdict::Kind k) {
    switch (k) {
        case UpVerdict::Kind::theta_bounded: return "theta-bounded";
        case UpVerdict::Kind::unbounded_ratio: return "unbounded-ratio";
        case UpVerdict::Kind::insufficient_data: return "insufficient-data";
    }
    return "?";
}

struct UpOptions {
    double slope_tol = 0.05;
    double range_cap = std::log(100.0);
};

// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

// rho_k = lambda_k + psi(k) ln C, so xi_k / C^psi(k) = exp(-rho_k). Evaluated in
// extended precision because lambda_k and psi(k) ln C nearly cancel.
inline UpVerdict up_theta_check(const ErrorSequence& seq, const PowerFunction& psi, const XReal& c_base,
                                const TailWindow& w = {}, const UpOptions& opt = {}) {
    if (!(c_base.sign() > 0 && c_base < XReal(1L)))
        throw RateError(RateErrc::domain, "up_theta_check requires 0 < C < 1");
    UpVerdict v;
    v.C = c_base.to_double();
    auto tail = tail_entries(seq, w);
    if (tail.size() < 10) return v;
    const XReal lc = ln(c_base);
    std::vector<double> x, rho;
    for (const SeqEntry* e : tail) {
        x.push_back(std::log(static_cast<double>(e->k)));
        rho.push_back((e->err.lambda + psi.eval_x(e->k) * lc).to_double());
    }
    auto [mn, mx] = std::minmax_element(rho.begin(), rho.end());
    v.range = *mx - *mn;
    v.slope = ols_slope(x, rho);
    v.low = std::exp(-*mx);
    v.high = std::exp(-*mn);
    v.kind = (std::abs(v.slope) <= opt.slope_tol && v.range <= opt.range_cap) ? UpVerdict::Kind::theta_bounded
                                                                              : UpVerdict::Kind::unbounded_ratio;
    return v;
}

struct QOrderResult {
    std::vector<KValue> values;
    std::vector<long> flagged;  // k whose neighbouring increments are non-positive
};

inline QOrderResult q_order_estimate(const ErrorSequence& seq) {
    std::vector<const SeqEntry*> e;
    for (const auto& x : seq.entries())
        if (!x.err.is_exact_zero) e.push_back(&x);
    if (e.size() < 3) throw RateError(RateErrc::insufficient_data, "q_order_estimate needs 3 non-zero entries");
    QOrderResult out;
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
        XReal d0 = e[i]->err.lambda - e[i - 1]->err.lambda;
        XReal d1 = e[i + 1]->err.lambda - e[i]->err.lambda;
        if (d0.sign() <= 0 || d1.sign() <= 0) {
            out.flagged.push_back(e[i]->k);
            continue;
        }
        out.values.push_back({e[i]->k, (d1 / d0).to_double()});
    }
    return out;
}

struct QFactorPoint {
    long k;
    double log_ratio;  // ln(xi_{k+1} / xi_k^q)
    double ratio() const { return std::exp(log_ratio); }
};

inline std::vector<QFactorPoint> q_factor_estimate(const ErrorSequence& seq, double q) {
    if (!(q >= 1.0)) throw RateError(RateErrc::domain, "q_factor_estimate requires q >= 1");
    std::vector<const SeqEntry*> e;
    for (const auto& x : seq.entries())
        if (!x.err.is_exact_zero) e.push_back(&x);
    if (e.size() < 2) throw RateError(RateErrc::insufficient_data, "q_factor_estimate needs 2 non-zero entries");
    std::vector<QFactorPoint> out;
    const XReal qx(q);
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        out.push_back({e[i]->k, -(e[i + 1]->err.lambda - qx * e[i]->err.lambda).to_double()});
    return out;
}

struct QFactorBehavior {
    enum class Kind { converges, bounded, unbounded, insufficient_data } kind = Kind::insufficient_data;
    double limit = 0.0;     // window mean of the ratio when it converges
    double spread = 0.0;    // ratio spread over the window
    double growth = 0.0;    // slope of |ln ratio| against ln k
};

inline const char* to_string(QFactorBehavior::Kind k) {
    switch (k) {
        case QFactorBehavior::Kind::converges: return "converges";
        case QFactorBehavior::Kind::bounded: return "bounded";
        case QFactorBehavior::Kind::unbounded: return "unbounded";
        case QFactorBehavior::Kind::insufficient_data: return "insufficient-data";
    }
    return "?";
}

// Tail behaviour of the Q-factor ratios: converges when the ratio spread over the
// last half is within tol; unbounded when |ln ratio| keeps growing in ln k.
inline QFactorBehavior q_factor_behavior(const std::vector<QFactorPoint>& pts, long burn_in = 5,
                                         double tol = 5e-3, double growth_tol = 0.05) {
    std::vector<const QFactorPoint*> use;
    for (const auto& p : pts)
        if (p.k >= burn_in && p.k >= 1) use.push_back(&p);
    QFactorBehavior b;
    if (use.size() < 8) return b;
    std::vector<const QFactorPoint*> tail(use.end() - static_cast<std::ptrdiff_t>(use.size() / 2), use.end());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    std::vector<double> x, y;
    for (const auto* p : tail) {
        double r = p->ratio();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        sum += r;
        x.push_back(std::log(static_cast<double>(p->k)));
        y.push_back(std::abs(p->log_ratio));
    }
    b.spread = hi - lo;
    b.growth = ols_slope(x, y);
    if (b.spread <= tol) {
        b.kind = QFactorBehavior::Kind::converges;
        b.limit = sum / static_cast<double>(tail.size());
    } else if (b.growth > growth_tol || !std::isfinite(hi)) {
        b.kind = QFactorBehavior::Kind::unbounded;
    } else {
        b.kind = QFactorBehavior::Kind::bounded;
    }
    return b;
}

inline double r_factor(const ErrorSequence& seq, double r, const TailWindow& w = {}) {
    if (!(r >= 1.0)) throw RateError(RateErrc::domain, "r_factor requires r >= 1");
    if (r == 1.0) return p_base_estimate(seq, PowerFunction::linear(), w);
    return p_base_estimate(seq, PowerFunction::exponential(r), w);
}

}  // namespace porder
