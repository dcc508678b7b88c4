#pragma once

#include <compare>
#include <limits>
#include <utility>

#include "porder/xreal.hpp"

namespace porder {

// Error magnitude stored as lambda = -ln(xi). An exact zero has lambda = +inf.
struct LogError {
    XReal lambda;
    bool is_exact_zero = false;

    static LogError exact_zero() { return LogError{XReal(0L), true}; }
    static LogError from_lambda(XReal l) { return LogError{std::move(l), false}; }

    double lambda_double() const {
        return is_exact_zero ? std::numeric_limits<double>::infinity() : lambda.to_double();
    }

    XReal xi() const {
        if (is_exact_zero) return XReal(0L);
        return exp(-lambda);
    }
};

// Orders by error size: a < b means a is the smaller error (larger lambda).
inline std::strong_ordering compare_errors(const LogError& a, const LogError& b) {
    if (a.is_exact_zero && b.is_exact_zero) return std::strong_ordering::equal;
    if (a.is_exact_zero) return std::strong_ordering::less;
    if (b.is_exact_zero) return std::strong_ordering::greater;
    return b.lambda <=> a.lambda;
}

inline bool operator==(const LogError& a, const LogError& b) {
    return compare_errors(a, b) == std::strong_ordering::equal;
}
inline std::strong_ordering operator<=>(const LogError& a, const LogError& b) {
    return compare_errors(a, b);
}

inline LogError to_log_error(const XReal& xi) {
    if (xi.sign() < 0) throw NumericError(NumericErrc::domain, "negative error magnitude");
    if (xi.is_zero()) return LogError::exact_zero();
    return LogError::from_lambda(-ln(xi));
}

}  // namespace porder
