#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace porder {

enum class NumericErrc { division_by_zero, domain, parse, precision };

class NumericError : public std::runtime_error {
public:
    NumericError(NumericErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    NumericErrc code() const noexcept { return code_; }

private:
    NumericErrc code_;
};

namespace detail {

// MPFR's default exponent range is about 2^±1073741823 in binary exponent,
// which is tight for errors like exp(-1e9). Widen it once per thread.
inline void widen_exponent_range() {
    thread_local bool done = [] {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
        return true;
    }();
    (void)done;
}

inline mpfr_prec_t& default_precision_ref() {
    thread_local mpfr_prec_t bits = 512;
    return bits;
}

}  // namespace detail

constexpr mpfr_prec_t kMinPrecision = 128;

inline mpfr_prec_t default_precision() { return detail::default_precision_ref(); }

inline void set_default_precision(mpfr_prec_t bits) {
    if (bits < kMinPrecision)
        throw NumericError(NumericErrc::precision,
                           "precision below 128 bits: " + std::to_string(bits));
    detail::default_precision_ref() = bits;
}

// Sets the thread's working precision for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(mpfr_prec_t bits) : saved_(default_precision()) {
        set_default_precision(bits);
    }
    ~PrecisionScope() { detail::default_precision_ref() = saved_; }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    mpfr_prec_t saved_;
};

class XReal {
public:
    XReal() : XReal(0L) {}
    XReal(int v) : XReal(static_cast<long>(v)) {}
    XReal(long v) {
        init();
        mpfr_set_si(v_, v, MPFR_RNDN);
    }
    XReal(double v) {
        if (!std::isfinite(v))
            throw NumericError(NumericErrc::domain, "non-finite double");
        init();
        mpfr_set_d(v_, v, MPFR_RNDN);
    }
    explicit XReal(std::string_view text) {
        init();
        std::string s(text);
        char* end = nullptr;
        if (!s.empty()) mpfr_strtofr(v_, s.c_str(), &end, 10, MPFR_RNDN);
        if (s.empty() || end != s.c_str() + s.size() || !mpfr_number_p(v_)) {
            mpfr_clear(v_);
            throw NumericError(NumericErrc::parse, "malformed real: '" + s + "'");
        }
    }

    XReal(const XReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    XReal(XReal&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    XReal& operator=(const XReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    XReal& operator=(XReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~XReal() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }

    // Binary exponent e with value = m * 2^e, 0.5 <= |m| < 1. Zero gives LONG_MIN.
    long binary_exponent() const { return is_zero() ? LONG_MIN : mpfr_get_exp(v_); }

    // Decimal form <sign><digit>.<digits>e<exponent>.
    std::string to_string(std::size_t digits = 0) const {
        if (is_zero()) return "0.0e0";
        if (digits == 0) digits = static_cast<std::size_t>(std::ceil(precision() * 0.30103)) + 1;
        digits = std::max<std::size_t>(digits, 2);
        mpfr_exp_t e = 0;
        char* raw = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
        std::string m(raw);
        mpfr_free_str(raw);
        std::string out;
        if (m.front() == '-') {
            out.push_back('-');
            m.erase(0, 1);
        }
        out.push_back(m[0]);
        out.push_back('.');
        out.append(m, 1, std::string::npos);
        out.push_back('e');
        out += std::to_string(static_cast<long>(e) - 1);
        return out;
    }

    static XReal parse(std::string_view text) { return XReal(text); }

    static XReal pi() {
        XReal r;
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    XReal& operator+=(const XReal& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    XReal& operator-=(const XReal& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    XReal& operator*=(const XReal& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
    XReal& operator/=(const XReal& b) {
        if (b.is_zero()) throw NumericError(NumericErrc::division_by_zero, "division by zero");
        mpfr_div(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }

    friend XReal operator+(const XReal& a, const XReal& b) { XReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend XReal operator-(const XReal& a, const XReal& b) { XReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend XReal operator*(const XReal& a, const XReal& b) { XReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend XReal operator/(const XReal& a, const XReal& b) {
        if (b.is_zero()) throw NumericError(NumericErrc::division_by_zero, "division by zero");
        XReal r;
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend XReal operator-(const XReal& a) { XReal r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

    friend bool operator==(const XReal& a, const XReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::strong_ordering operator<=>(const XReal& a, const XReal& b) {
        int c = mpfr_cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend XReal pow(const XReal& a, const XReal& b) {
        if (a.is_zero() && b.sign() < 0)
            throw NumericError(NumericErrc::division_by_zero, "zero to a negative power");
        if (a.sign() < 0 && !b.is_integer())
            throw NumericError(NumericErrc::domain, "negative base with non-integer exponent");
        XReal r;
        mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend XReal ln(const XReal& a) {
        if (a.sign() <= 0) throw NumericError(NumericErrc::domain, "ln of non-positive value");
        XReal r;
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend XReal log1p(const XReal& a) {
        if (mpfr_cmp_si(a.v_, -1) <= 0) throw NumericError(NumericErrc::domain, "log1p of value <= -1");
        XReal r;
        mpfr_log1p(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend XReal exp(const XReal& a) {
        XReal r;
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        if (r.is_zero() || mpfr_inf_p(r.v_))
            throw NumericError(NumericErrc::domain, "exp outside the exponent range");
        return r;
    }
    friend XReal abs(const XReal& a) { XReal r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend XReal sqrt(const XReal& a) {
        if (a.sign() < 0) throw NumericError(NumericErrc::domain, "sqrt of negative value");
        XReal r;
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

private:
    void init() {
        detail::widen_exponent_range();
        mpfr_init2(v_, default_precision());
    }

    mpfr_t v_;
};

inline XReal neg(const XReal& a) { return -a; }

inline XReal pow(const XReal& a, long n) { return pow(a, XReal(n)); }

inline XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }
inline XReal min(const XReal& a, const XReal& b) { return b < a ? b : a; }

// Relative distance |a - b| / max(|a|, |b|); zero when both are zero.
inline XReal rel_diff(const XReal& a, const XReal& b) {
    XReal den = max(abs(a), abs(b));
    if (den.is_zero()) return XReal(0L);
    return abs(a - b) / den;
}

}  // namespace porder
