#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "porder/xreal.hpp"

namespace porder {

enum class Model { Exponential, Power, Logarithmic, Linearithmic, AntiLinearithmic, PolyLog, Custom };

inline const char* model_name(Model m) {
    switch (m) {
        case Model::Exponential: return "Exponential";
        case Model::Power: return "Power";
        case Model::Logarithmic: return "Logarithmic";
        case Model::Linearithmic: return "Linearithmic";
        case Model::AntiLinearithmic: return "AntiLinearithmic";
        case Model::PolyLog: return "PolyLog";
        case Model::Custom: return "Custom";
    }
    return "?";
}

// psi(k) with psi -> infinity, defined for k >= 2.
class PowerFunction {
public:
    static PowerFunction exponential(double r) {
        if (!(r > 1.0)) throw std::invalid_argument("Exponential requires r > 1");
        return PowerFunction(Model::Exponential, r);
    }
    static PowerFunction power(double r) {
        if (!(r > 0.0)) throw std::invalid_argument("Power requires r > 0");
        return PowerFunction(Model::Power, r);
    }
    static PowerFunction linear() { return power(1.0); }
    static PowerFunction logarithmic() { return PowerFunction(Model::Logarithmic, 0.0); }
    static PowerFunction linearithmic() { return PowerFunction(Model::Linearithmic, 0.0); }
    static PowerFunction anti_linearithmic() { return PowerFunction(Model::AntiLinearithmic, 0.0); }
    static PowerFunction polylog(double p, double s) {
        if (!(p > 0.0 || (p == 0.0 && s > 0.0)))
            throw std::invalid_argument("PolyLog requires p > 0, or p = 0 and s > 0");
        PowerFunction f(Model::PolyLog, p);
        f.s_ = s;
        return f;
    }
    // Table of (k, psi(k)); linear interpolation between knots, no extrapolation.
    static PowerFunction custom(std::vector<std::pair<double, double>> table) {
        if (table.size() < 2) throw std::invalid_argument("Custom table needs at least 2 knots");
        std::sort(table.begin(), table.end());
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (!(table[i].second > 0.0)) throw std::invalid_argument("Custom psi must be positive");
            if (i > 0 && table[i].first == table[i - 1].first)
                throw std::invalid_argument("Custom table has duplicate k");
        }
        PowerFunction f(Model::Custom, 0.0);
        f.table_ = std::move(table);
        return f;
    }

    Model model() const { return model_; }
    // Base for Exponential, exponent for Power and PolyLog (k^p), unused otherwise.
    double r() const { return r_; }
    double s() const { return s_; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }

    std::string describe() const {
        switch (model_) {
            case Model::Exponential: return "Exponential(" + fmt(r_) + ")";
            case Model::Power: return "Power(" + fmt(r_) + ")";
            case Model::PolyLog: return "PolyLog(" + fmt(r_) + "," + fmt(s_) + ")";
            default: return model_name(model_);
        }
    }

    double log_eval(double k) const {
        check_k(k);
        const double lk = std::log(k);
        switch (model_) {
            case Model::Exponential: return k * std::log(r_);
            case Model::Power: return r_ * lk;
            case Model::Logarithmic: return std::log(lk);
            case Model::Linearithmic: return lk + std::log(lk);
            // k/ln k dips below e on (2, e); clamp so psi stays nondecreasing.
            case Model::AntiLinearithmic: return k < std::exp(1.0) ? 1.0 : lk - std::log(lk);
            case Model::PolyLog: return r_ * lk + s_ * std::log(lk);
            case Model::Custom: return std::log(lookup(k));
        }
        return 0.0;
    }

    double eval(double k) const { return std::exp(log_eval(k)); }

    // Extended-precision value; exact for Exponential and integer Power.
    XReal eval_x(long k) const {
        check_k(static_cast<double>(k));
        switch (model_) {
            case Model::Exponential: return pow(XReal(r_), XReal(k));
            case Model::Power: return pow(XReal(k), XReal(r_));
            case Model::Logarithmic: return ln(XReal(k));
            case Model::Linearithmic: return XReal(k) * ln(XReal(k));
            case Model::AntiLinearithmic:
                if (k < 3) return exp(XReal(1L));
                return XReal(k) / ln(XReal(k));
            case Model::PolyLog: return pow(XReal(k), XReal(r_)) * pow(ln(XReal(k)), XReal(s_));
            case Model::Custom: return XReal(lookup(static_cast<double>(k)));
        }
        return XReal(0L);
    }

private:
    PowerFunction(Model m, double r) : model_(m), r_(r) {}

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    void check_k(double k) const {
        if (!(k >= 2.0)) throw std::domain_error("psi(k) is defined for k >= 2");
    }

    double lookup(double k) const {
        if (k < table_.front().first || k > table_.back().first)
            throw std::domain_error("k outside the Custom psi table");
        auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(k, -1.0));
        if (it->first == k) return it->second;
        auto lo = std::prev(it);
        double t = (k - lo->first) / (it->first - lo->first);
        return lo->second + t * (it->second - lo->second);
    }

    Model model_;
    double r_ = 0.0;
    double s_ = 0.0;
    std::vector<std::pair<double, double>> table_;
};

}  // namespace porder
