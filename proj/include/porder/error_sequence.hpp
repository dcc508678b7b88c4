#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "porder/log_error.hpp"

namespace porder {

enum class RateErrc { insufficient_data, invalid_sequence, domain };

class RateError : public std::runtime_error {
public:
    RateError(RateErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    RateErrc code() const noexcept { return code_; }

private:
    RateErrc code_;
};

struct SeqEntry {
    long k;
    LogError err;
};

class ErrorSequence {
public:
    ErrorSequence() = default;
    explicit ErrorSequence(std::string label) : label_(std::move(label)) {}

    void push(long k, LogError err) {
        if (k < 0) throw RateError(RateErrc::invalid_sequence, "negative iteration index");
        if (!entries_.empty()) {
            if (k <= entries_.back().k)
                throw RateError(RateErrc::invalid_sequence, "k must be strictly increasing");
            if (entries_.back().err.is_exact_zero)
                throw RateError(RateErrc::invalid_sequence, "exact zero must be the last entry");
        }
        entries_.push_back({k, std::move(err)});
    }
    void push_lambda(long k, XReal lambda) { push(k, LogError::from_lambda(std::move(lambda))); }

    const std::vector<SeqEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const SeqEntry& operator[](std::size_t i) const { return entries_[i]; }
    const SeqEntry& back() const { return entries_.back(); }
    bool terminated_exactly() const { return !entries_.empty() && entries_.back().err.is_exact_zero; }

    const std::string& label() const { return label_; }
    void set_label(std::string s) { label_ = std::move(s); }
    const std::string& meta() const { return meta_; }
    void set_meta(std::string s) { meta_ = std::move(s); }

    // Indices i where lambda does not increase from entry i-1 to entry i.
    std::vector<std::size_t> nonmonotone_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            const auto& a = entries_[i - 1].err;
            const auto& b = entries_[i].err;
            if (a.is_exact_zero || b.is_exact_zero) continue;
            if (!(b.lambda > a.lambda)) out.push_back(i);
        }
        return out;
    }

private:
    std::vector<SeqEntry> entries_;
    std::string label_;
    std::string meta_;
};

// Which entries the estimators consume: k >= burn_in, exact zeros excluded,
// then the last `last` of those (0 means half, but at least min_points).
struct TailWindow {
    long burn_in = 5;
    std::size_t last = 0;
    std::size_t min_points = 8;
};

inline std::vector<const SeqEntry*> usable_entries(const ErrorSequence& seq, long burn_in) {
    std::vector<const SeqEntry*> out;
    for (const auto& e : seq.entries())
        if (e.k >= burn_in && !e.err.is_exact_zero) out.push_back(&e);
    return out;
}

inline std::vector<const SeqEntry*> tail_entries(const ErrorSequence& seq, const TailWindow& w) {
    auto all = usable_entries(seq, w.burn_in);
    std::size_t n = w.last;
    if (n == 0) n = std::max(all.size() / 2, w.min_points);
    if (n >= all.size()) return all;
    return {all.end() - static_cast<std::ptrdiff_t>(n), all.end()};
}

}  // namespace porder
