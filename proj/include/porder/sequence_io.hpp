#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "porder/error_sequence.hpp"

namespace porder {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& field, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + msg),
          line_(line), field_(field) {}
    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

inline std::string lambda_text(const LogError& e) { return e.is_exact_zero ? "inf" : e.lambda.to_string(); }

inline void write_csv(std::ostream& os, const ErrorSequence& seq) {
    os << "k,lambda,is_zero\n";
    for (const auto& e : seq.entries())
        os << e.k << ',' << lambda_text(e.err) << ',' << (e.err.is_exact_zero ? 1 : 0) << '\n';
}

inline nlohmann::json to_json(const ErrorSequence& seq) {
    nlohmann::json j;
    j["label"] = seq.label();
    if (!seq.meta().empty()) j["meta"] = seq.meta();
    auto& arr = j["entries"] = nlohmann::json::array();
    for (const auto& e : seq.entries())
        arr.push_back({{"k", e.k}, {"lambda", lambda_text(e.err)}, {"is_zero", e.err.is_exact_zero}});
    return j;
}

namespace detail {

inline long parse_k(const std::string& s, std::size_t line) {
    std::size_t pos = 0;
    long k = 0;
    try {
        k = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, "k", "not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw ParseError(line, "k", "not an integer: '" + s + "'");
    return k;
}

inline LogError parse_entry_error(const std::string& lambda, bool is_zero, std::size_t line) {
    if (is_zero) return LogError::exact_zero();
    try {
        return LogError::from_lambda(XReal(lambda));
    } catch (const NumericError&) {
        throw ParseError(line, "lambda", "malformed real: '" + lambda + "'");
    }
}

inline void push_checked(ErrorSequence& seq, long k, LogError err, std::size_t line) {
    try {
        seq.push(k, std::move(err));
    } catch (const RateError& e) {
        throw ParseError(line, "k", e.what());
    }
}

inline std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    return s.substr(i);
}

}  // namespace detail

inline ErrorSequence read_csv(std::istream& is, std::string label = {}) {
    ErrorSequence seq(std::move(label));
    std::string row;
    std::size_t line = 0;
    if (!std::getline(is, row)) throw ParseError(1, "header", "empty input");
    ++line;
    if (detail::trim(row) != "k,lambda,is_zero")
        throw ParseError(1, "header", "expected 'k,lambda,is_zero'");
    while (std::getline(is, row)) {
        ++line;
        row = detail::trim(row);
        if (row.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(row);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(detail::trim(c));
        if (cols.size() != 3) throw ParseError(line, "row", "expected 3 columns");
        long k = detail::parse_k(cols[0], line);
        if (cols[2] != "0" && cols[2] != "1") throw ParseError(line, "is_zero", "expected 0 or 1");
        detail::push_checked(seq, k, detail::parse_entry_error(cols[1], cols[2] == "1", line), line);
    }
    return seq;
}

inline ErrorSequence from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw ParseError(1, "entries", "expected an object with an 'entries' array");
    ErrorSequence seq(j.value("label", std::string{}));
    if (j.contains("meta") && j["meta"].is_string()) seq.set_meta(j["meta"].get<std::string>());
    std::size_t idx = 0;
    for (const auto& e : j["entries"]) {
        ++idx;
        if (!e.contains("k") || !e["k"].is_number_integer()) throw ParseError(idx, "k", "missing integer");
        bool zero = e.value("is_zero", false);
        std::string lam;
        if (!zero) {
            if (!e.contains("lambda")) throw ParseError(idx, "lambda", "missing");
            if (e["lambda"].is_string()) lam = e["lambda"].get<std::string>();
            else if (e["lambda"].is_number()) lam = e["lambda"].dump();
            else throw ParseError(idx, "lambda", "expected string or number");
        }
        detail::push_checked(seq, e["k"].get<long>(), detail::parse_entry_error(lam, zero, idx), idx);
    }
    return seq;
}

// Dispatches on extension: .json reads the JSON mirror, anything else CSV.
inline ErrorSequence load_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "path", "cannot open " + path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(0, "json", e.what());
        }
        return from_json(j);
    }
    return read_csv(in, path);
}

}  // namespace porder
