#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "porder/experiments.hpp"
#include "porder/porder.hpp"

namespace fs = std::filesystem;
using porder::json;

namespace {

enum Exit { ok = 0, tolerance_failure = 1, config_error = 2, internal_error = 3 };

json parse_assignment(const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw porder::ConfigError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), text = kv.substr(eq + 1);
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) v = text;
    return {{key, v}};
}

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw porder::ConfigError("cannot open config file " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw porder::ConfigError("config file must hold a JSON object");
    return j;
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

int cmd_list() {
    for (const auto& e : porder::registry()) {
        std::cout << std::left << std::setw(24) << e.name << e.figure << ": " << e.description << '\n';
        for (auto it = e.defaults.begin(); it != e.defaults.end(); ++it)
            std::cout << "    " << it.key() << " = " << it.value().dump() << '\n';
    }
    return ok;
}

int cmd_run(const std::string& name, const std::vector<std::string>& sets, const std::string& config,
            const std::string& out_dir, const std::string& format) {
    porder::ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.format = porder::parse_format(format);
    cfg.out_dir = out_dir;
    if (!config.empty()) cfg.overrides = read_config(config);
    for (const auto& s : sets) cfg.overrides.update(parse_assignment(s));

    auto rep = porder::run_experiment(cfg);
    const fs::path dir = fs::path(out_dir) / rep.experiment;
    for (const auto& a : rep.artifacts) write_file(dir / a.path, a.content);
    write_file(dir / "report.json", porder::to_json(rep).dump(2) + "\n");

    for (const auto& r : rep.runs) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << r.name << " measured "
                  << std::setprecision(6) << r.measured << "  predicted " << r.predicted << "  gap " << r.gap;
        if (!r.reason.empty()) std::cout << "  (" << r.reason << ")";
        std::cout << '\n';
    }
    std::cout << "report: " << (dir / "report.json").string() << '\n';
    return rep.pass() ? ok : tolerance_failure;
}

int cmd_classify(const std::string& file, long burn_in) {
    auto seq = porder::load_sequence(file);
    porder::ClassifyConfig cfg;
    cfg.window.burn_in = burn_in;
    std::cout << porder::to_json(porder::classify_psi(seq, cfg)).dump(2) << '\n';
    return ok;
}

int cmd_charroot(int K, double nu) {
    const double q = porder::char_root(K, nu);
    std::cout << std::setprecision(15) << q << '\n';
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convergence-order experiments in extended precision"};
    app.require_subcommand(1);

    app.add_subcommand("list", "List experiments and their parameters");

    auto* run = app.add_subcommand("run", "Run one experiment and write its artifacts");
    std::string name, config, out_dir = "results", format = "csv";
    std::vector<std::string> sets;
    run->add_option("name", name, "Experiment name")->required();
    run->add_option("--set", sets, "Parameter override key=value (repeatable)");
    run->add_option("--config", config, "JSON file with parameter overrides");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--format", format, "Sequence artifact format: csv, json or both");

    auto* cls = app.add_subcommand("classify", "Classify an error sequence stored as CSV or JSON");
    std::string file;
    long burn_in = 5;
    cls->add_option("file", file, "Sequence file")->required();
    cls->add_option("--burn-in", burn_in, "Entries skipped at the start");

    auto* cr = app.add_subcommand("charroot", "Root of q^K = q^(K-1) + ... + q + nu");
    int K = 2;
    double nu = 1.0;
    cr->add_option("-K", K, "Number of interpolation points")->required();
    cr->add_option("--nu", nu, "Hoelder exponent in (0, 1]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        if (app.got_subcommand("list")) return cmd_list();
        if (run->parsed()) return cmd_run(name, sets, config, out_dir, format);
        if (cls->parsed()) return cmd_classify(file, burn_in);
        if (cr->parsed()) return cmd_charroot(K, nu);
    } catch (const porder::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const porder::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return config_error;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return internal_error;
    }
    return internal_error;
}
