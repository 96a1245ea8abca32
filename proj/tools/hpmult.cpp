#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpmult/hpmult.hpp"

namespace {

struct Flags {
    std::string command, config, out, n, lambda, quad, symbol, jmin, jmax, orders, axis, lambdas, seed, tol_id, tol_quad,
        tol_transfer;
    std::vector<std::string> params;
    bool transfer = false;
    bool corrupt = false;
};

void overlay(hpmult::RawConfig& raw, const std::string& key, const std::string& value) {
    if (!value.empty()) raw[key] = value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hermite pseudo-multiplier experiments"};
    Flags f;
    app.add_option("command", f.command, "verify | decay | cks | normsweep | transfer");
    app.add_option("--config", f.config, "flat key = value config file");
    app.add_option("--out", f.out, "output directory");
    app.add_option("--n", f.n, "dimension");
    app.add_option("--lambda", f.lambda, "truncation degree");
    app.add_option("--quad", f.quad, "Gauss-Hermite nodes per axis (0: 2*lambda+16)");
    app.add_option("--symbol", f.symbol, "symbol registry key");
    app.add_option("--param", f.params, "symbol parameter k=v (repeatable)");
    app.add_option("--jmin", f.jmin, "first block index");
    app.add_option("--jmax", f.jmax, "last block index");
    app.add_option("--orders", f.orders, "highest by-parts order (verify) or moment order (decay)");
    app.add_option("--axis", f.axis, "coordinate axis");
    app.add_option("--lambdas", f.lambdas, "comma separated truncation degrees (normsweep)");
    app.add_option("--seed", f.seed, "seed for random points and coefficients");
    app.add_option("--tol-id", f.tol_id, "pointwise identity tolerance");
    app.add_option("--tol-quad", f.tol_quad, "quadrature-backed identity tolerance");
    app.add_option("--tol-transfer", f.tol_transfer, "transfer equality tolerance");
    app.add_flag("--transfer", f.transfer, "normsweep through the Gaussian-basis matrix");
    app.add_flag("--corrupt-coefficient", f.corrupt, "test hook: perturb one by-parts coefficient");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hpmult::kExitConfig;
    }

    hpmult::ExperimentConfig cfg;
    try {
        hpmult::RawConfig raw;
        if (!f.config.empty()) raw = hpmult::read_config_file(f.config);
        overlay(raw, "command", f.command);
        overlay(raw, "out", f.out);
        overlay(raw, "n", f.n);
        overlay(raw, "lambda", f.lambda);
        overlay(raw, "quad", f.quad);
        overlay(raw, "symbol", f.symbol);
        overlay(raw, "jmin", f.jmin);
        overlay(raw, "jmax", f.jmax);
        overlay(raw, "orders", f.orders);
        overlay(raw, "axis", f.axis);
        overlay(raw, "lambdas", f.lambdas);
        overlay(raw, "seed", f.seed);
        overlay(raw, "tol_id", f.tol_id);
        overlay(raw, "tol_quad", f.tol_quad);
        overlay(raw, "tol_transfer", f.tol_transfer);
        if (f.transfer) raw["transfer"] = "1";
        if (f.corrupt) raw["corrupt_coefficient"] = "1";
        for (const auto& p : f.params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw hpmult::ConfigError("--param expects k=v, got '" + p + "'");
            raw["param." + p.substr(0, eq)] = p.substr(eq + 1);
        }
        cfg = hpmult::resolve_config(raw);
    } catch (const hpmult::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return hpmult::kExitConfig;
    }

    const auto res = hpmult::run_experiment(cfg);
    try {
        std::filesystem::create_directories(cfg.out);
        hpmult::write_text((std::filesystem::path(cfg.out) / "report.json").string(), hpmult::to_json_text(res.report));
        for (const auto& [name, text] : res.files) hpmult::write_text((std::filesystem::path(cfg.out) / name).string(), text);
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return hpmult::kExitConfig;
    }
    if (res.report.contains("error")) std::cerr << res.report["error"]["kind"].get<std::string>() << " error: "
                                                << res.report["error"]["message"].get<std::string>() << "\n";
    if (res.report.contains("failing"))
        for (const auto& name : res.report["failing"]) std::cerr << "failed: " << name.get<std::string>() << "\n";
    std::cout << cfg.command << ": exit " << res.exit_code << " (" << cfg.out << "/report.json)\n";
    return res.exit_code;
}
