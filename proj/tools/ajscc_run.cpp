// ajscc_run <experiment> [--seed N] [--config FILE] [--out DIR] [--set key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ajscc/experiments.hpp"

namespace {

ajscc::Settings parse_set_flags(const std::vector<std::string>& items) {
    ajscc::Settings out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ajscc::ConfigError("--set expects key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Runs one AJSCC link experiment and writes CSV tables with manifests."};
    std::string experiment;
    std::uint64_t seed = 1;
    std::string config_file;
    std::string out_dir = ".";
    std::vector<std::string> sets;

    std::vector<std::string> names(ajscc::experiment_names.begin(), ajscc::experiment_names.end());
    app.add_option("experiment", experiment, "Experiment to run")->required()->check(CLI::IsMember(names));
    auto* seed_opt = app.add_option("--seed", seed, "Base RNG seed");
    app.add_option("--config", config_file, "Flat key = value settings file (a manifest works)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", sets, "Override one setting, key=value")->take_all();
    CLI11_PARSE(app, argc, argv);

    try {
        ajscc::ExperimentSpec spec;
        spec.name = experiment;
        spec.output_dir = out_dir;
        if (!config_file.empty()) {
            auto file = ajscc::load_settings_file(config_file);
            if (auto it = file.find("experiment"); it != file.end()) {
                if (it->second != experiment)
                    throw ajscc::ConfigError("config file is for experiment '" + it->second + "'");
                file.erase(it);
            }
            if (auto it = file.find("seed"); it != file.end()) {
                seed = ajscc::detail::parse_uint("seed", it->second);
                file.erase(it);
            }
            file.erase("version");
            spec.overrides = std::move(file);
        }
        if (seed_opt->count() > 0) seed = seed_opt->as<std::uint64_t>();
        spec.seed = seed;
        for (auto& [k, v] : parse_set_flags(sets)) spec.overrides[k] = v;

        for (const auto& path : ajscc::run_experiment(spec)) std::cout << path.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
