#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modeprobe/errors.hpp"
#include "modeprobe/pipeline.hpp"

int main(int argc, char** argv) {
    std::string scenario_list;
    for (const std::string& name : modeprobe::scenario_names()) {
        if (!scenario_list.empty()) scenario_list += ", ";
        scenario_list += name;
    }

    CLI::App app{"scattered-mode deformation toolkit"};
    std::string scenario;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;

    app.add_option("scenario", scenario, "one of: " + scenario_list)->required();
    app.add_option("--config", config_path, "JSON config file with flat dotted keys")
        ->required();
    CLI::Option* out_opt =
        app.add_option("--out", out_path, "output CSV path, overrides output_path");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides seed");
    app.add_option("--set", overrides, "key=value config override, repeatable")
        ->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!modeprobe::is_scenario(scenario)) {
            throw modeprobe::ConfigInvalid("unknown scenario '" + scenario +
                                           "', expected one of: " + scenario_list);
        }
        const nlohmann::json overlay = modeprobe::RunConfig::parse_file(config_path);
        modeprobe::RunConfig config =
            modeprobe::RunConfig::resolve(scenario, overlay, overrides);
        if (out_opt->count() > 0) {
            config.set("output_path", nlohmann::json(out_path));
        }
        if (seed_opt->count() > 0) {
            config.set("seed", nlohmann::json(seed));
        }
        for (const std::string& warning : modeprobe::validate(config)) {
            std::cerr << "warning: " << warning << '\n';
        }
        for (const std::string& path : modeprobe::run_scenario(config)) {
            std::cout << path << '\n';
        }
        return 0;
    } catch (const modeprobe::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const modeprobe::IOFailure& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const modeprobe::Error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
