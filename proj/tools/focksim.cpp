// Copyright 2026 The focksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// focksim run <config|experiment> [key=value...]
// focksim validate <config> [key=value...]
// focksim list

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "focksim/experiments.hpp"

namespace {

namespace cli = focksim::cli;

// A bare experiment name stands for an empty config of that experiment.
cli::ExperimentConfig load(const std::string& source, const std::vector<std::string>& overrides) {
    cli::ExperimentConfig c;
    if (!std::filesystem::exists(source) && cli::find_experiment(source)) c.experiment = source;
    else c = cli::load_config(source);
    for (const auto& o : overrides) cli::apply_override(c, o);
    return c;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const cli::ConfigError& e) {
        std::cerr << "focksim: config error: " << e.what() << '\n';
        return 2;
    } catch (const cli::NumericError& e) {
        std::cerr << "focksim: numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "focksim: error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"focksim: few-photon Fock-space experiments"};
    app.require_subcommand(1);

    std::string source;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "run an experiment and write its CSV and .meta files");
    run->add_option("config", source, "config file or experiment name")->required();
    run->add_option("overrides", overrides, "key=value parameter overrides");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", source, "config file or experiment name")->required();
    validate->add_option("overrides", overrides, "key=value parameter overrides");

    app.add_subcommand("list", "print experiment names and parameter schemas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand("list")) {
        std::cout << cli::describe_experiments();
        return 0;
    }
    if (app.got_subcommand(validate)) {
        return guarded([&] {
            cli::resolve(load(source, overrides));
            std::cout << "ok\n";
        });
    }
    return guarded([&] {
        const auto r = cli::run(load(source, overrides));
        std::cout << r.output.string() << '\n';
    });
}
