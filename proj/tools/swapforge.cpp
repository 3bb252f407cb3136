// Copyright 2026 The swapforge Authors
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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swapforge/commands.hpp"

int main(int argc, char **argv) {
    using namespace swapforge;

    CLI::App app{"swapforge: sequential entanglement-swapping simulator"};
    app.require_subcommand(1);

    std::string config;
    auto *run = app.add_subcommand("run", "Run one scenario and print the branch report");
    run->add_option("config", config, "Scenario configuration (JSON)")->required();

    auto *sweep = app.add_subcommand("sweep", "Sweep one round parameter and write CSV");
    sweep->add_option("config", config, "Scenario configuration (JSON)")->required();

    std::string povm_file;
    auto *classify = app.add_subcommand("classify", "Classify a measurement read from a file");
    classify->add_option("povm-file", povm_file, "Measurement file (JSON)")->required();

    std::vector<std::string> overrides;
    std::vector<std::string> skip;
    auto *verify = app.add_subcommand("verify", "Run the built-in self-check suite");
    verify->add_option("--tol-override", overrides, "Tolerance override key=value (repeatable)");
    verify->add_option("--skip", skip, "Criterion number or name to skip (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return cli::report_failure(std::cerr, "Usage", e.what(), cli::kInputError);
    }

    if (*run) return cli::cmd_run(config, std::cout, std::cerr);
    if (*sweep) return cli::cmd_sweep(config, std::cout, std::cerr);
    if (*classify) return cli::cmd_classify(povm_file, std::cout, std::cerr);
    return cli::cmd_verify(overrides, skip, std::cout, std::cerr);
}
