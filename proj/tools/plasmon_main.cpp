#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "plasmon/config.hpp"
#include "plasmon/errors.hpp"
#include "plasmon/parallel.hpp"
#include "plasmon/runner.hpp"
#include "plasmon/version.hpp"

namespace {

void apply_threads(const std::string& threads) {
    if (threads == "auto") {
        plasmon::set_thread_count(0);
        return;
    }
    int n = 0;
    try {
        std::size_t pos = 0;
        n = std::stoi(threads, &pos);
        if (pos != threads.size()) n = 0;
    } catch (const std::exception&) {
        n = 0;
    }
    if (n < 1) throw plasmon::ConfigError("--threads expects a positive integer or 'auto'");
    plasmon::set_thread_count(n);
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_path;
    std::string output;
    std::string threads = "auto";
    bool quiet = false;

    CLI::App app{"plasmonic resonance toolkit"};
    app.set_version_flag("--version", plasmon::version_string);
    app.add_option("--config", config_path, "path to a JSON run configuration")->required();
    app.add_option("--output", output, "output directory (overrides the config's output_dir)");
    app.add_option("--threads", threads, "worker thread count, or 'auto'");
    app.add_flag("--quiet", quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_threads(threads);
        plasmon::RunConfig cfg = plasmon::parse_config(config_path);
        if (!output.empty()) cfg.output_dir = output;
        plasmon::Runner runner(std::move(cfg), quiet);
        runner.run();
        return 0;
    } catch (const plasmon::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const plasmon::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
