#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "percap/errors.hpp"
#include "percap/experiments.hpp"
#include "percap/scenario.hpp"

namespace {

constexpr const char* kUsage =
    "usage:\n"
    "  percap run <scenario.json> --out <path> [--seed S] [--samples K]\n"
    "  percap complexity --n A..B --out <path>\n"
    "\n"
    "  --out -   streams the CSV table to standard output\n";

struct CliArgs {
    std::string command;
    std::string scenario_path;
    std::string out_path;
    std::string n_range = "2..8";
    bool has_seed = false;
    std::uint64_t seed = 0;
    bool has_samples = false;
    std::size_t samples = 0;
};

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    if (argc < 2) {
        throw percap::ValidationError(std::string("missing command\n") + kUsage);
    }
    args.command = argv[1];
    int i = 2;
    if (args.command == "run") {
        if (i >= argc || argv[i][0] == '-') {
            throw percap::ValidationError("run: expected a scenario file path");
        }
        args.scenario_path = argv[i++];
    } else if (args.command != "complexity") {
        throw percap::ValidationError("unknown command '" + args.command + "'\n" + kUsage);
    }
    auto next_value = [&](const std::string& flag) -> std::string {
        if (i >= argc) {
            throw percap::ValidationError(flag + ": missing value");
        }
        return argv[i++];
    };
    while (i < argc) {
        const std::string flag = argv[i++];
        if (flag == "--out") {
            args.out_path = next_value(flag);
        } else if (flag == "--seed" && args.command == "run") {
            const std::string value = next_value(flag);
            try {
                args.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw percap::ValidationError("--seed: expected an integer");
            }
            args.has_seed = true;
        } else if (flag == "--samples" && args.command == "run") {
            long long v = 0;
            const std::string value = next_value(flag);
            try {
                v = std::stoll(value);
            } catch (const std::exception&) {
                throw percap::ValidationError("--samples: expected a positive integer");
            }
            if (v < 1) {
                throw percap::ValidationError("--samples: expected a positive integer");
            }
            args.has_samples = true;
            args.samples = static_cast<std::size_t>(v);
        } else if (flag == "--n" && args.command == "complexity") {
            args.n_range = next_value(flag);
        } else {
            throw percap::ValidationError("unknown option '" + flag + "'\n" + kUsage);
        }
    }
    if (args.out_path.empty()) {
        throw percap::ValidationError("--out is required ('-' for standard output)");
    }
    return args;
}

std::vector<int> parse_n_range(const std::string& text) {
    int lo = 0;
    int hi = 0;
    const std::size_t dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(text);
        } else {
            lo = std::stoi(text.substr(0, dots));
            hi = std::stoi(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw percap::ValidationError("--n: expected A..B or a single integer");
    }
    if (lo > hi || lo < 2 || hi > 8) {
        throw percap::ValidationError("--n: range must lie within 2..8");
    }
    std::vector<int> grid;
    for (int n = lo; n <= hi; ++n) {
        grid.push_back(n);
    }
    return grid;
}

int run(const CliArgs& args) {
    std::ostringstream table;
    if (args.command == "complexity") {
        percap::run_complexity(parse_n_range(args.n_range), table);
    } else {
        percap::Scenario scenario = percap::load_scenario(args.scenario_path);
        if (args.has_seed) {
            scenario.seed = args.seed;
        }
        if (args.has_samples) {
            scenario.mc_samples = args.samples;
        }
        percap::run_experiment(scenario, table);
    }

    if (args.out_path == "-") {
        std::cout << table.str();
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) {
            throw percap::ValidationError("cannot open output file '" + args.out_path + "'");
        }
        out << table.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(parse_args(argc, argv));
    } catch (const percap::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 2;
    }
}
