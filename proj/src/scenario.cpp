#include "percap/scenario.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "percap/errors.hpp"

namespace percap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

const json& require_field(const json& doc, const std::string& prefix, const char* key) {
    if (!doc.contains(key)) {
        fail(prefix + "." + key, "missing required field");
    }
    return doc.at(key);
}

double number_field(const json& value, const std::string& field) {
    if (!value.is_number()) {
        fail(field, "expected a number");
    }
    return value.get<double>();
}

arma::uword positive_int_field(const json& doc, const std::string& prefix, const char* key) {
    const json& value = require_field(doc, prefix, key);
    if (!value.is_number_integer() || value.get<long long>() < 1) {
        fail(prefix + "." + key, "expected a positive integer");
    }
    return static_cast<arma::uword>(value.get<long long>());
}

// Flat row-major array of nr x nt IEEE doubles.
arma::mat matrix_field(const json& value, const std::string& field, arma::uword nr, arma::uword nt) {
    if (!value.is_array()) {
        fail(field, "expected a row-major array of numbers");
    }
    if (value.size() != nr * nt) {
        fail(field, "expected " + std::to_string(nr * nt) + " entries (nr * nt), got " +
                        std::to_string(value.size()));
    }
    arma::mat out(nr, nt);
    for (arma::uword i = 0; i < nr; ++i) {
        for (arma::uword j = 0; j < nt; ++j) {
            out(i, j) = number_field(value.at(i * nt + j), field + "[" + std::to_string(i * nt + j) + "]");
        }
    }
    return out;
}

arma::vec vector_field(const json& value, const std::string& field, arma::uword n) {
    if (!value.is_array() || value.size() != n) {
        fail(field, "expected an array of " + std::to_string(n) + " numbers");
    }
    arma::vec out(n);
    for (arma::uword i = 0; i < n; ++i) {
        out(i) = number_field(value.at(i), field + "[" + std::to_string(i) + "]");
    }
    return out;
}

} // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::complexity: return "complexity";
        case ExperimentKind::bound_vs_mc: return "bound_vs_mc";
        case ExperimentKind::iwfa_vs_policies: return "iwfa_vs_policies";
        case ExperimentKind::iwfa_trace: return "iwfa_trace";
        case ExperimentKind::lemma4_check: return "lemma4_check";
    }
    return "unknown";
}

ChannelConfig channel_from_json(const json& doc, const std::string& prefix) {
    if (!doc.is_object()) {
        fail(prefix, "expected an object");
    }
    ChannelConfig config;
    config.nt = positive_int_field(doc, prefix, "nt");
    config.nr = positive_int_field(doc, prefix, "nr");

    const int descriptors = static_cast<int>(doc.contains("omega")) +
                            static_cast<int>(doc.contains("stats")) +
                            static_cast<int>(doc.contains("kronecker"));
    if (descriptors != 1) {
        fail(prefix, "exactly one of 'omega', 'stats' or 'kronecker' must be given");
    }

    try {
        if (doc.contains("omega")) {
            config.coupling =
                EigenmodeCoupling(matrix_field(doc.at("omega"), prefix + ".omega", config.nr, config.nt));
            config.stats = stats_from_coupling(config.coupling);
        } else if (doc.contains("stats")) {
            const json& stats = doc.at("stats");
            if (!stats.is_object()) {
                fail(prefix + ".stats", "expected an object with 'd' and 'm'");
            }
            config.stats = ChannelStats(
                matrix_field(require_field(stats, prefix + ".stats", "d"), prefix + ".stats.d",
                             config.nr, config.nt),
                matrix_field(require_field(stats, prefix + ".stats", "m"), prefix + ".stats.m",
                             config.nr, config.nt));
            config.coupling = coupling_from_stats(config.stats);
        } else {
            const json& kron = doc.at("kronecker");
            if (!kron.is_object()) {
                fail(prefix + ".kronecker", "expected an object");
            }
            arma::vec lr;
            arma::vec lt;
            if (kron.contains("alpha_t") || kron.contains("alpha_r")) {
                const double alpha_t =
                    number_field(require_field(kron, prefix + ".kronecker", "alpha_t"), prefix + ".kronecker.alpha_t");
                const double alpha_r =
                    number_field(require_field(kron, prefix + ".kronecker", "alpha_r"), prefix + ".kronecker.alpha_r");
                lt = constant_correlation_eigenvalues(config.nt, alpha_t);
                lr = constant_correlation_eigenvalues(config.nr, alpha_r);
            } else if (kron.contains("lambda_t") || kron.contains("lambda_r")) {
                lt = vector_field(require_field(kron, prefix + ".kronecker", "lambda_t"),
                                  prefix + ".kronecker.lambda_t", config.nt);
                lr = vector_field(require_field(kron, prefix + ".kronecker", "lambda_r"),
                                  prefix + ".kronecker.lambda_r", config.nr);
            } else {
                fail(prefix + ".kronecker", "expected either alpha_t/alpha_r or lambda_t/lambda_r");
            }
            config.kronecker = KroneckerSpec(lr, lt);
            config.coupling = kronecker_coupling(*config.kronecker);
            config.stats = stats_from_coupling(config.coupling);
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        fail(prefix, e.what());
    }

    if (config.coupling.nr() != config.nr || config.coupling.nt() != config.nt) {
        fail(prefix, "channel descriptor dimensions disagree with nt/nr");
    }
    return config;
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) {
        fail("scenario", "expected a JSON object");
    }
    Scenario scenario;
    scenario.channel = channel_from_json(require_field(doc, "scenario", "channel"), "channel");

    const std::string kind = [&] {
        const json& value = require_field(doc, "scenario", "experiment");
        if (!value.is_string()) {
            fail("scenario.experiment", "expected a string");
        }
        return value.get<std::string>();
    }();
    if (kind == "complexity") {
        scenario.experiment = ExperimentKind::complexity;
    } else if (kind == "bound_vs_mc") {
        scenario.experiment = ExperimentKind::bound_vs_mc;
    } else if (kind == "iwfa_vs_policies") {
        scenario.experiment = ExperimentKind::iwfa_vs_policies;
    } else if (kind == "iwfa_trace") {
        scenario.experiment = ExperimentKind::iwfa_trace;
    } else if (kind == "lemma4_check") {
        scenario.experiment = ExperimentKind::lemma4_check;
    } else {
        fail("scenario.experiment", "unknown experiment '" + kind + "'");
    }

    if (doc.contains("snr_db_grid")) {
        const json& grid = doc.at("snr_db_grid");
        if (!grid.is_array() || grid.empty()) {
            fail("scenario.snr_db_grid", "expected a nonempty array");
        }
        scenario.snr_db_grid.clear();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            scenario.snr_db_grid.push_back(
                number_field(grid.at(i), "scenario.snr_db_grid[" + std::to_string(i) + "]"));
        }
        for (std::size_t i = 1; i < scenario.snr_db_grid.size(); ++i) {
            if (scenario.snr_db_grid[i] <= scenario.snr_db_grid[i - 1]) {
                fail("scenario.snr_db_grid", "grid must be strictly increasing");
            }
        }
    } else {
        scenario.snr_db_grid = {2, 4, 6, 8, 10, 12, 14, 16};
    }

    if (doc.contains("mc_samples")) {
        const json& value = doc.at("mc_samples");
        if (!value.is_number_integer() || value.get<long long>() < 1) {
            fail("scenario.mc_samples", "expected a positive integer");
        }
        scenario.mc_samples = static_cast<std::size_t>(value.get<long long>());
    }
    const bool uses_mc = scenario.experiment == ExperimentKind::bound_vs_mc ||
                         scenario.experiment == ExperimentKind::iwfa_vs_policies ||
                         scenario.experiment == ExperimentKind::lemma4_check;
    if (uses_mc && scenario.mc_samples < 100) {
        fail("scenario.mc_samples", "Monte-Carlo experiments need at least 100 samples");
    }

    if (doc.contains("seed")) {
        const json& value = doc.at("seed");
        if (!value.is_number_integer()) {
            fail("scenario.seed", "expected an integer");
        }
        scenario.seed = value.get<std::uint64_t>();
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open scenario file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(doc);
}

} // namespace percap
