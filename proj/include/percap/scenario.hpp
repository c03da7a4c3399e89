#ifndef PERCAP_SCENARIO_HPP
#define PERCAP_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "percap/channel.hpp"

namespace percap {

enum class ExperimentKind {
    complexity,
    bound_vs_mc,
    iwfa_vs_policies,
    iwfa_trace,
    lemma4_check,
};

std::string to_string(ExperimentKind kind);

// A channel descriptor resolved from JSON: the coupling is always available;
// sampling statistics fall back to (d = 0, m = sqrt(omega)) when the document
// does not provide them; the Kronecker spec is kept when given.
struct ChannelConfig {
    arma::uword nt = 0;
    arma::uword nr = 0;
    EigenmodeCoupling coupling{arma::mat(1, 1, arma::fill::ones)};
    ChannelStats stats{arma::mat(1, 1, arma::fill::zeros), arma::mat(1, 1, arma::fill::ones)};
    std::optional<KroneckerSpec> kronecker;
};

struct Scenario {
    ChannelConfig channel;
    std::vector<double> snr_db_grid;
    std::size_t mc_samples = 20000;
    std::uint64_t seed = 42;
    ExperimentKind experiment = ExperimentKind::bound_vs_mc;
};

// Parsers throw ValidationError with messages naming the offending field.
ChannelConfig channel_from_json(const nlohmann::json& doc, const std::string& prefix = "channel");
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

} // namespace percap

#endif
