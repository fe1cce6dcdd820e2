#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "swiptsec/experiment.hpp"

// Configuration parsing: INI-style key/value text with optional
// [scenario], [sweep], and [region] sections. Keys outside any
// section belong to the scenario. Every key is optional; an empty
// document yields the full default scenario.

namespace swiptsec::expcli {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message)
        : std::runtime_error(message) {}
};

struct ParsedConfig {
    linkmodel::Scenario scenario;
    std::size_t trials = 100000;
    std::uint64_t seed = 12345;
    secrecy::BetaInterpretation beta_interpretation =
        secrecy::BetaInterpretation::ComplementPair;
    std::optional<SweepConfig> sweep;
    std::optional<RegionConfig> region;
};

// Table-1 default scenario (Rician family on both links).
linkmodel::Scenario default_scenario();

// Parse configuration text. Unknown keys/sections, malformed values,
// and out-of-range values raise ConfigError naming the key path.
ParsedConfig parse_config(const std::string& text);

// Extract the sweep/region blocks; ConfigError if the block is absent.
SweepConfig sweep_config(const ParsedConfig& parsed);
RegionConfig region_config(const ParsedConfig& parsed);

// Default 20-point region grid rho = i/21, i = 1..20.
std::vector<double> default_rho_grid();

}  // namespace swiptsec::expcli
