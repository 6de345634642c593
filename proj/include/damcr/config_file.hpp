#pragma once

// TOML-style config files: `[section]` headers followed by `key = value`
// lines. Sections are sim, lora, wifi, channel, power, routing and energy.
// Unknown sections or keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "damcr/model.hpp"

namespace damcr {

/// Applies the settings in `text` on top of default_config(30, AWGN, None)
/// and validates the result. If only `seeds` is given, `trials` follows its
/// length; if only `trials` is given, seeds default to 1..trials.
SimConfig parse_config(std::string_view text);

SimConfig load_config(const std::filesystem::path& path);

/// Writes every field. parse_config(format_config(c)) == c.
std::string format_config(const SimConfig& cfg);

}  // namespace damcr
