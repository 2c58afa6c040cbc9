#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qwalk/config.hpp"

namespace qwalk {

struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& presets();
bool is_preset(std::string_view name);
/// Throws ConfigError(kUnknownPreset) for names not in presets().
RunConfig make_preset(std::string_view name);

/// Coin sets used by the presets, in degrees.
namespace coins {
CoinDegrees original_a();
CoinDegrees original_b();
CoinDegrees zero_alpha_a();
CoinDegrees zero_alpha_b();
CoinDegrees shifted_alpha_b();
CoinDegrees optimized_a();
}  // namespace coins

}  // namespace qwalk
