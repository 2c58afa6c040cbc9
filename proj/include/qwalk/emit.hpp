#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/observables.hpp"

namespace qwalk {

/// Shortest decimal that reads back to the same double (at most 17
/// significant digits). -0 prints as 0.
std::string format_number(double x);

/// Running means Obar(t) = sum_{s<=t} O(s) / (t + 1).
std::vector<double> running_time_average(std::span<const double> winning);

/// Header "step,O,O_timeavg", one row per step; header only when empty.
void write_series_csv(std::ostream& out, std::span<const double> winning, std::span<const double> time_average);
/// Header "n,P", one row per lattice site.
void write_distribution_csv(std::ostream& out, const MomentumDistributiond& dist);

nlohmann::json series_json(std::span<const double> winning, std::span<const double> time_average);
nlohmann::json distribution_json(const MomentumDistributiond& dist);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qwalk
