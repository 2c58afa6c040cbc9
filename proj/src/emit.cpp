#include "qwalk/emit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qwalk/errors.hpp"

namespace qwalk {

std::string format_number(double x) {
  if (x == 0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<double> running_time_average(std::span<const double> winning) {
  std::vector<double> out;
  out.reserve(winning.size());
  RunningAverage<double> avg;
  for (double o : winning) out.push_back(avg.push(o));
  return out;
}

void write_series_csv(std::ostream& out, std::span<const double> winning, std::span<const double> time_average) {
  if (winning.size() != time_average.size()) throw InvalidArgument("series columns differ in length");
  out << "step,O,O_timeavg\n";
  for (std::size_t t = 0; t < winning.size(); ++t) {
    out << t << ',' << format_number(winning[t]) << ',' << format_number(time_average[t]) << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const MomentumDistributiond& dist) {
  out << "n,P\n";
  const int L = dist.half_width();
  for (int n = -L; n <= L; ++n) out << n << ',' << format_number(dist(n)) << '\n';
}

nlohmann::json series_json(std::span<const double> winning, std::span<const double> time_average) {
  if (winning.size() != time_average.size()) throw InvalidArgument("series columns differ in length");
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t t = 0; t < winning.size(); ++t) steps.push_back(t);
  return {{"step", steps},
          {"O", std::vector<double>(winning.begin(), winning.end())},
          {"O_timeavg", std::vector<double>(time_average.begin(), time_average.end())}};
}

nlohmann::json distribution_json(const MomentumDistributiond& dist) {
  const int L = dist.half_width();
  std::vector<int> n;
  std::vector<double> p;
  for (int i = -L; i <= L; ++i) {
    n.push_back(i);
    p.push_back(dist(i) == 0 ? 0.0 : dist(i));
  }
  return {{"n", n}, {"P", p}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace qwalk
