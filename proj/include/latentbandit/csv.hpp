#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "latentbandit/sim.hpp"

namespace latentbandit {

inline constexpr std::string_view kCurveCsvHeader =
    "policy,graph,t,mean_cum_regret,std_cum_regret,trials";
inline constexpr std::string_view kRawCsvHeader = "policy,graph,trial,t,cum_regret";

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_curve_csv(std::ostream& os, std::string_view policy, std::string_view graph,
                            const AggregateCurve& curve) {
  os << kCurveCsvHeader << '\n';
  const std::string p = csv_field(policy);
  const std::string g = csv_field(graph);
  for (std::size_t t = 0; t < curve.mean.size(); ++t) {
    os << p << ',' << g << ',' << (t + 1) << ',' << format_real(curve.mean[t]) << ','
       << format_real(curve.stddev[t]) << ',' << curve.trials << '\n';
  }
}

inline void write_raw_csv(std::ostream& os, std::string_view policy, std::string_view graph,
                          const std::vector<RegretTrace>& traces) {
  os << kRawCsvHeader << '\n';
  const std::string p = csv_field(policy);
  const std::string g = csv_field(graph);
  for (const auto& tr : traces)
    for (std::size_t t = 0; t < tr.cum_regret.size(); ++t)
      os << p << ',' << g << ',' << tr.trial_id << ',' << (t + 1) << ','
         << format_real(tr.cum_regret[t]) << '\n';
}

/// Writes via a temporary sibling and renames it into place, so a failed run
/// never leaves a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
  }
}

/// `r.csv` -> `r.raw.csv`
inline std::filesystem::path raw_path_for(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  const std::string ext = p.extension().string();
  p.replace_extension();
  p += ".raw" + (ext.empty() ? std::string(".csv") : ext);
  return p;
}

}  // namespace latentbandit
