#ifndef MDSEG_REPORT_HPP
#define MDSEG_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdseg/bench.hpp"
#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/evalmetrics.hpp"
#include "mdseg/optimizer.hpp"

namespace mdseg {

using json = nlohmann::ordered_json;

struct RunReport {
  std::string input;
  std::string mode;
  SegConfig config;
  std::vector<SweepStats> sweeps;
  std::optional<double> final_distance;  // absent if the mask left a side empty
  std::optional<double> dsc;
  std::size_t patches = 0;
  std::map<std::string, double> timings;  // seconds
  std::uint64_t seed = 0;
};

inline bool operator==(const SweepStats& a, const SweepStats& b) {
  return a.sweep_index == b.sweep_index && a.L_before == b.L_before && a.L_after == b.L_after &&
         a.moved_1to2 == b.moved_1to2 && a.moved_2to1 == b.moved_2to1 && a.elapsed == b.elapsed;
}

inline json config_to_json(const SegConfig& c) {
  json j;
  j["p1"] = c.p1;
  j["p2"] = c.p2;
  j["netgain"] = to_string(c.netgain_mode);
  j["tset"] = to_string(c.tset_mode);
  j["init"] = to_string(c.init);
  j["seed"] = c.init_seed;
  j["max_sweeps"] = c.max_sweeps;
  j["patch_len"] = c.patch_len ? json(*c.patch_len) : json(nullptr);
  j["stride"] = c.stride;
  j["vote_threshold"] = c.vote_threshold;
  j["median_window"] = c.median_window;
  j["acceleration"] = to_string(c.accel);
  return j;
}

inline SegConfig config_from_json(const json& j) {
  SegConfig c;
  c.p1 = j.at("p1").get<double>();
  c.p2 = j.at("p2").get<double>();
  c.netgain_mode = parse_netgain_mode(j.at("netgain").get<std::string>());
  c.tset_mode = parse_tset_mode(j.at("tset").get<std::string>());
  c.init = parse_init_mode(j.at("init").get<std::string>());
  c.init_seed = j.at("seed").get<std::uint64_t>();
  c.max_sweeps = j.at("max_sweeps").get<std::size_t>();
  if (!j.at("patch_len").is_null()) c.patch_len = j.at("patch_len").get<std::size_t>();
  c.stride = j.at("stride").get<std::size_t>();
  c.vote_threshold = j.at("vote_threshold").get<double>();
  c.median_window = j.at("median_window").get<std::size_t>();
  c.accel = parse_acceleration(j.at("acceleration").get<std::string>());
  return c;
}

inline bool operator==(const SegConfig& a, const SegConfig& b) { return config_to_json(a) == config_to_json(b); }

inline bool operator==(const RunReport& a, const RunReport& b) {
  return a.input == b.input && a.mode == b.mode && a.config == b.config && a.sweeps == b.sweeps &&
         a.final_distance == b.final_distance && a.dsc == b.dsc && a.patches == b.patches &&
         a.timings == b.timings && a.seed == b.seed;
}

inline json to_json(const RunReport& r) {
  json j;
  j["input"] = r.input;
  j["mode"] = r.mode;
  j["config"] = config_to_json(r.config);
  j["seed"] = r.seed;
  json sweeps = json::array();
  for (const SweepStats& s : r.sweeps) {
    sweeps.push_back({{"sweep", s.sweep_index},
                      {"L_before", s.L_before},
                      {"L_after", s.L_after},
                      {"moved_1to2", s.moved_1to2},
                      {"moved_2to1", s.moved_2to1},
                      {"elapsed", s.elapsed}});
  }
  j["sweeps"] = std::move(sweeps);
  j["final_distance"] = r.final_distance ? json(*r.final_distance) : json(nullptr);
  j["dsc"] = r.dsc ? json(*r.dsc) : json(nullptr);
  j["patches"] = r.patches;
  j["timings"] = r.timings;
  return j;
}

inline RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    r.input = j.at("input").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const json& s : j.at("sweeps")) {
      SweepStats st;
      st.sweep_index = s.at("sweep").get<std::size_t>();
      st.L_before = s.at("L_before").get<double>();
      st.L_after = s.at("L_after").get<double>();
      st.moved_1to2 = s.at("moved_1to2").get<std::size_t>();
      st.moved_2to1 = s.at("moved_2to1").get<std::size_t>();
      st.elapsed = s.at("elapsed").get<double>();
      r.sweeps.push_back(st);
    }
    if (!j.at("final_distance").is_null()) r.final_distance = j.at("final_distance").get<double>();
    if (!j.at("dsc").is_null()) r.dsc = j.at("dsc").get<double>();
    r.patches = j.at("patches").get<std::size_t>();
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw MalformedHeader(std::string("bad report: ") + e.what());
  }
}

inline std::string serialize(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

inline RunReport parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedHeader(std::string("report is not JSON: ") + e.what());
  }
  return report_from_json(j);
}

// --- CSV ---------------------------------------------------------------

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

inline std::string fmt_real(double v, int precision = 17) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

inline std::string landscape_csv(const std::vector<ChainPoint>& pts) {
  std::ostringstream os;
  write_csv_row(os, {"offset", "L"});
  for (const ChainPoint& p : pts) write_csv_row(os, {std::to_string(p.offset), fmt_real(p.L_value)});
  return os.str();
}

inline std::string bench_csv(const std::vector<BenchRecord>& recs) {
  std::ostringstream os;
  write_csv_row(os, {"mode", "L", "T", "N", "T1", "T1/L", "T1/L^2", "T1/L^3", "T1/L^4", "timed"});
  for (const BenchRecord& r : recs) {
    write_csv_row(os, {std::string(to_string(r.accel)), std::to_string(r.L), fmt_real(r.T, 6), std::to_string(r.N),
                       fmt_real(r.T1_display(), 6), fmt_real(r.ratio_display(1), 6), fmt_real(r.ratio_display(2), 6),
                       fmt_real(r.ratio_display(3), 6), fmt_real(r.ratio_display(4), 6), std::to_string(r.timed)});
  }
  return os.str();
}

}  // namespace mdseg

#endif  // MDSEG_REPORT_HPP
