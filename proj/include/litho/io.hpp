#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/model.hpp"

namespace litho {

constexpr double kMissingSentinel = -999.25;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("cannot parse number '" + s + "' in " + what);
  }
}

}  // namespace detail

// Endpoint file: comment header declaring the curve order, then one
// component per record: name, family, d endpoint values.
//
//   # curves: GR:API,RHOB:G/C3,NPHI:V/V,PEF:B/E
//   Quartz,Sand,2,2.65,-0.02,1.81
inline EndpointTable load_endpoint_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open endpoint file: " + path);
  std::vector<CurveDesc> curves;
  std::vector<ComponentSpec> comps;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "curves:";
      const auto pos = line.find(key);
      if (pos != std::string::npos) {
        for (const auto& tok : detail::split(line.substr(pos + key.size()), ',')) {
          const auto nv = detail::split(tok, ':');
          CurveDesc c;
          c.name = nv[0];
          c.unit = nv.size() > 1 ? nv[1] : "";
          curves.push_back(c);
        }
      }
      continue;
    }
    if (curves.empty()) throw IoError("endpoint file: data before '# curves:' header");
    const auto f = detail::split(line, ',');
    if (f.size() != 2 + curves.size())
      throw IoError("endpoint file: bad field count in '" + line + "'");
    ComponentSpec c;
    c.name = f[0];
    c.family = family_from_name(f[1]);
    for (std::size_t i = 0; i < curves.size(); ++i)
      c.endpoints.push_back(detail::parse_double(f[2 + i], path));
    comps.push_back(c);
  }
  if (comps.empty()) throw IoError("endpoint file: no components: " + path);
  return EndpointTable(curves, comps);
}

inline void save_endpoint_table(const EndpointTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write endpoint file: " + path);
  out << "# curves:";
  for (std::size_t i = 0; i < table.num_curves(); ++i)
    out << (i ? "," : " ") << table.curves()[i].name << ":" << table.curves()[i].unit;
  out << "\n";
  for (const auto& c : table.components()) {
    out << c.name << "," << family_name(c.family);
    for (double e : c.endpoints) out << "," << e;
    out << "\n";
  }
}

// A parsed well: depth column plus named curves. Rows with a missing
// required value are kept but flagged, so reports can count them.
struct WellTable {
  std::vector<double> depths;
  std::vector<CurveDesc> curves;
  std::vector<LogVector> rows;       // aligned with depths
  std::vector<char> row_missing;     // any required curve missing
  std::size_t missing_rows = 0;

  // The usable subset as a LayerLogs over [start, end) row indices.
  LayerLogs slice(std::size_t start, std::size_t end) const {
    LayerLogs l;
    l.curves = curves;
    for (std::size_t i = start; i < end; ++i) {
      if (row_missing[i]) continue;
      l.depths.push_back(depths[i]);
      l.samples.push_back(rows[i]);
    }
    return l;
  }
};

// CSV log file: header DEPT,<curve>... with an optional '# units: ...'
// comment line. Missing values are empty fields or the -999.25 sentinel.
inline WellTable load_logs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log file: " + path);
  WellTable w;
  std::string line;
  std::vector<std::string> units;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "units:";
      const auto pos = line.find(key);
      if (pos != std::string::npos) units = detail::split(line.substr(pos + key.size()), ',');
      continue;
    }
    if (header.empty()) {
      header = detail::split(line, ',');
      if (header.empty() || header[0] != "DEPT")
        throw IoError("log CSV: header must start with DEPT: " + path);
      for (std::size_t i = 1; i < header.size(); ++i) {
        CurveDesc c;
        c.name = header[i];
        if (i < units.size()) c.unit = units[i];
        w.curves.push_back(c);
      }
      continue;
    }
    const auto f = detail::split(line, ',');
    if (f.size() != header.size())
      throw IoError("log CSV: bad field count in '" + line + "'");
    const double depth = detail::parse_double(f[0], path);
    if (!w.depths.empty() && !(depth > w.depths.back()))
      throw IoError("log CSV: depths not strictly increasing at " + f[0]);
    LogVector row;
    bool missing = false;
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (f[i].empty()) {
        row.push_back(kMissingSentinel);
        missing = true;
        continue;
      }
      const double v = detail::parse_double(f[i], path);
      if (v == kMissingSentinel) missing = true;
      row.push_back(v);
    }
    w.depths.push_back(depth);
    w.rows.push_back(std::move(row));
    w.row_missing.push_back(missing ? 1 : 0);
    if (missing) ++w.missing_rows;
  }
  if (w.depths.empty()) throw IoError("log CSV: zero usable rows: " + path);
  return w;
}

// Minimal LAS 2.0 reader: ~V / ~C / ~W / ~A sections, unwrapped mode only.
inline WellTable load_logs_las(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open LAS file: " + path);
  WellTable w;
  double null_value = kMissingSentinel;
  std::string line;
  char section = 0;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '~') {
      section = static_cast<char>(std::toupper(static_cast<unsigned char>(line[1])));
      continue;
    }
    if (section == 'V') {
      if (line.rfind("WRAP", 0) == 0 && line.find("YES") != std::string::npos)
        throw IoError("LAS: wrapped mode not supported: " + path);
      continue;
    }
    if (section == 'W') {
      if (line.rfind("NULL", 0) == 0) {
        const auto dot = line.find('.');
        const auto colon = line.rfind(':');
        if (dot != std::string::npos) {
          std::string val = line.substr(dot + 1, (colon == std::string::npos ? line.size() : colon) - dot - 1);
          val = detail::trim(val);
          // strip the unit token if present
          const auto sp = val.find_first_of(" \t");
          if (sp != std::string::npos) val = detail::trim(val.substr(sp));
          if (!val.empty()) null_value = detail::parse_double(val, "LAS NULL");
        }
      }
      continue;
    }
    if (section == 'C') {
      // MNEM.UNIT  data : description
      const auto dot = line.find('.');
      if (dot == std::string::npos) continue;
      CurveDesc c;
      c.name = detail::trim(line.substr(0, dot));
      std::string rest = line.substr(dot + 1);
      const auto sp = rest.find_first_of(" \t");
      c.unit = detail::trim(sp == std::string::npos ? rest : rest.substr(0, sp));
      w.curves.push_back(c);
      continue;
    }
    if (section == 'A') {
      std::istringstream iss(line);
      std::vector<double> vals;
      double v;
      while (iss >> v) vals.push_back(v);
      if (vals.size() != w.curves.size())
        throw IoError("LAS: data width != curve count in '" + line + "'");
      if (!w.depths.empty() && !(vals[0] > w.depths.back()))
        throw IoError("LAS: depths not strictly increasing");
      LogVector row(vals.begin() + 1, vals.end());
      bool missing = false;
      for (double& x : row)
        if (x == null_value) {
          x = kMissingSentinel;
          missing = true;
        }
      w.depths.push_back(vals[0]);
      w.rows.push_back(std::move(row));
      w.row_missing.push_back(missing ? 1 : 0);
      if (missing) ++w.missing_rows;
    }
  }
  if (w.curves.empty() || w.depths.empty()) throw IoError("LAS: no data: " + path);
  // the first curve is the depth track itself
  w.curves.erase(w.curves.begin());
  for (auto& r : w.rows)
    if (r.size() != w.curves.size()) throw IoError("LAS: inconsistent row width");
  return w;
}

inline WellTable load_logs(const std::string& path) {
  auto lower = path;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower.size() >= 4 && lower.substr(lower.size() - 4) == ".las")
    return load_logs_las(path);
  return load_logs_csv(path);
}

// Keep only the named curves, in that order; rows missing any of them are
// flagged. Curve names must also exist in the endpoint table (checked by
// the caller against its table).
inline WellTable select_curves(const WellTable& w, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto it = std::find_if(w.curves.begin(), w.curves.end(),
                           [&](const CurveDesc& c) { return c.name == n; });
    if (it == w.curves.end()) throw IoError("log file has no curve named " + n);
    idx.push_back(static_cast<std::size_t>(it - w.curves.begin()));
  }
  WellTable out;
  out.depths = w.depths;
  for (std::size_t i : idx) out.curves.push_back(w.curves[i]);
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    LogVector row;
    bool missing = false;
    for (std::size_t i : idx) {
      row.push_back(w.rows[r][i]);
      if (w.rows[r][i] == kMissingSentinel) missing = true;
    }
    out.rows.push_back(std::move(row));
    out.row_missing.push_back(missing ? 1 : 0);
    if (missing) ++out.missing_rows;
  }
  return out;
}

// Write a LayerLogs block in the same CSV format load_logs_csv reads.
inline void save_logs_csv(const LayerLogs& layer, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write log CSV: " + path);
  // first units slot belongs to the depth column
  out << "# units: M";
  for (const auto& c : layer.curves) out << "," << c.unit;
  out << "\nDEPT";
  for (const auto& c : layer.curves) out << "," << c.name;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < layer.depths.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", layer.depths[i]);
    out << buf;
    for (double v : layer.samples[i]) {
      std::snprintf(buf, sizeof(buf), "%.8g", v);
      out << "," << buf;
    }
    out << "\n";
  }
}

// Ground-truth volumes CSV for scoring synthetic wells.
inline void save_volumes_csv(const std::vector<double>& depths,
                             const std::vector<VolumeVector>& volumes,
                             const std::vector<std::string>& component_names,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write volumes CSV: " + path);
  out << "DEPT";
  for (const auto& n : component_names) out << "," << n;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < depths.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", depths[i]);
    out << buf;
    for (double v : volumes[i].values) {
      std::snprintf(buf, sizeof(buf), "%.8g", v);
      out << "," << buf;
    }
    out << "\n";
  }
}

// Flat INI-style config: [section] headers, key = value lines, '#'
// comments. Keys are looked up as "section.key".
class Config {
 public:
  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static Config parse(const std::string& text) {
    Config cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']') {
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw IoError("config: expected key = value: " + line);
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string val = detail::trim(line.substr(eq + 1));
      cfg.values_[section.empty() ? key : section + "." + key] = val;
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback = "") const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : detail::parse_double(it->second, key);
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return static_cast<long long>(detail::parse_double(it->second, key));
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return it->second == "true" || it->second == "1" || it->second == "yes";
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const auto& tok : detail::split(it->second, ','))
      if (!tok.empty()) out.push_back(detail::parse_double(tok, key));
    return out;
  }

  std::vector<std::string> get_strings(const std::string& key) const {
    std::vector<std::string> out;
    auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const auto& tok : detail::split(it->second, ','))
      if (!tok.empty()) out.push_back(tok);
    return out;
  }

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace litho
