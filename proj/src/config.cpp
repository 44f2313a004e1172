#include "cpde/config.hpp"

#include <sstream>

#include "cpde/csv.hpp"
#include "cpde/errors.hpp"
#include "cpde/format.hpp"

namespace cpde {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  return from_string(read_text_file(path));
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("config line is not 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error("config line has an empty key", lineno);
    if (cfg.values_.count(key)) throw parse_error("duplicate config key '" + key + "'", lineno);
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string Config::raw(const std::string& key, const std::string& fallback, bool required) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (required) throw validation_error("missing required config key '" + key + "'");
    resolved_[key] = fallback;
    return fallback;
  }
  resolved_[key] = it->second;
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) {
  return raw(key, fallback, false);
}

std::string Config::str_required(const std::string& key) {
  return raw(key, "", true);
}

double Config::num(const std::string& key, double fallback) {
  const std::string v = raw(key, format_double(fallback), false);
  return parse_double(v);
}

double Config::num_required(const std::string& key) {
  return parse_double(raw(key, "", true));
}

long Config::integer(const std::string& key, long fallback) {
  return static_cast<long>(parse_int(raw(key, std::to_string(fallback), false)));
}

bool Config::flag(const std::string& key, bool fallback) {
  const std::string v = raw(key, fallback ? "true" : "false", false);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw validation_error("config key '" + key + "' is not a boolean: " + v);
}

std::vector<double> Config::num_list(const std::string& key, const std::string& fallback) {
  return parse_num_list(raw(key, fallback, false));
}

void Config::reject_unknown() const {
  for (const auto& [key, value] : values_) {
    (void)value;
    if (!consumed_.count(key))
      throw validation_error("unknown config key '" + key + "' for this command");
  }
}

std::string Config::resolved_text() const {
  std::ostringstream out;
  for (const auto& [key, value] : resolved_) out << key << " = " << value << '\n';
  return out.str();
}

std::vector<double> parse_num_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw validation_error("range must be start:stop:step");
    const double start = parse_double(trim(parts[0]));
    const double stop = parse_double(trim(parts[1]));
    const double step = parse_double(trim(parts[2]));
    if (!(step > 0) || stop < start) throw validation_error("range needs stop >= start, step > 0");
    for (double v = start; v <= stop + 1e-9 * step; v += step) out.push_back(std::min(v, stop));
    return out;
  }
  std::string cur;
  auto flush = [&] {
    const std::string t = trim(cur);
    if (!t.empty()) out.push_back(parse_double(t));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',')
      flush();
    else
      cur += ch;
  }
  flush();
  if (out.empty()) throw validation_error("empty number list");
  return out;
}

}  // namespace cpde
