#include "nys/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nys {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double_or_throw(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  }
}

}  // namespace

std::vector<double> expand_grid(const std::string& text) {
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    return {parse_double_or_throw("<grid>", trim(text))};
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw ConfigError("grid syntax is lo:step:hi, got '" + text + "'");
  }
  const double lo = parse_double_or_throw("<grid>", trim(text.substr(0, c1)));
  const double step = parse_double_or_throw("<grid>", trim(text.substr(c1 + 1, c2 - c1 - 1)));
  const double hi = parse_double_or_throw("<grid>", trim(text.substr(c2 + 1)));
  if (!(step > 0.0)) throw ConfigError("grid step must be positive in '" + text + "'");
  if (hi < lo) throw ConfigError("grid upper bound below lower bound in '" + text + "'");
  std::vector<double> out;
  const Index count = static_cast<Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(static_cast<size_t>(count));
  for (Index i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  Config cfg;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + format_num(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path.string() + ":" + format_num(line_no) + ": empty key");
    }
    cfg.kv_[key] = value;
  }
  // Echo bookkeeping keys never drive behavior on re-input.
  cfg.consumed_.insert("run.timestamp");
  cfg.consumed_.insert("run.command");
  return cfg;
}

Config Config::from_overrides(const std::vector<std::string>& tokens) {
  Config cfg;
  for (const std::string& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + tok + "' must have the form key=value");
    }
    cfg.kv_[trim(tok.substr(0, eq))] = trim(tok.substr(eq + 1));
  }
  return cfg;
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.kv_) kv_[k] = v;
  consumed_.insert(other.consumed_.begin(), other.consumed_.end());
}

std::string Config::raw(const std::string& key) {
  consumed_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) {
    throw ConfigError("missing required config key '" + key + "'");
  }
  return it->second;
}

std::string Config::get_string(const std::string& key) { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) kv_[key] = fallback;
  return raw(key);
}

double Config::get_double(const std::string& key) {
  return parse_double_or_throw(key, raw(key));
}

double Config::get_double(const std::string& key, double fallback) {
  if (!has(key)) kv_[key] = format_num(fallback);
  return get_double(key);
}

Index Config::get_index(const std::string& key) {
  const double v = get_double(key);
  const Index i = static_cast<Index>(std::llround(v));
  if (static_cast<double>(i) != v) {
    throw ConfigError("config key '" + key + "': expected an integer, got " + format_num(v));
  }
  return i;
}

Index Config::get_index(const std::string& key, Index fallback) {
  if (!has(key)) kv_[key] = format_num(fallback);
  return get_index(key);
}

uint64_t Config::get_uint64(const std::string& key, uint64_t fallback) {
  if (!has(key)) kv_[key] = format_num(fallback);
  const std::string text = raw(key);
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + text +
                      "'");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) kv_[key] = fallback ? "true" : "false";
  const std::string text = raw(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) {
  const std::string text = raw(key);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      const std::vector<double> part = expand_grid(tok);
      out.insert(out.end(), part.begin(), part.end());
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  if (out.empty()) {
    throw ConfigError("config key '" + key + "': expected at least one number");
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key, const std::string& fallback) {
  if (!has(key)) kv_[key] = fallback;
  return get_double_list(key);
}

std::vector<Index> Config::get_index_list(const std::string& key) {
  std::vector<Index> out;
  for (double v : get_double_list(key)) {
    const Index i = static_cast<Index>(std::llround(v));
    if (static_cast<double>(i) != v) {
      throw ConfigError("config key '" + key + "': expected integers, got " + format_num(v));
    }
    out.push_back(i);
  }
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::string& fallback) {
  if (!has(key)) kv_[key] = fallback;
  const std::string text = raw(key);
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
  consumed_.insert(key);
}

void Config::mark_consumed(const std::string& key) { consumed_.insert(key); }

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_) {
    if (consumed_.count(k) == 0) out.push_back(k);
  }
  return out;
}

void Config::echo(std::ostream& out) const {
  out << "# resolved configuration\n";
  for (const auto& [k, v] : kv_) {
    out << k << " = " << v << '\n';
  }
}

}  // namespace nys
