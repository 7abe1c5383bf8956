#include <vdcsim/config.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vdcsim {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

double parse_double(const std::string& raw, const std::string& where,
                    const std::string& key) {
  double out = 0.0;
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError(where + ": key '" + key + "': '" + raw +
                      "' is not a number");
  return out;
}

struct Parser {
  std::unordered_map<std::string, ConfigMap::Entry>* entries;

  void parse_text(const std::string& text, const std::string& origin,
                  const std::filesystem::path& dir, int depth);

  void parse_file(const std::filesystem::path& path, int depth) {
    if (depth > 10)
      throw ConfigError("config include depth exceeds 10 at " + path.string() +
                        " (include cycle?)");
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    parse_text(buf.str(), path.string(), path.parent_path(), depth);
  }
};

void Parser::parse_text(const std::string& text, const std::string& origin,
                        const std::filesystem::path& dir, int depth) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;

    const std::string where = origin + ":" + std::to_string(lineno);

    if (line.rfind("include", 0) == 0 &&
        (line.size() == 7 || line[7] == ' ' || line[7] == '\t')) {
      const std::string target = strip(line.substr(7));
      if (target.empty())
        throw ConfigError(where + ": include without a file name");
      parse_file(dir / target, depth + 1);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError(where + ": invalid key '" + key + "'");
    if (value.empty())
      throw ConfigError(where + ": key '" + key + "' has no value");
    (*entries)[key] = ConfigMap::Entry{value, where};
  }
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
  ConfigMap cfg;
  cfg.origin_ = path;
  Parser p{&cfg.entries_};
  p.parse_file(path, 0);
  return cfg;
}

ConfigMap ConfigMap::from_string(const std::string& text,
                                 const std::string& origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  Parser p{&cfg.entries_};
  p.parse_text(text, origin, std::filesystem::current_path(), 0);
  return cfg;
}

bool ConfigMap::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const ConfigMap::Entry& ConfigMap::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  accessed_.insert(key);
  return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
  const Entry& e = require(key);
  return parse_double(e.raw, e.where, key);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int ConfigMap::get_int(const std::string& key) const {
  const Entry& e = require(key);
  int out = 0;
  const auto [ptr, ec] =
      std::from_chars(e.raw.data(), e.raw.data() + e.raw.size(), out);
  if (ec != std::errc{} || ptr != e.raw.data() + e.raw.size())
    throw ConfigError(e.where + ": key '" + key + "': '" + e.raw +
                      "' is not an integer");
  return out;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key) const {
  const Entry& e = require(key);
  std::string v = e.raw;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(e.where + ": key '" + key + "': '" + e.raw +
                    "' is not a boolean");
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::string ConfigMap::get_string(const std::string& key) const {
  return require(key).raw;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> ConfigMap::get_vector(const std::string& key) const {
  const Entry& e = require(key);
  std::string raw = e.raw;
  std::replace(raw.begin(), raw.end(), ',', ' ');
  std::istringstream in(raw);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, e.where, key));
  if (out.empty())
    throw ConfigError(e.where + ": key '" + key + "' has no numeric entries");
  return out;
}

std::vector<double> ConfigMap::get_vector(
    const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? get_vector(key) : fallback;
}

std::vector<std::string> ConfigMap::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (!accessed_.count(k)) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vdcsim
