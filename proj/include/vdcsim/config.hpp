#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <vdcsim/errors.hpp>

// Key-value configuration files. Format:
//
//   # comment to end of line
//   lift.L1 = 0.85          # units noted in comments
//   gains.k_a = 40 40 60    # vectors are whitespace or comma separated
//   include emla_base.cfg   # spliced in place, relative to this file
//
// Later assignments override earlier ones, which makes `include` the compose
// mechanism: a scenario file includes the defaults and then overrides.

namespace vdcsim {

class ConfigMap {
 public:
  struct Entry {
    std::string raw;
    std::string where;  // "file:line" for error messages
  };

  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_string(const std::string& text,
                               const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_vector(const std::string& key) const;
  std::vector<double> get_vector(const std::string& key,
                                 const std::vector<double>& fallback) const;

  // Keys never read through any getter; lets callers flag typos.
  std::vector<std::string> unused_keys() const;

  const std::string& origin() const { return origin_; }

 private:
  const Entry& require(const std::string& key) const;

  std::string origin_;
  std::unordered_map<std::string, Entry> entries_;
  mutable std::unordered_set<std::string> accessed_;
};

}  // namespace vdcsim
