// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_CONFIG_HPP_
#define ROK_CONFIG_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rok {

enum class Provenance { kDefault, kFile, kFlag };

const char *to_string(Provenance p);

// Flat key/value run configuration with per-key provenance. Later layers win:
// flag > file > default. Every key is validated on assignment and the
// offending key is named in the ConfigError.
class RunConfig {
 public:
  struct Entry {
    std::string value;
    Provenance provenance = Provenance::kDefault;
  };

  RunConfig();

  // Known keys in sorted order.
  static std::vector<std::string> keys();
  static bool known(std::string_view key);

  void set(const std::string &key, const std::string &value, Provenance p);

  // Reads "key = value" lines, optionally grouped under [section] headers
  // (which prefix the keys with "section."). '#' and ';' start comments.
  // Relative file paths in values resolve against the config file directory.
  void merge_file(const std::filesystem::path &path);
  void merge_stream(std::istream &in, const std::string &origin,
                    const std::filesystem::path &base_dir = {});

  const Entry &entry(const std::string &key) const;
  const std::string &get(const std::string &key) const { return entry(key).value; }
  int get_int(const std::string &key) const;
  double get_double(const std::string &key) const;
  bool get_bool(const std::string &key) const;

  const std::map<std::string, Entry> &entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace rok

#endif  // ROK_CONFIG_HPP_
