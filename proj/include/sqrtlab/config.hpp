#pragma once

// Flat key-value configuration files mirroring the CLI flags. Lines are
// `key = value`, blank lines and #-comments ignored; dashes in keys are
// normalized to underscores. CLI flags override file values.

#include <map>
#include <optional>
#include <string>

namespace sqrtlab {

class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text);

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value);
  bool contains(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

  /// Canonical "k=v" joined form, keys sorted; the cache digest input.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> entries_;
};

std::string normalize_key(std::string key);

}  // namespace sqrtlab
