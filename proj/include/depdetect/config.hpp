#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dd {

// Flat `key = value` run configuration. Every key is declared in a registry
// with a type and default; unknown keys and ill-typed values are rejected.
// The rendered form always carries every key, so two configs compare equal
// exactly when they resolve identically.
class RunConfig {
 public:
  enum class Type { Bool, Int, Real, Text, Choice };

  struct KeySpec {
    std::string_view name;
    Type type;
    std::string_view default_value;
    std::vector<std::string_view> choices;  // Choice type only
    std::string_view help;
  };

  static const std::vector<KeySpec>& registry();

  // Defaults for every key.
  RunConfig();

  // Parses `key = value` lines ('#' starts a comment) on top of defaults.
  static RunConfig parse(std::string_view text);
  static RunConfig load_file(const std::string& path);

  // Validates against the registry and overrides the current value.
  void set(const std::string& key, const std::string& value);

  bool get_bool(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  const std::string& get_text(const std::string& key) const;

  // Canonical echo: sorted keys, every key present (seed included).
  std::string render() const;

  // Human-oriented listing with help strings and defaults.
  static std::string describe_keys();

 private:
  const KeySpec& spec_for(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace dd
