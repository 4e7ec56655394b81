#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clab {

// Line-oriented `key = value` experiment description. Unknown keys are
// rejected with their line number; identical configs hash identically.
struct ExperimentConfig {
  std::string kind;
  std::map<std::string, std::string> values;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig from_pairs(const std::string& kind,
                                     const std::map<std::string, std::string>& kv);

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  long get_long(const std::string& key, long fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // canonical text: sorted keys, one per line; basis of the config hash
  std::string normalized_text() const;
  std::uint64_t hash() const;
};

// eps grammar: 2^-N | decimal | p/q
mpq_class parse_eps(const std::string& text);

// workers: explicit value, else COLLAPSE_LAB_WORKERS, else 1
int resolve_workers(std::optional<int> explicit_value);

}  // namespace clab
