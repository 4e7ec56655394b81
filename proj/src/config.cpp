#include "clab/config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

#include "clab/real.hpp"

namespace clab {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "kind",       "alpha",     "k",        "terms",     "tail",    "Q",
      "eps",        "eps_min",   "eps_max",  "per_octave", "cf_subgrid",
      "count",      "p",         "threshold", "N",        "eps_list", "poly",
      "bound",      "matrix",    "v",        "name",      "check",   "out",
      "plot",       "workers",   "precision_floor",       "only",    "depth",
      "eigen_index"};
  return keys;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (!known_keys().count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    if (cfg.values.count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
    cfg.values[key] = val;
  }
  if (!cfg.values.count("kind")) throw std::invalid_argument("config: missing key 'kind'");
  cfg.kind = cfg.values["kind"];
  return cfg;
}

ExperimentConfig ExperimentConfig::from_pairs(const std::string& kind,
                                              const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.values = kv;
  cfg.values["kind"] = kind;
  for (const auto& [k, v] : cfg.values)
    if (!known_keys().count(k)) throw std::invalid_argument("config: unknown key '" + k + "'");
  return cfg;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : std::stol(it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  return static_cast<int>(get_long(key, fallback));
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : std::stod(it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  return it->second == "true" || it->second == "1" || it->second == "yes";
}

std::string ExperimentConfig::normalized_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : values) os << k << " = " << v << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(normalized_text()); }

mpq_class parse_eps(const std::string& text) {
  if (text.rfind("2^", 0) == 0) {
    long e = std::stol(text.substr(2));
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(e)));
    mpq_class r = e >= 0 ? mpq_class(p) : mpq_class(1, p);
    r.canonicalize();
    return r;
  }
  if (text.find('/') != std::string::npos) {
    auto slash = text.find('/');
    mpq_class r(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
    r.canonicalize();
    return r;
  }
  if (text.find('.') != std::string::npos) {
    // exact decimal
    auto dot = text.find('.');
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    mpz_class num(ip.empty() ? "0" : ip);
    mpz_class den = 1;
    for (char c : fp) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    mpq_class r(num, den);
    r.canonicalize();
    return r;
  }
  return mpq_class(mpz_class(text));
}

int resolve_workers(std::optional<int> explicit_value) {
  if (explicit_value && *explicit_value > 0) return *explicit_value;
  if (const char* env = std::getenv("COLLAPSE_LAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

}  // namespace clab
