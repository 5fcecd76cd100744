// Run configuration: per-network architecture and training settings with
// the shipped defaults, plus a line-oriented `key = value` config file
// format with one [section] per network. CLI flags override file values.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pathsrl/errors.hpp"
#include "pathsrl/lstm.hpp"
#include "pathsrl/srl.hpp"

namespace pathsrl {

struct NetConfig {
  int embed_dim = 0;
  int hidden_dim = 0;
  bool use_forget_gate = false;
  bool memory_to_gates = false;
  double alpha = 0.0;
  double dropout = 0.0;
};

inline int net_index(Task task, Category category) {
  return (task == Task::Classification ? 2 : 0) + (category == Category::Noun ? 1 : 0);
}

inline const char* net_name(int index) {
  static const char* kNames[] = {"identification.verb", "identification.noun",
                                 "classification.verb", "classification.noun"};
  return kNames[index];
}

struct RunConfig {
  // Shipped defaults for the four argument networks.
  std::array<NetConfig, 4> nets = {{
      {25, 90, false, true, 0.0006, 0.42},   // identification.verb
      {16, 125, false, true, 0.0009, 0.25},  // identification.noun
      {5, 300, true, false, 0.0155, 0.50},   // classification.verb
      {88, 500, false, false, 0.0055, 0.46}, // classification.noun
  }};
  int epochs = 30;
  std::uint64_t seed = 1;
  double threshold = 0.5;
  int reranker_n = 4;
  int jobs = 1;
  bool ablate_path = false;
  bool ablate_binary = false;
  int predicate_epochs = 10;
  double predicate_alpha = 0.1;
  int reranker_epochs = 10;
  double reranker_alpha = 0.1;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

inline double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw ConfigError("");
    return d;
  } catch (...) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
}

inline long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size()) throw ConfigError("");
    return n;
  } catch (...) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
}

}  // namespace detail

// Sectioned key=value pairs: section "" holds globals.
inline std::map<std::string, std::map<std::string, std::string>> parse_config_file(
    std::istream& in) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = detail::trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = detail::trim(text.substr(1, text.size() - 2));
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out[section][key] = value;
  }
  return out;
}

inline void apply_net_config(NetConfig& net, const std::map<std::string, std::string>& kv,
                             const std::string& section) {
  for (const auto& [key, value] : kv) {
    const std::string full = section + "." + key;
    if (key == "embed_dim")
      net.embed_dim = static_cast<int>(detail::parse_int(value, full));
    else if (key == "hidden_dim")
      net.hidden_dim = static_cast<int>(detail::parse_int(value, full));
    else if (key == "forget_gate")
      net.use_forget_gate = detail::parse_bool(value, full);
    else if (key == "memory_to_gates")
      net.memory_to_gates = detail::parse_bool(value, full);
    else if (key == "alpha")
      net.alpha = detail::parse_double(value, full);
    else if (key == "dropout")
      net.dropout = detail::parse_double(value, full);
    else
      throw ConfigError("unknown config key " + full);
  }
}

inline void apply_config_file(RunConfig& config, std::istream& in) {
  const auto sections = parse_config_file(in);
  for (const auto& [section, kv] : sections) {
    if (section.empty()) {
      for (const auto& [key, value] : kv) {
        if (key == "epochs")
          config.epochs = static_cast<int>(detail::parse_int(value, key));
        else if (key == "seed")
          config.seed = static_cast<std::uint64_t>(detail::parse_int(value, key));
        else if (key == "threshold")
          config.threshold = detail::parse_double(value, key);
        else if (key == "reranker_n")
          config.reranker_n = static_cast<int>(detail::parse_int(value, key));
        else if (key == "jobs")
          config.jobs = static_cast<int>(detail::parse_int(value, key));
        else if (key == "ablate_path")
          config.ablate_path = detail::parse_bool(value, key);
        else if (key == "ablate_binary")
          config.ablate_binary = detail::parse_bool(value, key);
        else
          throw ConfigError("unknown config key " + key);
      }
    } else if (section == "predicates") {
      for (const auto& [key, value] : kv) {
        if (key == "epochs")
          config.predicate_epochs = static_cast<int>(detail::parse_int(value, key));
        else if (key == "alpha")
          config.predicate_alpha = detail::parse_double(value, key);
        else
          throw ConfigError("unknown config key predicates." + key);
      }
    } else if (section == "reranker") {
      for (const auto& [key, value] : kv) {
        if (key == "epochs")
          config.reranker_epochs = static_cast<int>(detail::parse_int(value, key));
        else if (key == "alpha")
          config.reranker_alpha = detail::parse_double(value, key);
        else
          throw ConfigError("unknown config key reranker." + key);
      }
    } else {
      int index = -1;
      for (int i = 0; i < 4; ++i)
        if (section == net_name(i)) index = i;
      if (index < 0) throw ConfigError("unknown config section [" + section + "]");
      apply_net_config(config.nets[static_cast<std::size_t>(index)], kv, section);
    }
  }
}

// Hyperparameter search space for seeded random search. alpha is sampled
// log-uniformly; the other ranges uniformly; gate toggles uniformly over
// {false, true} unless pinned.
struct SearchSpace {
  double alpha_min = 0.00006, alpha_max = 0.3;
  double dropout_min = 0.0, dropout_max = 0.5;
  int embed_min = 1, embed_max = 100;
  int hidden_min = 1, hidden_max = 500;
  int forget_gate = -1;      // -1 = both, else 0/1
  int memory_to_gates = -1;  // -1 = both, else 0/1

  static SearchSpace parse(std::istream& in) {
    const auto sections = parse_config_file(in);
    const auto it = sections.find("");
    if (it == sections.end() || it->second.empty())
      throw ConfigError("empty search space");
    SearchSpace space;
    for (const auto& [key, value] : it->second) {
      if (key == "alpha_min")
        space.alpha_min = detail::parse_double(value, key);
      else if (key == "alpha_max")
        space.alpha_max = detail::parse_double(value, key);
      else if (key == "dropout_min")
        space.dropout_min = detail::parse_double(value, key);
      else if (key == "dropout_max")
        space.dropout_max = detail::parse_double(value, key);
      else if (key == "embed_min")
        space.embed_min = static_cast<int>(detail::parse_int(value, key));
      else if (key == "embed_max")
        space.embed_max = static_cast<int>(detail::parse_int(value, key));
      else if (key == "hidden_min")
        space.hidden_min = static_cast<int>(detail::parse_int(value, key));
      else if (key == "hidden_max")
        space.hidden_max = static_cast<int>(detail::parse_int(value, key));
      else if (key == "forget_gate")
        space.forget_gate = value == "both" ? -1 : (detail::parse_bool(value, key) ? 1 : 0);
      else if (key == "memory_to_gates")
        space.memory_to_gates = value == "both" ? -1 : (detail::parse_bool(value, key) ? 1 : 0);
      else
        throw ConfigError("unknown search-space key " + key);
    }
    if (space.alpha_min <= 0 || space.alpha_max < space.alpha_min ||
        space.dropout_max < space.dropout_min || space.embed_max < space.embed_min ||
        space.hidden_max < space.hidden_min)
      throw ConfigError("degenerate search space");
    return space;
  }

  NetConfig sample(Rng& rng) const {
    NetConfig net;
    net.alpha = rng.log_uniform(alpha_min, alpha_max);
    net.dropout = rng.uniform(dropout_min, dropout_max);
    net.embed_dim = static_cast<int>(rng.uniform_int(embed_min, embed_max));
    net.hidden_dim = static_cast<int>(rng.uniform_int(hidden_min, hidden_max));
    net.use_forget_gate = forget_gate < 0 ? rng.bernoulli(0.5) : forget_gate != 0;
    net.memory_to_gates = memory_to_gates < 0 ? rng.bernoulli(0.5) : memory_to_gates != 0;
    return net;
  }
};

}  // namespace pathsrl
