#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "spbfgs/bench.hpp"
#include "spbfgs/error.hpp"

namespace spbfgs {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "expected a number, got '" + v + "'");
  return out;
}

long to_long(const std::string& v, int line) {
  long out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v, int line) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "expected an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "1" || l == "on") return true;
  if (l == "false" || l == "no" || l == "0" || l == "off") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

// Method sections collect raw keys first; the policy depends on several of them.
struct MethodDraft {
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> keys;
};

MethodSpec build_method(const MethodDraft& d) {
  auto get = [&d](const std::string& k) -> const std::pair<std::string, int>* {
    auto it = d.keys.find(k);
    return it == d.keys.end() ? nullptr : &it->second;
  };
  auto num_or = [&](const std::string& k, double fallback) {
    const auto* v = get(k);
    return v ? to_double(v->first, v->second) : fallback;
  };

  MethodSpec m;
  m.name = d.name;
  const auto* type = get("type");
  const std::string kind = type ? lower(type->first) : lower(d.name);
  if (kind == "spbfgs" || kind == "sp-bfgs") {
    m.kind = MethodKind::SpBfgs;
  } else if (kind == "bfgs") {
    m.kind = MethodKind::Bfgs;
  } else {
    fail(type ? type->second : d.line, "unknown method type '" + kind + "'");
  }

  const auto* beta = get("beta");
  const std::string rule = beta ? lower(beta->first) : (m.kind == MethodKind::Bfgs ? "infinity" : "linear");
  if (rule == "infinity" || rule == "inf") {
    m.policy.rule = ConstantInfinity{};
  } else if (rule == "constant") {
    m.policy.rule = ConstantBeta{num_or("value", 1.0)};
  } else if (rule == "linear" || rule == "thresholded") {
    const auto* abs_slope = get("slope");
    const auto* rel_slope = get("slope_per_noise");
    if (abs_slope && rel_slope) {
      fail(rel_slope->second, "give either slope or slope_per_noise, not both");
    }
    const double slope = num_or("slope", 1.0);
    if (rel_slope) m.slope_per_noise = to_double(rel_slope->first, rel_slope->second);
    if (rule == "linear") {
      m.policy.rule = LinearInStep{slope, num_or("offset", 1e-10)};
    } else {
      m.policy.rule = Thresholded{slope, num_or("intercept", 1.0)};
    }
  } else {
    fail(beta->second, "unknown beta rule '" + rule + "'");
  }

  if (const auto* rec = get("recovery")) {
    const std::string r = lower(rec->first);
    if (r == "skip") {
      m.policy.recovery = SkipRecovery{};
    } else if (r == "shrink") {
      m.policy.recovery = ShrinkBeta{num_or("c3", 2.0)};
    } else {
      fail(rec->second, "unknown recovery '" + r + "'");
    }
  }

  const auto* skip = get("skip_rule");
  const std::string sr = skip ? lower(skip->first) : (m.kind == MethodKind::Bfgs ? "nonpositive" : "none");
  if (sr == "none") {
    m.policy.skip_rule = NoSkipRule{};
  } else if (sr == "nonpositive") {
    m.policy.skip_rule = SkipOnNonpositive{};
  } else if (sr == "eps") {
    m.policy.skip_rule = EpsStepNorm{num_or("skip_eps", 1e-8)};
  } else if (sr == "cosine") {
    m.policy.skip_rule = CosineBound{num_or("skip_zeta", 0.1)};
  } else {
    fail(skip->second, "unknown skip_rule '" + sr + "'");
  }

  try {
    m.policy.validate();
  } catch (const Error& e) {
    fail(d.line, std::string("method '") + d.name + "': " + e.what());
  }
  return m;
}

}  // namespace

ExperimentSpec parse_experiment_config(const std::string& text) {
  ExperimentSpec spec;
  spec.methods.clear();
  std::vector<MethodDraft> drafts;
  bool budget_seen = false;

  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      const std::string head = lower(section.substr(0, section.find(' ')));
      if (head == "method") {
        const std::string name = trim(section.substr(6));
        if (name.empty()) fail(line_no, "method section needs a name: [method NAME]");
        for (const auto& d : drafts)
          if (d.name == name) fail(line_no, "duplicate method '" + name + "'");
        drafts.push_back({name, line_no, {}});
        section = "method";
      } else if (head != "experiment" && head != "noise" && head != "line_search" &&
                 head != "dimensions") {
        fail(line_no, "unknown section [" + section + "]");
      } else {
        section = head;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line_no, "empty key or value");

    if (section.empty()) fail(line_no, "key outside of any section");
    if (section == "method") {
      drafts.back().keys[key] = {value, line_no};
    } else if (section == "experiment") {
      if (key == "problems") {
        spec.problems = split(value, ',');
      } else if (key == "replicates") {
        spec.replicates = static_cast<int>(to_long(value, line_no));
      } else if (key == "seed") {
        spec.master_seed = to_u64(value, line_no);
      } else if (key == "budget_evals") {
        if (budget_seen) fail(line_no, "only one of budget_evals / budget_iters");
        spec.budget = Budget::function_evals(to_long(value, line_no));
        budget_seen = true;
      } else if (key == "budget_iters") {
        if (budget_seen) fail(line_no, "only one of budget_evals / budget_iters");
        spec.budget = Budget::iterations(to_long(value, line_no));
        budget_seen = true;
      } else if (key == "workers") {
        spec.workers = static_cast<int>(to_long(value, line_no));
      } else if (key == "trace") {
        spec.write_traces = to_bool(value, line_no);
      } else if (key == "hessian_diagnostics") {
        spec.record_hessian_diagnostics = to_bool(value, line_no);
      } else if (key == "out_dir") {
        spec.out_dir = value;
      } else {
        fail(line_no, "unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "noise") {
      if (key == "mode") {
        const std::string m = lower(value);
        if (m == "absolute") {
          spec.noise_mode = NoiseMode::Absolute;
        } else if (m == "relative") {
          spec.noise_mode = NoiseMode::Relative;
        } else {
          fail(line_no, "noise mode must be absolute or relative");
        }
      } else if (key == "cells") {
        spec.cells.clear();
        for (const auto& item : split(value, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) fail(line_no, "noise cell must be eps_f:eps_g");
          spec.cells.push_back({to_double(trim(item.substr(0, colon)), line_no),
                                to_double(trim(item.substr(colon + 1)), line_no)});
        }
      } else {
        fail(line_no, "unknown key '" + key + "' in [noise]");
      }
    } else if (section == "line_search") {
      if (key == "c1") {
        spec.ls.c1 = to_double(value, line_no);
      } else if (key == "alpha0") {
        spec.ls.alpha0 = to_double(value, line_no);
      } else if (key == "tau") {
        spec.ls.tau = to_double(value, line_no);
      } else if (key == "max_backtracks") {
        spec.ls.max_backtracks = static_cast<int>(to_long(value, line_no));
      } else if (key == "eps_a") {
        if (lower(value) == "noise") {
          spec.eps_a_from_noise = true;
        } else {
          spec.eps_a_from_noise = false;
          spec.ls.eps_a = to_double(value, line_no);
        }
      } else {
        fail(line_no, "unknown key '" + key + "' in [line_search]");
      }
    } else if (section == "dimensions") {
      std::string name = key;
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      spec.dimensions[name] = to_long(value, line_no);
    }
  }

  for (const auto& d : drafts) spec.methods.push_back(build_method(d));
  for (auto& p : spec.problems) {
    std::transform(p.begin(), p.end(), p.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    try {
      std::optional<Eigen::Index> dim;
      if (auto it = spec.dimensions.find(p); it != spec.dimensions.end()) dim = it->second;
      (void)make_problem(p, dim);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, std::string("problem '") + p + "': " + e.what());
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace spbfgs
