#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace stcut::app {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  try {
    return v->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type (" + v->type_name() + ")");
  }
}

const json& section(const json& doc, const char* key, bool required) {
  static const json empty = json::object();
  const json* v = find(doc, key);
  if (!v) {
    if (required) throw ConfigError(std::string("missing section '") + key + "'");
    return empty;
  }
  if (!v->is_object()) throw ConfigError(std::string(key) + ": expected an object");
  return *v;
}

std::size_t count(const json& obj, const char* key, const std::string& where, std::size_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 0)
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  return v->get<std::size_t>();
}

void parse_velocity(const json& ov, OverlapSpec& spec, double final_time) {
  const json* v = find(ov, "velocity");
  if (!v) return;
  if (v->is_number()) {
    spec.velocity = v->get<double>();
    return;
  }
  if (!v->is_object()) throw ConfigError("overlap.velocity: expected a number or an object");
  const auto mode = get<std::string>(*v, "mode", "overlap.velocity", "constant");
  const double value = get<double>(*v, "value", "overlap.velocity", 0.0);
  if (mode == "constant") {
    spec.velocity = value;
  } else if (mode == "sin_demo") {
    const double period = get<double>(*v, "period", "overlap.velocity", final_time);
    if (!(period > 0.0)) throw ConfigError("overlap.velocity.period: must be positive");
    spec.velocity = TimeFunction(
        [value, period](double t) { return value * std::sin(2.0 * std::numbers::pi * t / period); });
  } else {
    throw ConfigError("overlap.velocity.mode: unknown mode '" + mode + "'");
  }
  const auto sampling = get<std::string>(*v, "sampling", "overlap.velocity", "slab_end");
  if (sampling == "slab_end")
    spec.sampling = VelocitySampling::SlabEnd;
  else if (sampling == "slab_average")
    spec.sampling = VelocitySampling::SlabAverage;
  else
    throw ConfigError("overlap.velocity.sampling: unknown value '" + sampling + "'");
}

std::vector<double> parse_resolutions(const json& st) {
  const json* r = find(st, "resolutions");
  if (!r) throw ConfigError("study.resolutions: missing");
  std::vector<double> out;
  if (r->is_array()) {
    for (const json& e : *r) {
      if (!e.is_number()) throw ConfigError("study.resolutions: entries must be numbers");
      out.push_back(e.get<double>());
    }
  } else if (r->is_object() && find(*r, "powers_of_two")) {
    const json& p = (*r)["powers_of_two"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw ConfigError("study.resolutions.powers_of_two: expected [first, last] exponents");
    const int a = p[0].get<int>(), b = p[1].get<int>();
    const int step = a <= b ? 1 : -1;
    for (int e = a;; e += step) {
      out.push_back(std::ldexp(1.0, e));
      if (e == b) break;
    }
  } else {
    throw ConfigError("study.resolutions: expected an array or {\"powers_of_two\": [a, b]}");
  }
  if (out.size() < 2) throw ConfigError("study.resolutions: need at least two entries");
  for (double x : out)
    if (!(x > 0.0)) throw ConfigError("study.resolutions: entries must be positive");
  return out;
}

StudyConfig parse_study(const json& st) {
  StudyConfig s;
  const auto sweep = get<std::string>(st, "sweep", "study", "k");
  if (sweep == "k")
    s.sweep = Sweep::K;
  else if (sweep == "h")
    s.sweep = Sweep::H;
  else
    throw ConfigError("study.sweep: expected \"k\" or \"h\"");
  s.resolutions = parse_resolutions(st);
  if (!find(st, "fixed")) throw ConfigError("study.fixed: missing");
  const json& fixed = section(st, "fixed", true);
  const char* key = s.sweep == Sweep::K ? "h" : "k";
  if (!find(fixed, key)) throw ConfigError(std::string("study.fixed.") + key + ": missing");
  s.fixed = get<double>(fixed, key, "study.fixed", 0.0);
  if (!(s.fixed > 0.0)) throw ConfigError(std::string("study.fixed.") + key + ": must be positive");
  if (const json* w = find(st, "fit_window")) {
    if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number_integer() ||
        !(*w)[1].is_number_integer())
      throw ConfigError("study.fit_window: expected [first, last] (1-based)");
    s.fit_window = {(*w)[0].get<std::size_t>(), (*w)[1].get<std::size_t>()};
  }
  if (s.fit_window.second == 0) s.fit_window.second = s.resolutions.size();
  if (s.fit_window.first < 1 || s.fit_window.second > s.resolutions.size() ||
      s.fit_window.second <= s.fit_window.first)
    throw ConfigError("study.fit_window: window outside the resolution list");
  if (find(st, "reference_slope")) s.reference_slope = get<double>(st, "reference_slope", "study", 0.0);
  return s;
}

}  // namespace

ProblemSpec RunConfig::problem() const {
  ProblemSpec p = manufactured ? manufactured_problem() : zero_problem();
  p.final_time = final_time;
  return p;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  cfg.name = get<std::string>(doc, "name", "config", cfg.name);
  cfg.workers = count(doc, "workers", "config", 0);

  const json& pr = section(doc, "problem", false);
  cfg.manufactured = get<bool>(pr, "manufactured", "problem", true);
  cfg.final_time = get<double>(pr, "T", "problem", 1.0);
  if (!(cfg.final_time > 0.0)) throw ConfigError("problem.T: must be positive");

  const json& ov = section(doc, "overlap", false);
  cfg.overlap.length = get<double>(ov, "length", "overlap", cfg.overlap.length);
  cfg.overlap.initial_left = get<double>(ov, "initial_left", "overlap", cfg.overlap.initial_left);
  if (!(cfg.overlap.length > 0.0)) throw ConfigError("overlap.length: must be positive");
  parse_velocity(ov, cfg.overlap, cfg.final_time);

  const json& d = section(doc, "discretization", false);
  cfg.disc.n_background = count(d, "n0", "discretization", cfg.disc.n_background);
  cfg.disc.n_overlap = count(d, "nG", "discretization", cfg.disc.n_overlap);
  cfg.disc.n_slabs = count(d, "N", "discretization", cfg.disc.n_slabs);
  const std::size_t q = count(d, "q", "discretization", 0);
  if (q > 1) throw ConfigError("discretization.q: must be 0 or 1");
  cfg.disc.time_degree = static_cast<int>(q);
  cfg.disc.gamma = get<double>(d, "gamma", "discretization", cfg.disc.gamma);
  cfg.disc.omega1 = get<double>(d, "omega1", "discretization", cfg.disc.omega1);
  try {
    cfg.disc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("discretization: ") + e.what());
  }

  if (find(doc, "study")) cfg.study = parse_study(section(doc, "study", true));

  const json& out = section(doc, "output", false);
  cfg.output.dir = get<std::string>(out, "dir", "output", ".");
  cfg.output.samples_x = count(out, "samples_x", "output", cfg.output.samples_x);
  cfg.output.samples_t = count(out, "samples_t", "output", cfg.output.samples_t);
  if (cfg.output.samples_x < 2 || cfg.output.samples_t < 1)
    throw ConfigError("output: need samples_x >= 2 and samples_t >= 1");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Discretization discretization_for(const RunConfig& cfg, double resolution) {
  if (!cfg.study) throw ConfigError("no study section");
  const StudyConfig& st = *cfg.study;
  const double h = st.sweep == Sweep::K ? st.fixed : resolution;
  const double k = st.sweep == Sweep::K ? resolution : st.fixed;
  const Interval omega = cfg.problem().omega;
  Discretization d = cfg.disc;
  d.n_background = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(omega.length() / h)));
  d.n_overlap = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.overlap.length / h)));
  d.n_slabs = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.final_time / k)));
  return d;
}

}  // namespace stcut::app
