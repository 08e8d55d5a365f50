#include "chflow/config.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "chflow/errors.hpp"

namespace chflow {

using nlohmann::json;

namespace {

// Built-in presets, expressed in the same schema as user documents.
const std::map<std::string, json>& presets() {
  static const std::map<std::string, json> table = {
      {"ch_breaking", json::parse(R"({
          "model": {"a": 2, "s": 1, "kappa": 0, "alpha": 0},
          "initial": {"kind": "single_mode", "target": "u", "amplitude": 1, "wavenumber": 1},
          "thresholds": {"slope_limit": 30},
          "stepper": {"t_end": 20}})")},
      {"global_s2", json::parse(R"({
          "model": {"a": 2, "s": 2, "kappa": 0, "alpha": 0},
          "initial": {"kind": "single_mode", "target": "u", "amplitude": 1, "wavenumber": 1},
          "thresholds": {"slope_limit": 30},
          "stepper": {"t_end": 10}})")},
      {"twocomp_smooth", json::parse(R"({
          "model": {"a": 2, "s": 2, "kappa": 1, "alpha": 0},
          "initial": {"kind": "fourier_list",
                      "u": [{"k": 1, "cos": 0.5}],
                      "rho": [{"k": 1, "sin": 0.5}],
                      "rho_offset": 2},
          "flow_map": true,
          "stepper": {"t_end": 5}})")},
  };
  return table;
}

// Typed access to one JSON object with unknown-key detection.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + " must be a JSON object");
    std::string unknown;
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed.contains(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw ConfigError("unknown keys in " + where() + ": " + unknown);
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key) + " must be finite");
    return d;
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + " must be an integer");
    return v.get<long>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const long v = integer(key, static_cast<long>(fallback));
    if (v < 0) throw ConfigError(path(key) + " must be non-negative");
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!obj_.at(key).is_boolean()) throw ConfigError(path(key) + " must be true or false");
    return obj_.at(key).get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!obj_.at(key).is_string()) throw ConfigError(path(key) + " must be a string");
    return obj_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(path(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(path(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
};

FieldTarget parse_target(const std::string& s, const std::string& path) {
  if (s == "u") return FieldTarget::u;
  if (s == "rho") return FieldTarget::rho;
  if (s == "both") return FieldTarget::both;
  throw ConfigError(path + " must be one of u, rho, both (got \"" + s + "\")");
}

std::string target_name(FieldTarget t) {
  switch (t) {
    case FieldTarget::u: return "u";
    case FieldTarget::rho: return "rho";
    case FieldTarget::both: return "both";
  }
  return "u";
}

std::vector<FourierTerm> parse_terms(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path + " must be an array of {k, cos, sin} objects");
  std::vector<FourierTerm> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader r(arr[i], path + "[" + std::to_string(i) + "]", {"k", "cos", "sin"});
    if (!r.has("k")) throw ConfigError(r.path("k") + " is required");
    out.push_back({r.integer("k", 0), r.number("cos", 0.0), r.number("sin", 0.0)});
  }
  return out;
}

InitialComponent parse_component(const ObjectReader& r) {
  InitialComponent c;
  const std::string kind = r.text("kind", "single_mode");
  if (kind == "single_mode") {
    c.kind = InitialComponent::Kind::single_mode;
    c.target = parse_target(r.text("target", "u"), r.path("target"));
    c.amplitude = r.number("amplitude", 1.0);
    c.wavenumber = r.integer("wavenumber", 1);
    c.phase = r.number("phase", 0.0);
  } else if (kind == "gaussian_bump") {
    c.kind = InitialComponent::Kind::gaussian_bump;
    c.target = parse_target(r.text("target", "u"), r.path("target"));
    c.amplitude = r.number("amplitude", 1.0);
    c.center = r.number("center", 0.5);
    c.width = r.number("width", 0.1);
  } else if (kind == "fourier_list") {
    c.kind = InitialComponent::Kind::fourier_list;
    if (r.has("u")) c.u_terms = parse_terms(r.at("u"), r.path("u"));
    if (r.has("rho")) c.rho_terms = parse_terms(r.at("rho"), r.path("rho"));
  } else {
    throw ConfigError(r.path("kind") + " must be one of single_mode, fourier_list, gaussian_bump (got \"" +
                      kind + "\")");
  }
  return c;
}

const std::set<std::string> kComponentKeys = {"kind",   "target", "amplitude", "wavenumber", "phase",
                                              "center", "width",  "u",         "rho"};

InitialConditionSpec parse_initial(const json& j) {
  std::set<std::string> allowed = kComponentKeys;
  allowed.insert({"components", "u_offset", "rho_offset"});
  ObjectReader r(j, "initial", allowed);
  InitialConditionSpec spec;
  spec.u_offset = r.number("u_offset", 0.0);
  spec.rho_offset = r.number("rho_offset", 0.0);
  if (r.has("components")) {
    if (r.has("kind")) throw ConfigError("initial: give either components or a single kind, not both");
    const auto& arr = r.at("components");
    if (!arr.is_array()) throw ConfigError("initial.components must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      spec.components.push_back(
          parse_component(ObjectReader(arr[i], "initial.components[" + std::to_string(i) + "]", kComponentKeys)));
    }
  } else if (r.has("kind")) {
    spec.components.push_back(parse_component(r));
  }
  return spec;
}

json terms_json(const std::vector<FourierTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"k", t.k}, {"cos", t.cos}, {"sin", t.sin}});
  return arr;
}

json component_json(const InitialComponent& c) {
  switch (c.kind) {
    case InitialComponent::Kind::single_mode:
      return {{"kind", "single_mode"},
              {"target", target_name(c.target)},
              {"amplitude", c.amplitude},
              {"wavenumber", c.wavenumber},
              {"phase", c.phase}};
    case InitialComponent::Kind::gaussian_bump:
      return {{"kind", "gaussian_bump"},
              {"target", target_name(c.target)},
              {"amplitude", c.amplitude},
              {"center", c.center},
              {"width", c.width}};
    case InitialComponent::Kind::fourier_list:
      return {{"kind", "fourier_list"}, {"u", terms_json(c.u_terms)}, {"rho", terms_json(c.rho_terms)}};
  }
  return {};
}

// Later layers win; "initial" is replaced as a whole.
json layered(const json& base, const json& overlay) {
  json out = base;
  for (const auto& [key, value] : overlay.items()) {
    if (key != "initial" && out.contains(key) && out[key].is_object() && value.is_object()) {
      out[key].merge_patch(value);
    } else {
      out[key] = value;
    }
  }
  return out;
}

void check_band(long k, std::size_t n, const std::string& what) {
  if (k < 0) throw ConfigError(what + ": wavenumber must be >= 0 (got " + std::to_string(k) + ")");
  if (static_cast<std::size_t>(k) > n / 3) {
    throw ConfigError(what + ": wavenumber " + std::to_string(k) + " lies beyond the dealiasing band |k| <= n/3 = " +
                      std::to_string(n / 3));
  }
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, doc] : presets()) names.push_back(name);
  return names;
}

void SimulationConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("grid.n must be even and >= 8 (got " + std::to_string(n) + ")");
  try {
    model.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model.") + e.what());
  }
  stepper.validate();
  thresholds.validate();
  if (output.snapshot_every % stepper.sample_every != 0) {
    throw ConfigError("output.snapshot_every must be a multiple of stepper.sample_every");
  }
  for (std::size_t i = 0; i < initial.components.size(); ++i) {
    const auto& c = initial.components[i];
    const std::string what = "initial component " + std::to_string(i);
    switch (c.kind) {
      case InitialComponent::Kind::single_mode:
        check_band(c.wavenumber, n, what);
        break;
      case InitialComponent::Kind::fourier_list:
        for (const auto& t : c.u_terms) check_band(t.k, n, what);
        for (const auto& t : c.rho_terms) check_band(t.k, n, what);
        break;
      case InitialComponent::Kind::gaussian_bump:
        if (!(c.width > 0.0)) throw ConfigError(what + ": width must be > 0");
        break;
    }
  }
  if (sweep) {
    for (const auto* list : {&sweep->s, &sweep->a, &sweep->kappa, &sweep->alpha}) {
      for (double v : *list) {
        if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
      }
    }
  }
}

SimulationConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader top(doc, "",
                   {"preset", "grid", "model", "stepper", "thresholds", "initial", "flow_map", "output", "sweep"});

  SimulationConfig cfg;
  json merged = json::object();
  if (top.has("preset")) {
    const std::string name = top.text("preset", "");
    const auto it = presets().find(name);
    if (it == presets().end()) throw ConfigError("unknown preset \"" + name + "\"");
    cfg.preset = name;
    merged = it->second;
  }
  json overlay = doc;
  overlay.erase("preset");
  merged = layered(merged, overlay);

  if (merged.contains("grid")) {
    ObjectReader r(merged["grid"], "grid", {"n"});
    cfg.n = r.count("n", cfg.n);
  }
  if (merged.contains("model")) {
    ObjectReader r(merged["model"], "model", {"a", "s", "kappa", "alpha"});
    cfg.model.a = r.number("a", cfg.model.a);
    cfg.model.s = r.number("s", cfg.model.s);
    cfg.model.kappa = r.number("kappa", cfg.model.kappa);
    cfg.model.alpha = r.number("alpha", cfg.model.alpha);
  }
  if (merged.contains("stepper")) {
    ObjectReader r(merged["stepper"], "stepper", {"dt", "t_end", "sample_every"});
    cfg.stepper.dt = r.number("dt", cfg.stepper.dt);
    cfg.stepper.t_end = r.number("t_end", cfg.stepper.t_end);
    cfg.stepper.sample_every = r.count("sample_every", cfg.stepper.sample_every);
  }
  if (merged.contains("thresholds")) {
    ObjectReader r(merged["thresholds"], "thresholds", {"slope_limit", "tail_fraction_limit"});
    cfg.thresholds.slope_limit = r.number("slope_limit", cfg.thresholds.slope_limit);
    cfg.thresholds.tail_fraction_limit = r.number("tail_fraction_limit", cfg.thresholds.tail_fraction_limit);
  }
  if (merged.contains("initial")) cfg.initial = parse_initial(merged["initial"]);
  if (merged.contains("flow_map")) {
    if (!merged["flow_map"].is_boolean()) throw ConfigError("flow_map must be true or false");
    cfg.flow_map = merged["flow_map"].get<bool>();
  }
  if (merged.contains("output")) {
    ObjectReader r(merged["output"], "output", {"dir", "snapshot_every"});
    cfg.output.dir = r.text("dir", cfg.output.dir);
    cfg.output.snapshot_every = r.count("snapshot_every", cfg.output.snapshot_every);
  }
  if (merged.contains("sweep")) {
    ObjectReader r(merged["sweep"], "sweep", {"s", "a", "kappa", "alpha"});
    SweepGrid grid;
    // an explicitly empty list would make the whole product empty
    auto axis = [&r](const std::string& key) {
      std::vector<double> v = r.numbers(key);
      if (v.empty()) throw ConfigError(r.path(key) + " must not be empty");
      return v;
    };
    if (r.has("s")) grid.s = axis("s");
    if (r.has("a")) grid.a = axis("a");
    if (r.has("kappa")) grid.kappa = axis("kappa");
    if (r.has("alpha")) grid.alpha = axis("alpha");
    cfg.sweep = grid;
  }
  cfg.validate();
  return cfg;
}

json to_json(const SimulationConfig& cfg) {
  json initial = {{"u_offset", cfg.initial.u_offset}, {"rho_offset", cfg.initial.rho_offset}};
  initial["components"] = json::array();
  for (const auto& c : cfg.initial.components) initial["components"].push_back(component_json(c));

  json out = {
      {"grid", {{"n", cfg.n}}},
      {"model", {{"a", cfg.model.a}, {"s", cfg.model.s}, {"kappa", cfg.model.kappa}, {"alpha", cfg.model.alpha}}},
      {"stepper",
       {{"dt", cfg.stepper.dt}, {"t_end", cfg.stepper.t_end}, {"sample_every", cfg.stepper.sample_every}}},
      {"thresholds",
       {{"slope_limit", cfg.thresholds.slope_limit},
        {"tail_fraction_limit", cfg.thresholds.tail_fraction_limit}}},
      {"initial", initial},
      {"flow_map", cfg.flow_map},
      {"output", {{"dir", cfg.output.dir}, {"snapshot_every", cfg.output.snapshot_every}}},
  };
  if (cfg.preset) out["preset"] = *cfg.preset;
  if (cfg.sweep) {
    json sweep = json::object();
    if (!cfg.sweep->s.empty()) sweep["s"] = cfg.sweep->s;
    if (!cfg.sweep->a.empty()) sweep["a"] = cfg.sweep->a;
    if (!cfg.sweep->kappa.empty()) sweep["kappa"] = cfg.sweep->kappa;
    if (!cfg.sweep->alpha.empty()) sweep["alpha"] = cfg.sweep->alpha;
    out["sweep"] = sweep;
  }
  return out;
}

AlgebraElement build_initial_condition(const InitialConditionSpec& spec, const PeriodicGrid& grid, double alpha) {
  const std::size_t n = grid.size();
  std::vector<Complex> u(grid.spectrum_size());
  std::vector<Complex> rho(grid.spectrum_size());

  // a cos(2 pi k x) + b sin(2 pi k x) -> c_k = (a - i b) / 2 for k > 0.
  auto add_term = [&](std::vector<Complex>& half, long k, double a, double b, const std::string& what) {
    check_band(k, n, what);
    if (k == 0) {
      half[0] += a;
    } else {
      half[static_cast<std::size_t>(k)] += Complex(0.5 * a, -0.5 * b);
    }
  };
  auto add_to_target = [&](FieldTarget target, auto&& add) {
    if (target == FieldTarget::u || target == FieldTarget::both) add(u);
    if (target == FieldTarget::rho || target == FieldTarget::both) add(rho);
  };

  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const auto& c = spec.components[i];
    const std::string what = "initial component " + std::to_string(i);
    switch (c.kind) {
      case InitialComponent::Kind::single_mode:
        add_to_target(c.target, [&](std::vector<Complex>& half) {
          add_term(half, c.wavenumber, c.amplitude * std::cos(c.phase), -c.amplitude * std::sin(c.phase), what);
        });
        break;
      case InitialComponent::Kind::fourier_list:
        for (const auto& t : c.u_terms) add_term(u, t.k, t.cos, t.sin, what);
        for (const auto& t : c.rho_terms) add_term(rho, t.k, t.cos, t.sin, what);
        break;
      case InitialComponent::Kind::gaussian_bump: {
        if (!(c.width > 0.0)) throw ConfigError(what + ": width must be > 0");
        add_to_target(c.target, [&](std::vector<Complex>& half) {
          const double w = c.width;
          for (std::size_t k = 0; k <= grid.dealias_cutoff(); ++k) {
            const double kk = static_cast<double>(k);
            const double mag = c.amplitude * w * std::sqrt(kTwoPi) *
                               std::exp(-2.0 * std::numbers::pi * std::numbers::pi * kk * kk * w * w);
            half[k] += std::polar(mag, -kTwoPi * kk * c.center);
          }
        });
        break;
      }
    }
  }
  u[0] += spec.u_offset;
  rho[0] += spec.rho_offset;
  return {SpectralField::from_half_spectrum(grid, std::move(u)), SpectralField::from_half_spectrum(grid, std::move(rho)),
          alpha};
}

}  // namespace chflow
