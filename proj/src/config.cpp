#include "srd/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "srd/numerics.hpp"

namespace srd {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> items)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : items) msg += "\n  - " + i;
        return msg;
      }()),
      items_(std::move(items)) {}

double InitialCondition::operator()(double x, double length) const {
  return offset + amplitude * std::sin(2.0 * std::numbers::pi * wavenumber * x / length);
}

double RunConfig::effectiveDt() const {
  if (dt > 0.0) return dt;
  const double cap = 1e-4 * spacing() * spacing();
  if (!(cap > 0.0) || !(horizon > 0.0)) return 0.0;
  return horizon / std::ceil(horizon / cap - 1e-9);
}

SpdeConfig RunConfig::spde() const {
  SpdeConfig c;
  c.alpha = alpha;
  c.sigma = sigma;
  c.gamma = gamma;
  c.dt = effectiveDt();
  c.horizon = horizon;
  c.scheme = scheme;
  return c;
}

QWienerSpec RunConfig::noiseSpec() const {
  if (!q.empty()) return QWienerSpec::explicitCoefficients(length, q);
  return QWienerSpec::powerLaw(length, truncation, decay);
}

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> bad;
  if (!(length > 0.0) || !std::isfinite(length)) bad.push_back("grid.L must be positive");
  if (elements < 3) bad.push_back("grid.M must be at least 3");
  if (subgrid < 8) bad.push_back("grid.subgridN must be at least 8");
  if (q.empty()) {
    if (truncation < 1) bad.push_back("noise.K must be at least 1");
    if (!(decay >= 2.0)) bad.push_back("noise.r must be at least 2 (trace condition)");
  } else {
    if (q.size() < 2) bad.push_back("noise.q needs at least two coefficients");
    for (std::size_t k = 0; k < q.size(); ++k)
      if (!(q[k] >= 0.0) || !std::isfinite(q[k])) bad.push_back("noise.q[" + std::to_string(k) + "] must be >= 0");
  }
  if (!std::isfinite(alpha)) bad.push_back("dynamics.alpha must be finite");
  if (!(sigma >= 0.0)) bad.push_back("dynamics.sigma must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) bad.push_back("dynamics.gamma must lie in [0, 1]");
  const double step = effectiveDt();
  if (!(step > 0.0)) bad.push_back("dynamics.dt must be positive");
  if (!(horizon > 0.0)) bad.push_back("dynamics.T must be positive");
  if (step > 0.0 && horizon > 0.0) {
    double n = std::round(horizon / step);
    if (n < 1.0 || std::abs(n * step - horizon) > 1e-9 * horizon)
      bad.push_back("dynamics.T must be an integer multiple of dynamics.dt");
  }
  if (referenceRefinement < 1) bad.push_back("dynamics.referenceRefinement must be at least 1");
  if (models.empty()) bad.push_back("models.kinds must name at least one model");
  for (const auto& m : models) {
    if (m == "reference" || m == "coupled") continue;
    try {
      ModelKind k = modelKindFromString(m);
      if (k == ModelKind::GammaReduced && !(gamma > 0.0)) bad.push_back("gammaReduced needs dynamics.gamma > 0");
      if (k == ModelKind::GammaReduced && elements % 2 != 0)
        bad.push_back("gammaReduced needs an even grid.M (simple ground mode)");
    } catch (const std::invalid_argument&) {
      bad.push_back("models.kinds: unknown model '" + m + "'");
    }
  }
  if (step > 0.0 && length > 0.0 && elements >= 3) {
    const double h = spacing();
    bool gridModel = false;
    for (const auto& m : models) gridModel = gridModel || (m != "reference" && m != "coupled");
    if (gridModel && 4.0 * step / (h * h) > 2.0)
      bad.push_back("dynamics.dt exceeds the explicit grid-model limit h^2 / 2");
    const double dx = length / (static_cast<double>(elements) * std::max(referenceRefinement, 1));
    if (scheme == Scheme::ExplicitEM && 4.0 * step / (dx * dx) > 2.0)
      bad.push_back("dynamics.dt exceeds the explicit reference limit dx^2 / 2");
  }
  if (members < 1) bad.push_back("ensemble.R must be at least 1");
  if (threads < 1) bad.push_back("ensemble.threads must be at least 1");
  if (snapshotStride < 0) bad.push_back("ensemble.snapshotStride must be non-negative");
  if (!sweep.axis.empty()) {
    static const std::set<std::string> axes{"gamma", "h", "dt"};
    if (!axes.count(sweep.axis)) bad.push_back("sweep.axis must be one of gamma, h, dt");
    if (sweep.values.size() < 3) bad.push_back("sweep.values needs at least 3 entries");
    for (double v : sweep.values)
      if (!(v > 0.0)) bad.push_back("sweep.values must be positive");
    if (sweep.axis == "gamma")
      for (double v : sweep.values)
        if (v > 1.0) bad.push_back("gamma sweep values must not exceed 1");
  }
  if (outputDir.empty()) bad.push_back("output must name a directory");
  return bad;
}

void RunConfig::validate() const {
  auto bad = problems();
  if (!bad.empty()) throw ConfigError(bad);
}

namespace {

std::string schemeName(Scheme s) { return s == Scheme::SemiImplicitEM ? "semiImplicitEM" : "explicitEM"; }
std::string readingName(MomentReading r) { return r == MomentReading::Projection ? "projection" : "pointwise"; }
std::string scalingName(LimitScaling s) { return s == LimitScaling::Literal ? "literal" : "ouExact"; }

// Reads fields out of one JSON object, recording every problem instead of stopping.
class Reader {
public:
  Reader(const json& obj, std::string where, std::vector<std::string>& bad)
      : obj_(obj), where_(std::move(where)), bad_(bad) {
    if (!obj.is_object()) bad_.push_back(where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return;
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) throw std::runtime_error("integer");
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
          throw std::runtime_error("non-negative integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::runtime_error("number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::runtime_error("boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::runtime_error("string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      bad_.push_back(where_ + "." + key + " must be a " + e.what());
    }
  }

  template <class T>
  void list(const char* key, std::vector<T>& out) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_array()) {
      bad_.push_back(where_ + "." + key + " must be an array");
      return;
    }
    out.clear();
    for (const json& e : v) {
      if constexpr (std::is_same_v<T, double>) {
        if (!e.is_number()) {
          bad_.push_back(where_ + "." + key + " entries must be numbers");
          return;
        }
      } else {
        if (!e.is_string()) {
          bad_.push_back(where_ + "." + key + " entries must be strings");
          return;
        }
      }
      out.push_back(e.get<T>());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  bool has(const char* key) const { return obj_.is_object() && obj_.contains(key); }

  void finish() {
    if (!obj_.is_object()) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) bad_.push_back(where_ + ": unknown key '" + it.key() + "'");
  }

private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& bad_;
  std::set<std::string> seen_;
};

}  // namespace

json RunConfig::toJson() const {
  json j;
  j["grid"] = {{"L", length}, {"M", elements}, {"subgridN", subgrid}};
  j["noise"] = {{"K", truncation}, {"r", decay}, {"halveGroundVariance", halveGroundVariance}};
  if (!q.empty()) j["noise"]["q"] = q;
  j["dynamics"] = {{"alpha", alpha},
                   {"sigma", sigma},
                   {"gamma", gamma},
                   {"dt", effectiveDt()},
                   {"T", horizon},
                   {"scheme", schemeName(scheme)},
                   {"referenceRefinement", referenceRefinement},
                   {"initial", {{"amplitude", initial.amplitude},
                                {"wavenumber", initial.wavenumber},
                                {"offset", initial.offset}}}};
  j["models"] = {{"kinds", models},
                 {"truncate", truncate},
                 {"deviationAlpha", deviationAlpha},
                 {"momentReading", readingName(reading)},
                 {"limitScaling", scalingName(limitScaling)}};
  j["ensemble"] = {{"R", members}, {"seed", seed}, {"threads", threads}, {"snapshotStride", snapshotStride}};
  if (!sweep.axis.empty()) j["sweep"] = {{"axis", sweep.axis}, {"metric", sweep.metric}, {"values", sweep.values}};
  j["output"] = outputDir;
  return j;
}

RunConfig RunConfig::fromJson(const json& root) {
  RunConfig c;
  std::vector<std::string> bad;
  Reader top(root, "config", bad);
  if (const json* g = top.child("grid")) {
    Reader r(*g, "grid", bad);
    r.get("L", c.length);
    r.get("M", c.elements);
    r.get("subgridN", c.subgrid);
    r.finish();
  }
  if (const json* n = top.child("noise")) {
    Reader r(*n, "noise", bad);
    r.get("K", c.truncation);
    r.get("r", c.decay);
    r.list("q", c.q);
    r.get("halveGroundVariance", c.halveGroundVariance);
    r.finish();
  }
  bool dtGiven = false;
  if (const json* d = top.child("dynamics")) {
    Reader r(*d, "dynamics", bad);
    r.get("alpha", c.alpha);
    r.get("sigma", c.sigma);
    r.get("gamma", c.gamma);
    dtGiven = r.has("dt");
    r.get("dt", c.dt);
    if (dtGiven && !(c.dt > 0.0)) bad.push_back("dynamics.dt must be positive");
    r.get("T", c.horizon);
    std::string scheme = schemeName(c.scheme);
    r.get("scheme", scheme);
    if (scheme == "semiImplicitEM") c.scheme = Scheme::SemiImplicitEM;
    else if (scheme == "explicitEM") c.scheme = Scheme::ExplicitEM;
    else bad.push_back("dynamics.scheme must be semiImplicitEM or explicitEM");
    r.get("referenceRefinement", c.referenceRefinement);
    if (const json* i = r.child("initial")) {
      Reader ri(*i, "dynamics.initial", bad);
      ri.get("amplitude", c.initial.amplitude);
      ri.get("wavenumber", c.initial.wavenumber);
      ri.get("offset", c.initial.offset);
      ri.finish();
    }
    r.finish();
  }
  if (const json* m = top.child("models")) {
    Reader r(*m, "models", bad);
    r.list("kinds", c.models);
    r.get("truncate", c.truncate);
    r.get("deviationAlpha", c.deviationAlpha);
    std::string reading = readingName(c.reading), scaling = scalingName(c.limitScaling);
    r.get("momentReading", reading);
    r.get("limitScaling", scaling);
    if (reading == "projection") c.reading = MomentReading::Projection;
    else if (reading == "pointwise") c.reading = MomentReading::Pointwise;
    else bad.push_back("models.momentReading must be projection or pointwise");
    if (scaling == "literal") c.limitScaling = LimitScaling::Literal;
    else if (scaling == "ouExact") c.limitScaling = LimitScaling::OuExact;
    else bad.push_back("models.limitScaling must be literal or ouExact");
    r.finish();
  }
  if (const json* e = top.child("ensemble")) {
    Reader r(*e, "ensemble", bad);
    r.get("R", c.members);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.get("snapshotStride", c.snapshotStride);
    r.finish();
  }
  if (const json* s = top.child("sweep")) {
    Reader r(*s, "sweep", bad);
    r.get("axis", c.sweep.axis);
    r.get("metric", c.sweep.metric);
    r.list("values", c.sweep.values);
    r.finish();
  }
  top.get("output", c.outputDir);
  top.finish();
  if (!dtGiven && c.length > 0.0 && c.elements > 0) c.dt = c.effectiveDt();
  for (auto& p : c.problems())
    if (std::find(bad.begin(), bad.end(), p) == bad.end()) bad.push_back(p);
  if (!bad.empty()) throw ConfigError(bad);
  return c;
}

RunConfig RunConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  return fromJson(j);
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const { return toJson().dump(2); }

std::uint64_t RunConfig::hash() const { return fnv1a(toJson().dump()); }

void applySweepFlag(RunConfig& cfg, const std::string& flag) {
  auto eq = flag.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError({"--sweep expects AXIS=v1,v2,..., got '" + flag + "'"});
  cfg.sweep.axis = flag.substr(0, eq);
  cfg.sweep.values.clear();
  std::stringstream ss(flag.substr(eq + 1));
  std::string item;
  std::vector<std::string> bad;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      cfg.sweep.values.push_back(v);
    } catch (const std::exception&) {
      bad.push_back("--sweep value '" + item + "' is not a number");
    }
  }
  if (!bad.empty()) throw ConfigError(bad);
  cfg.validate();
}

}  // namespace srd
