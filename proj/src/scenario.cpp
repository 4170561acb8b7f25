#include "raid/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace raid {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ScenarioError(path + ": missing required field '" + key + "'");
  }
  return obj.at(key);
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path + ": expected a number");
  return v.get<double>();
}

std::vector<double> vector_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    throw ScenarioError(path + ": expected a nonempty array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(number_at(v[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

}  // namespace

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::rademacher: return "rademacher";
    case NoiseKind::none: return "none";
  }
  return "none";
}

NoiseKind noise_kind_from(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "uniform") return NoiseKind::uniform;
  if (name == "rademacher") return NoiseKind::rademacher;
  if (name == "none") return NoiseKind::none;
  throw ScenarioError("noise.kind: unknown kind '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");

  Scenario s;

  // agents
  const json& agents_doc = require(doc, "agents", "scenario");
  if (!agents_doc.is_array() || agents_doc.empty()) {
    throw ScenarioError("agents: expected a nonempty array");
  }
  json agents_echo = json::array();
  int d = -1;
  for (std::size_t i = 0; i < agents_doc.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& a = agents_doc[i];

    std::vector<double> theta = vector_at(require(a, "theta_star", path), path + ".theta_star");
    if (theta.size() < 2) {
      throw ScenarioError(path + ".theta_star: basis dimension must be >= 2");
    }
    if (d < 0) {
      d = static_cast<int>(theta.size());
    } else if (static_cast<int>(theta.size()) != d) {
      throw ScenarioError(path + ".theta_star: all agents must share the basis dimension (" +
                          std::to_string(d) + ")");
    }
    Vector theta_star = Eigen::Map<const Vector>(theta.data(), theta.size());

    std::vector<double> iv = vector_at(require(a, "interval", path), path + ".interval");
    if (iv.size() != 2 || !(iv[0] < iv[1]) || !std::isfinite(iv[0]) || !std::isfinite(iv[1])) {
      throw ScenarioError(path + ".interval: expected finite [lo, hi] with lo < hi");
    }
    StrategyInterval X{iv[0], iv[1]};

    std::vector<double> cb = vector_at(require(a, "curvature", path), path + ".curvature");
    if (cb.size() != 2 || !(0.0 < cb[0] && cb[0] <= cb[1])) {
      throw ScenarioError(path + ".curvature: expected [m, M] with 0 < m <= M");
    }
    CurvatureBounds bounds{cb[0], cb[1]};

    const json& noise_doc = require(a, "noise", path);
    NoiseSpec noise;
    noise.kind = noise_kind_from(
        require(noise_doc, "kind", path + ".noise").get<std::string>());
    if (noise.kind != NoiseKind::none) {
      noise.scale = number_at(require(noise_doc, "scale", path + ".noise"),
                              path + ".noise.scale");
      if (!(noise.scale > 0.0)) {
        throw ScenarioError(path + ".noise.scale: must be positive");
      }
    }

    if (!check_admissible(theta_star, bounds, X)) {
      throw ScenarioError(path + ": Assumption 2 violated for agent " +
                          std::to_string(i) +
                          " (type curvature leaves [m, M] on the interval)");
    }
    s.mc.agents.emplace_back(theta_star, X, bounds, noise);

    json ae;
    ae["theta_star"] = theta;
    ae["interval"] = {X.lo, X.hi};
    ae["curvature"] = {bounds.m, bounds.M};
    ae["noise"] = json{{"kind", noise_kind_name(noise.kind)},
                       {"scale", noise.scale}};
    agents_echo.push_back(ae);
  }
  const std::size_t n = s.mc.agents.size();

  // x_des
  s.mc.x_des = vector_at(require(doc, "x_des", "scenario"), "x_des");
  if (s.mc.x_des.size() != n) {
    throw ScenarioError("x_des: length must equal the number of agents");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const StrategyInterval& X = s.mc.agents[i].interval();
    if (!(X.lo < s.mc.x_des[i] && s.mc.x_des[i] < X.hi)) {
      throw ScenarioError("x_des[" + std::to_string(i) +
                          "]: Assumption 1 violated (desired response must be "
                          "strictly interior to the strategy interval)");
    }
  }

  // schedule
  const json& sched = require(doc, "schedule", "scenario");
  s.mc.schedule.gamma = number_at(require(sched, "gamma", "schedule"), "schedule.gamma");
  s.mc.schedule.sigma2 = number_at(require(sched, "sigma2", "schedule"), "schedule.sigma2");
  if (!(s.mc.schedule.gamma >= 2.0 / 3.0 && s.mc.schedule.gamma < 1.0)) {
    throw ScenarioError("schedule.gamma: must lie in [2/3, 1)");
  }
  if (!(s.mc.schedule.sigma2 > 0.0)) {
    throw ScenarioError("schedule.sigma2: must be positive");
  }

  // horizon
  const json& hz = require(doc, "horizon", "scenario");
  if (!hz.is_number_integer() || hz.get<long>() < 0) {
    throw ScenarioError("horizon: expected a nonnegative integer");
  }
  s.mc.horizon = hz.get<long>();

  // seeds
  const json& seeds_doc = require(doc, "seeds", "scenario");
  json seeds_echo;
  if (seeds_doc.is_object() && seeds_doc.contains("list")) {
    const json& lst = seeds_doc.at("list");
    if (!lst.is_array() || lst.empty()) {
      throw ScenarioError("seeds.list: expected a nonempty array");
    }
    for (const auto& v : lst) {
      if (!v.is_number_integer()) throw ScenarioError("seeds.list: expected integers");
      s.mc.seeds.push_back(v.get<std::uint64_t>());
    }
    seeds_echo["list"] = s.mc.seeds;
  } else if (seeds_doc.is_object() && seeds_doc.contains("base")) {
    const std::uint64_t base = require(seeds_doc, "base", "seeds").get<std::uint64_t>();
    const json& cnt = require(seeds_doc, "count", "seeds");
    if (!cnt.is_number_integer() || cnt.get<long>() < 1) {
      throw ScenarioError("seeds.count: expected a positive integer");
    }
    const long count = cnt.get<long>();
    for (long k = 0; k < count; ++k) {
      s.mc.seeds.push_back(split_seed(base, static_cast<std::uint64_t>(k)));
    }
    seeds_echo["base"] = base;
    seeds_echo["count"] = count;
  } else {
    throw ScenarioError("seeds: expected {\"base\", \"count\"} or {\"list\"}");
  }

  // estimator init (optional)
  json est_echo;
  if (doc.contains("estimator")) {
    const json& est = doc.at("estimator");
    if (est.contains("rho")) {
      s.mc.init.rho = number_at(est.at("rho"), "estimator.rho");
      if (!(s.mc.init.rho > 0.0)) {
        throw ScenarioError("estimator.rho: must be positive");
      }
    }
    if (est.contains("theta0")) {
      std::vector<double> t0 = vector_at(est.at("theta0"), "estimator.theta0");
      if (static_cast<int>(t0.size()) != d) {
        throw ScenarioError("estimator.theta0: length must equal the basis dimension");
      }
      s.mc.init.theta0 = Eigen::Map<const Vector>(t0.data(), t0.size());
    }
  }
  est_echo["rho"] = s.mc.init.rho;
  if (s.mc.init.theta0) {
    est_echo["theta0"] =
        std::vector<double>(s.mc.init.theta0->data(),
                            s.mc.init.theta0->data() + s.mc.init.theta0->size());
  }

  // rate-fit window (optional; default [T/100, T])
  if (doc.contains("rate_window")) {
    std::vector<double> w = vector_at(doc.at("rate_window"), "rate_window");
    if (w.size() != 2 || !(w[0] < w[1])) {
      throw ScenarioError("rate_window: expected [t_min, t_max] with t_min < t_max");
    }
    s.rate_window = {w[0], w[1]};
  } else {
    s.rate_window = {std::max(1.0, static_cast<double>(s.mc.horizon) / 100.0),
                     static_cast<double>(s.mc.horizon)};
  }

  s.echo = json{{"agents", agents_echo},
                {"x_des", s.mc.x_des},
                {"schedule", json{{"gamma", s.mc.schedule.gamma},
                                  {"sigma2", s.mc.schedule.sigma2}}},
                {"horizon", s.mc.horizon},
                {"seeds", seeds_echo},
                {"estimator", est_echo},
                {"rate_window", {s.rate_window.first, s.rate_window.second}}};
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

nlohmann::json serialize(const Scenario& s) { return s.echo; }

}  // namespace raid
