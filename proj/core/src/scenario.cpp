#include "chaplygin/scenario.hpp"

#include "chaplygin/sampling.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chaplygin {
namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioParseError("key '" + key + "' has a value of the wrong type");
  }
}

std::vector<double> list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ScenarioParseError("key '" + key + "' must be a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(scalar<double>(item, key));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioParseError(std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ScenarioParseError("scenario must be a key-value mapping");

  static const std::set<std::string> known{"name", "n",  "inertia", "inertia_values", "s0",     "u0",
                                           "T",    "dt", "form",    "reparam",        "seed"};
  Scenario sc;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) throw ScenarioParseError("unknown key '" + key + "'");
    const YAML::Node& v = kv.second;
    if (key == "name") sc.name = scalar<std::string>(v, key);
    else if (key == "n") sc.n = scalar<int>(v, key);
    else if (key == "inertia") sc.inertia = scalar<std::string>(v, key);
    else if (key == "inertia_values") sc.inertia_values = list(v, key);
    else if (key == "s0") sc.s0 = list(v, key);
    else if (key == "u0") sc.u0 = list(v, key);
    else if (key == "T") sc.T = scalar<double>(v, key);
    else if (key == "dt") sc.dt = scalar<double>(v, key);
    else if (key == "reparam") sc.reparam = scalar<bool>(v, key);
    else if (key == "seed") sc.seed = scalar<std::uint64_t>(v, key);
    else if (key == "form") {
      const auto f = scalar<std::string>(v, key);
      if (f == "omega_nh") sc.form = DynamicsForm::OmegaNH;
      else if (f == "omega_tilde") sc.form = DynamicsForm::OmegaTilde;
      else throw ScenarioParseError("form must be omega_nh or omega_tilde, got '" + f + "'");
    }
  }
  static const std::set<std::string> kinds{"identity", "diagonal", "full", "principal3"};
  if (!kinds.count(sc.inertia))
    throw ScenarioParseError("inertia must be identity, diagonal, full or principal3, got '" + sc.inertia + "'");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void validate(const Scenario& sc) {
  if (sc.n < 3) throw ScenarioValidationError("n must be at least 3");
  if (sc.n > 8) throw ScenarioValidationError("n above 8 is not supported");
  if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) throw ScenarioValidationError("dt must be positive");
  if (!(sc.T > 0.0) || !std::isfinite(sc.T)) throw ScenarioValidationError("T must be positive");
  const auto m = static_cast<std::size_t>(so_dim(sc.n));
  if (!sc.s0.empty() && sc.s0.size() != m)
    throw ScenarioValidationError("s0 needs " + std::to_string(m) + " entries");
  if (!sc.u0.empty() && sc.u0.size() != m)
    throw ScenarioValidationError("u0 needs " + std::to_string(m) + " entries");
  for (const auto* v : {&sc.s0, &sc.u0, &sc.inertia_values})
    for (double x : *v)
      if (!std::isfinite(x)) throw ScenarioValidationError("non-finite number in scenario");
  build_inertia(sc);
}

InertiaTensor build_inertia(const Scenario& sc) {
  const int m = so_dim(sc.n);
  const auto& v = sc.inertia_values;
  try {
    if (sc.inertia == "identity") {
      if (!v.empty()) throw ScenarioValidationError("identity inertia takes no inertia_values");
      return InertiaTensor::identity(sc.n);
    }
    if (sc.inertia == "diagonal") {
      if (static_cast<int>(v.size()) != m)
        throw ScenarioValidationError("diagonal inertia needs " + std::to_string(m) + " values");
      return InertiaTensor::diagonal(to_vector(v));
    }
    if (sc.inertia == "full") {
      if (static_cast<int>(v.size()) != m * m)
        throw ScenarioValidationError("full inertia needs " + std::to_string(m * m) + " values (row-major)");
      Matrix i(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) i(r, c) = v[r * m + c];
      return InertiaTensor(i);
    }
    if (sc.n != 3) throw ScenarioValidationError("principal3 inertia requires n = 3");
    if (v.size() != 3) throw ScenarioValidationError("principal3 inertia needs 3 values");
    return InertiaTensor::principal3(v[0], v[1], v[2]);
  } catch (const std::invalid_argument& e) {
    throw ScenarioValidationError(e.what());
  }
}

PhasePoint initial_point(const Scenario& sc) {
  const int m = so_dim(sc.n);
  const Vector s0 = sc.s0.empty() ? Vector::Zero(m) : to_vector(sc.s0);
  Vector u0;
  if (sc.u0.empty()) {
    Sampler sampler(sc.seed);
    u0 = sampler.normal_vector(m);
  } else {
    u0 = to_vector(sc.u0);
  }
  return {group_exp(AlgebraElement::from_coeffs(s0, sc.n)), AlgebraElement::from_coeffs(u0, sc.n)};
}

}  // namespace chaplygin
