#include "hcm/config.hpp"

#include <fstream>
#include <sstream>

#include "hcm/control.hpp"

namespace hcm {

namespace {

const OrderedJson kEmptyObject = OrderedJson::object();

const OrderedJson& section(const OrderedJson& root, const char* name) {
  if (!root.contains(name)) return kEmptyObject;
  const OrderedJson& s = root.at(name);
  if (!s.is_object())
    throw ParseError(std::string("config: section '") + name + "' must be an object");
  return s;
}

void reject_unknown(const OrderedJson& obj, const char* where,
                    std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ParseError("config: unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T field(const OrderedJson& obj, const char* key, T def) {
  if (!obj.contains(key)) return def;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config: bad value for '" + std::string(key) + "': " + e.what());
  }
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

void validate(const ExperimentConfig& cfg) {
  AlgebraDescriptor alg(cfg.algebra_dim);        // range check [1, 16]
  ModuleDescriptor desc(alg, cfg.module_rank);   // range check [1, 8]
  (void)desc;

  check(cfg.base.kind == "identity" || cfg.base.kind == "zero" || cfg.base.kind == "random",
        "map.base.kind must be identity, zero, or random");
  const std::string& pk = cfg.perturbation.kind;
  check(pk == "none" || pk == "constant_shift" || pk == "bump" || pk == "homogeneous",
        "map.perturbation.kind must be none, constant_shift, bump, or homogeneous");
  check(std::isfinite(cfg.perturbation.amplitude) && cfg.perturbation.amplitude >= 0.0,
        "map.perturbation.amplitude must be finite and >= 0");

  check(cfg.control.kind == "power", "control.kind: only the power family is config-expressible");
  check(std::isfinite(cfg.control.theta) && cfg.control.theta >= 0.0,
        "control.theta must be finite and >= 0");
  check(cfg.control.direction == "expand" || cfg.control.direction == "contract",
        "control.direction must be expand or contract");
  const Direction dir =
      cfg.control.direction == "expand" ? Direction::Expand : Direction::Contract;
  power_lipschitz(cfg.control.p, dir);  // throws DomainError naming the p window

  if (pk == "constant_shift")
    check(cfg.control.p == 0.0, "CONSTANT_SHIFT requires a power control with p=0");
  if (pk == "bump") {
    check(dir == Direction::Expand, "BUMP requires direction=expand");
    check(cfg.perturbation.radius > 0.0, "BUMP requires radius > 0");
  }
  if (pk == "homogeneous") {
    check(dir == Direction::Contract && cfg.control.p > 3.0,
          "HOMOGENEOUS requires direction=contract and p>3");
    check(cfg.perturbation.exponent == cfg.control.p,
          "HOMOGENEOUS exponent must equal the control exponent");
  }

  check(cfg.iterations_N == -1 || (cfg.iterations_N >= 1 && cfg.iterations_N <= 60),
        "iterations.N must be -1 (default) or in [1, 60]");
  check(cfg.probes.count >= 1, "probes.count must be >= 1");
  check(!cfg.probes.scales.empty(), "probes.scales must be nonempty");
  for (double s : cfg.probes.scales)
    check(std::isfinite(s) && s > 0.0, "probes.scales entries must be positive");
  check(cfg.tolerances.axiom >= 0.0 && cfg.tolerances.bound >= 0.0 && cfg.tolerances.decay >= 0.0,
        "tolerances must be >= 0");
  check(!cfg.outputs.csv.empty() && !cfg.outputs.json.empty(),
        "outputs.csv and outputs.json must be nonempty paths");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  OrderedJson root;
  try {
    root = OrderedJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config: document root must be an object");
  reject_unknown(root, "root",
                 {"algebra", "module", "map", "control", "iterations", "probes", "tolerances",
                  "outputs"});

  ExperimentConfig cfg;
  const OrderedJson& alg = section(root, "algebra");
  reject_unknown(alg, "algebra", {"dim"});
  cfg.algebra_dim = field(alg, "dim", cfg.algebra_dim);

  const OrderedJson& mod = section(root, "module");
  reject_unknown(mod, "module", {"rank"});
  cfg.module_rank = field(mod, "rank", cfg.module_rank);

  const OrderedJson& map = section(root, "map");
  reject_unknown(map, "map", {"base", "perturbation"});
  const OrderedJson& base = section(map, "base");
  reject_unknown(base, "map.base", {"kind", "seed"});
  cfg.base.kind = field(base, "kind", cfg.base.kind);
  cfg.base.seed = field(base, "seed", cfg.base.seed);
  const OrderedJson& pert = section(map, "perturbation");
  reject_unknown(pert, "map.perturbation", {"kind", "amplitude", "radius", "exponent", "seed"});
  cfg.perturbation.kind = field(pert, "kind", cfg.perturbation.kind);
  cfg.perturbation.amplitude = field(pert, "amplitude", cfg.perturbation.amplitude);
  cfg.perturbation.radius = field(pert, "radius", cfg.perturbation.radius);
  cfg.perturbation.exponent = field(pert, "exponent", cfg.perturbation.exponent);
  cfg.perturbation.seed = field(pert, "seed", cfg.perturbation.seed);

  const OrderedJson& ctrl = section(root, "control");
  reject_unknown(ctrl, "control", {"kind", "theta", "p", "direction"});
  cfg.control.kind = field(ctrl, "kind", cfg.control.kind);
  cfg.control.theta = field(ctrl, "theta", cfg.control.theta);
  cfg.control.p = field(ctrl, "p", cfg.control.p);
  cfg.control.direction = field(ctrl, "direction", cfg.control.direction);

  const OrderedJson& iter = section(root, "iterations");
  reject_unknown(iter, "iterations", {"N"});
  cfg.iterations_N = field(iter, "N", cfg.iterations_N);

  const OrderedJson& pr = section(root, "probes");
  reject_unknown(pr, "probes", {"count", "scales", "seed"});
  cfg.probes.count = field(pr, "count", cfg.probes.count);
  cfg.probes.scales = field(pr, "scales", cfg.probes.scales);
  cfg.probes.seed = field(pr, "seed", cfg.probes.seed);

  const OrderedJson& tol = section(root, "tolerances");
  reject_unknown(tol, "tolerances", {"axiom", "bound", "decay"});
  cfg.tolerances.axiom = field(tol, "axiom", cfg.tolerances.axiom);
  cfg.tolerances.bound = field(tol, "bound", cfg.tolerances.bound);
  cfg.tolerances.decay = field(tol, "decay", cfg.tolerances.decay);

  const OrderedJson& out = section(root, "outputs");
  reject_unknown(out, "outputs", {"csv", "json"});
  cfg.outputs.csv = field(out, "csv", cfg.outputs.csv);
  cfg.outputs.json = field(out, "json", cfg.outputs.json);

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

OrderedJson config_to_json(const ExperimentConfig& cfg) {
  OrderedJson j;
  j["algebra"] = {{"dim", cfg.algebra_dim}};
  j["module"] = {{"rank", cfg.module_rank}};
  j["map"] = {
      {"base", {{"kind", cfg.base.kind}, {"seed", cfg.base.seed}}},
      {"perturbation",
       {{"kind", cfg.perturbation.kind},
        {"amplitude", cfg.perturbation.amplitude},
        {"radius", cfg.perturbation.radius},
        {"exponent", cfg.perturbation.exponent},
        {"seed", cfg.perturbation.seed}}},
  };
  j["control"] = {{"kind", cfg.control.kind},
                  {"theta", cfg.control.theta},
                  {"p", cfg.control.p},
                  {"direction", cfg.control.direction}};
  j["iterations"] = {{"N", cfg.iterations_N}};
  j["probes"] = {{"count", cfg.probes.count},
                 {"scales", cfg.probes.scales},
                 {"seed", cfg.probes.seed}};
  j["tolerances"] = {{"axiom", cfg.tolerances.axiom},
                     {"bound", cfg.tolerances.bound},
                     {"decay", cfg.tolerances.decay}};
  j["outputs"] = {{"csv", cfg.outputs.csv}, {"json", cfg.outputs.json}};
  return j;
}

std::string dump_config(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

}  // namespace hcm
