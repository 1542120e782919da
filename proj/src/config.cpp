#include "most/config.hpp"

#include <json.hpp>

namespace most {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& path, const char* key,
         T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path.empty() ? key : path + "." + key, "type mismatch");
  }
}

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail(key, what);
}

ProblemSpec parse_problem(const json& node) {
  ProblemSpec spec;
  std::string type;
  json obj;
  if (node.is_string()) {
    type = node.get<std::string>();
  } else if (node.is_object()) {
    obj = node;
    if (!obj.contains("type")) fail("problem.type", "missing");
    type = get_or<std::string>(obj, "problem", "type", "");
  } else {
    fail("problem", "expected a string or object");
  }

  if (type == "zdt1" || type == "zdt2" || type == "zdt3") {
    spec.type = ProblemSpec::Type::kZdt;
    spec.zdt.variant = type[3] - '0';
    if (!obj.is_null()) {
      require_keys(obj, "problem", {"type", "dim", "squash", "seed"});
      spec.zdt.dim = get_or<int>(obj, "problem", "dim", spec.zdt.dim);
      spec.zdt.squash = get_or<bool>(obj, "problem", "squash", spec.zdt.squash);
    }
    try {
      spec.zdt.validate();
    } catch (const std::exception& e) {
      fail("problem.dim", e.what());
    }
  } else if (type == "synth_fl") {
    spec.type = ProblemSpec::Type::kSynthFl;
    if (!obj.is_null()) {
      require_keys(obj, "problem",
                   {"type", "rho1", "rho2", "n_clients", "feature_dim",
                    "classes", "min_samples", "max_samples", "seed"});
      auto& fl = spec.synth_fl;
      fl.rho1 = get_or<double>(obj, "problem", "rho1", fl.rho1);
      fl.rho2 = get_or<double>(obj, "problem", "rho2", fl.rho2);
      fl.n_clients = get_or<int>(obj, "problem", "n_clients", fl.n_clients);
      fl.feature_dim = get_or<int>(obj, "problem", "feature_dim", fl.feature_dim);
      fl.classes = get_or<int>(obj, "problem", "classes", fl.classes);
      fl.min_samples = get_or<int>(obj, "problem", "min_samples", fl.min_samples);
      fl.max_samples = get_or<int>(obj, "problem", "max_samples", fl.max_samples);
    }
    try {
      spec.synth_fl.validate();
    } catch (const std::exception& e) {
      fail("problem", e.what());
    }
  } else if (type == "fairness") {
    spec.type = ProblemSpec::Type::kFairness;
    if (!obj.is_null()) {
      require_keys(obj, "problem",
                   {"type", "n_samples", "sensitive_correlation", "seed"});
      spec.fairness.n_samples =
          get_or<int>(obj, "problem", "n_samples", spec.fairness.n_samples);
      spec.fairness.sensitive_correlation = get_or<double>(
          obj, "problem", "sensitive_correlation",
          spec.fairness.sensitive_correlation);
    }
    try {
      spec.fairness.validate();
    } catch (const std::exception& e) {
      fail("problem", e.what());
    }
  } else if (type == "external") {
    spec.type = ProblemSpec::Type::kExternal;
    if (obj.is_null() || !obj.contains("path")) {
      fail("problem.path", "external problems need a dataset path");
    }
    require_keys(obj, "problem", {"type", "path", "seed"});
    spec.path = get_or<std::string>(obj, "problem", "path", "");
  } else {
    fail("problem.type", "unknown problem '" + type +
                             "' (valid: zdt1, zdt2, zdt3, synth_fl, fairness, "
                             "external)");
  }
  if (obj.is_object() && obj.contains("seed")) {
    spec.seed = get_or<std::uint64_t>(obj, "problem", "seed", 0);
  }
  return spec;
}

json problem_to_json(const ProblemSpec& spec) {
  json node;
  switch (spec.type) {
    case ProblemSpec::Type::kZdt:
      node["type"] = "zdt" + std::to_string(spec.zdt.variant);
      node["dim"] = spec.zdt.dim;
      node["squash"] = spec.zdt.squash;
      break;
    case ProblemSpec::Type::kSynthFl:
      node["type"] = "synth_fl";
      node["rho1"] = spec.synth_fl.rho1;
      node["rho2"] = spec.synth_fl.rho2;
      node["n_clients"] = spec.synth_fl.n_clients;
      node["feature_dim"] = spec.synth_fl.feature_dim;
      node["classes"] = spec.synth_fl.classes;
      node["min_samples"] = spec.synth_fl.min_samples;
      node["max_samples"] = spec.synth_fl.max_samples;
      break;
    case ProblemSpec::Type::kFairness:
      node["type"] = "fairness";
      node["n_samples"] = spec.fairness.n_samples;
      node["sensitive_correlation"] = spec.fairness.sensitive_correlation;
      break;
    case ProblemSpec::Type::kExternal:
      node["type"] = "external";
      node["path"] = spec.path;
      break;
  }
  if (spec.seed) node["seed"] = *spec.seed;
  return node;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  require_keys(doc, "",
               {"problem", "method", "m", "T", "K", "eta", "tau", "seed",
                "init_stddev", "minibatch_fraction", "uniform_weights",
                "extend", "curriculum", "ot", "minnorm", "metrics",
                "output_dir", "emit"});

  ExperimentConfig cfg;
  if (!doc.contains("problem")) fail("problem", "missing");
  cfg.problem = parse_problem(doc.at("problem"));

  RunConfig& run = cfg.run;
  try {
    run.method = parse_method(get_or<std::string>(doc, "", "method", "most"));
  } catch (const std::exception& e) {
    fail("method", e.what());
  }
  run.m = get_or<int>(doc, "", "m", run.m);
  run.T = get_or<int>(doc, "", "T", run.T);
  run.K = get_or<int>(doc, "", "K", run.K);
  run.eta = get_or<double>(doc, "", "eta", run.eta);
  run.tau = get_or<double>(doc, "", "tau", run.tau);
  run.seed = get_or<std::uint64_t>(doc, "", "seed", run.seed);
  run.init_stddev = get_or<double>(doc, "", "init_stddev", run.init_stddev);
  run.minibatch_fraction =
      get_or<double>(doc, "", "minibatch_fraction", run.minibatch_fraction);
  run.uniform_weights =
      get_or<bool>(doc, "", "uniform_weights", run.uniform_weights);

  check(run.m >= 1, "m", "must be >= 1");
  check(run.T >= 1, "T", "must be >= 1");
  check(run.K >= 1, "K", "must be >= 1");
  check(run.eta > 0.0, "eta", "must be > 0");
  check(run.tau >= 0.0, "tau", "must be >= 0");
  check(run.init_stddev >= 0.0, "init_stddev", "must be >= 0");
  check(run.minibatch_fraction > 0.0 && run.minibatch_fraction <= 1.0,
        "minibatch_fraction", "must be in (0, 1]");

  if (doc.contains("extend")) {
    const json& ext = doc.at("extend");
    require_keys(ext, "extend", {"n_prime", "concentration"});
    ExtensionSpec spec;
    spec.n_prime = get_or<int>(ext, "extend", "n_prime", 0);
    spec.concentration =
        get_or<double>(ext, "extend", "concentration", spec.concentration);
    check(spec.n_prime >= 1, "extend.n_prime", "must be >= 1");
    check(spec.concentration > 0.0, "extend.concentration", "must be > 0");
    run.extend = spec;
  }

  run.curriculum.total_iters = run.T;
  if (doc.contains("curriculum")) {
    const json& cur = doc.at("curriculum");
    require_keys(cur, "curriculum", {"mode", "penalty_max", "total_iters"});
    const std::string mode =
        get_or<std::string>(cur, "curriculum", "mode", "none");
    if (mode == "none") {
      run.curriculum.mode = CurriculumSchedule::Mode::kNone;
    } else if (mode == "linear") {
      run.curriculum.mode = CurriculumSchedule::Mode::kLinear;
    } else {
      fail("curriculum.mode", "must be 'none' or 'linear'");
    }
    run.curriculum.penalty_max = get_or<double>(cur, "curriculum", "penalty_max",
                                                run.curriculum.penalty_max);
    run.curriculum.total_iters = get_or<int>(cur, "curriculum", "total_iters",
                                             run.curriculum.total_iters);
    check(run.curriculum.total_iters >= 1, "curriculum.total_iters",
          "must be >= 1");
    check(run.curriculum.penalty_max > 0.0, "curriculum.penalty_max",
          "must be > 0");
  }

  if (doc.contains("ot")) {
    const json& ot = doc.at("ot");
    require_keys(ot, "ot",
                 {"proximal_weight", "inner_iters", "outer_iters", "stop_tol",
                  "regularizer_max_rounds"});
    run.ot.proximal_weight =
        get_or<double>(ot, "ot", "proximal_weight", run.ot.proximal_weight);
    run.ot.inner_iters = get_or<int>(ot, "ot", "inner_iters", run.ot.inner_iters);
    run.ot.outer_iters = get_or<int>(ot, "ot", "outer_iters", run.ot.outer_iters);
    run.ot.stop_tol = get_or<double>(ot, "ot", "stop_tol", run.ot.stop_tol);
    run.ot.regularizer_max_rounds = get_or<int>(
        ot, "ot", "regularizer_max_rounds", run.ot.regularizer_max_rounds);
    try {
      run.ot.validate();
    } catch (const std::exception& e) {
      fail("ot", e.what());
    }
  }

  if (doc.contains("minnorm")) {
    const json& mn = doc.at("minnorm");
    require_keys(mn, "minnorm", {"max_iters", "gap_tol", "support_eps"});
    run.minnorm.max_iters =
        get_or<int>(mn, "minnorm", "max_iters", run.minnorm.max_iters);
    run.minnorm.gap_tol =
        get_or<double>(mn, "minnorm", "gap_tol", run.minnorm.gap_tol);
    run.minnorm.support_eps =
        get_or<double>(mn, "minnorm", "support_eps", run.minnorm.support_eps);
    try {
      run.minnorm.validate();
    } catch (const std::exception& e) {
      fail("minnorm", e.what());
    }
  }

  if (doc.contains("metrics")) {
    const json& met = doc.at("metrics");
    require_keys(met, "metrics", {"reference_point", "quantiles", "zero_tol"});
    if (met.contains("reference_point")) {
      const json& ref = met.at("reference_point");
      if (!ref.is_array() || ref.size() != 2) {
        fail("metrics.reference_point", "must be [r1, r2]");
      }
      cfg.metrics.reference_point = {ref[0].get<double>(), ref[1].get<double>()};
    }
    if (met.contains("quantiles")) {
      cfg.metrics.quantiles =
          get_or<std::vector<double>>(met, "metrics", "quantiles", {});
      for (double q : cfg.metrics.quantiles) {
        check(q > 0.0 && q <= 1.0, "metrics.quantiles", "must be in (0, 1]");
      }
    }
    cfg.metrics.zero_tol =
        get_or<double>(met, "metrics", "zero_tol", cfg.metrics.zero_tol);
    check(cfg.metrics.zero_tol >= 0.0, "metrics.zero_tol", "must be >= 0");
  }

  cfg.output_dir = get_or<std::string>(doc, "", "output_dir", cfg.output_dir);
  if (doc.contains("emit")) {
    const json& emit = doc.at("emit");
    require_keys(emit, "emit", {"metrics", "final_plan", "solutions"});
    cfg.emit.metrics = get_or<bool>(emit, "emit", "metrics", cfg.emit.metrics);
    cfg.emit.final_plan =
        get_or<bool>(emit, "emit", "final_plan", cfg.emit.final_plan);
    cfg.emit.solutions =
        get_or<bool>(emit, "emit", "solutions", cfg.emit.solutions);
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json doc;
  doc["problem"] = problem_to_json(cfg.problem);
  const RunConfig& run = cfg.run;
  doc["method"] = method_name(run.method);
  doc["m"] = run.m;
  doc["T"] = run.T;
  doc["K"] = run.K;
  doc["eta"] = run.eta;
  doc["tau"] = run.tau;
  doc["seed"] = run.seed;
  doc["init_stddev"] = run.init_stddev;
  doc["minibatch_fraction"] = run.minibatch_fraction;
  doc["uniform_weights"] = run.uniform_weights;
  if (run.extend) {
    doc["extend"] = {{"n_prime", run.extend->n_prime},
                     {"concentration", run.extend->concentration}};
  }
  doc["curriculum"] = {
      {"mode",
       run.curriculum.mode == CurriculumSchedule::Mode::kLinear ? "linear"
                                                                : "none"},
      {"penalty_max", run.curriculum.penalty_max},
      {"total_iters", run.curriculum.total_iters}};
  doc["ot"] = {{"proximal_weight", run.ot.proximal_weight},
               {"inner_iters", run.ot.inner_iters},
               {"outer_iters", run.ot.outer_iters},
               {"stop_tol", run.ot.stop_tol},
               {"regularizer_max_rounds", run.ot.regularizer_max_rounds}};
  doc["minnorm"] = {{"max_iters", run.minnorm.max_iters},
                    {"gap_tol", run.minnorm.gap_tol},
                    {"support_eps", run.minnorm.support_eps}};
  json metrics;
  if (cfg.metrics.reference_point) {
    metrics["reference_point"] = {(*cfg.metrics.reference_point)[0],
                                  (*cfg.metrics.reference_point)[1]};
  }
  metrics["quantiles"] = cfg.metrics.quantiles;
  metrics["zero_tol"] = cfg.metrics.zero_tol;
  doc["metrics"] = metrics;
  doc["output_dir"] = cfg.output_dir;
  doc["emit"] = {{"metrics", cfg.emit.metrics},
                 {"final_plan", cfg.emit.final_plan},
                 {"solutions", cfg.emit.solutions}};
  return doc.dump(2);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t run_seed) {
  const std::uint64_t seed = spec.seed.value_or(run_seed);
  switch (spec.type) {
    case ProblemSpec::Type::kZdt:
      return {make_zdt_problem(spec.zdt, seed), nullptr};
    case ProblemSpec::Type::kSynthFl: {
      SynthFlSpec fl = spec.synth_fl;
      fl.seed = seed;
      auto data = gen_synthetic_fl(fl).data;
      return {make_client_problem(data), data};
    }
    case ProblemSpec::Type::kFairness: {
      FairnessSpec fair = spec.fairness;
      fair.seed = seed;
      return {gen_fairness_problem(fair).make_problem(), nullptr};
    }
    case ProblemSpec::Type::kExternal: {
      auto data = load_dataset_file(spec.path, seed);
      return {make_client_problem(data), data};
    }
  }
  throw std::logic_error("build_problem: unreachable");
}

}  // namespace most
