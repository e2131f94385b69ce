#include "vcontract/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "vcontract/error.hpp"
#include "vcontract/report.hpp"

namespace vcontract {

namespace {

constexpr std::size_t kCertifyTrials = 2000;

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  std::size_t exact_cap = 0;
  std::uint64_t mc_draws = 0;
  double confidence = 0.0;
  double delta = 0.0;
  double p = 0.0;
  bool no_timestamp = false;
  int threads = 0;
  std::size_t K = 0;
  std::size_t n = 0;
  double eps = 0.0;
  double gamma = 0.0;
  std::string norm;
  std::string mode;
  std::size_t coordinate = 0;
  std::size_t instances = 0;
  std::string check_id;
};

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config " + path);
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) fail(ErrorKind::ConfigError, "config must be an object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, "config " + path + ": " + e.what());
  }
}

void apply_env_budgets(Budgets& b) {
  auto read = [](const char* name, auto& slot) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (*end != '\0') fail(ErrorKind::ConfigError, std::string(name) + " must be an integer");
    slot = static_cast<std::remove_reference_t<decltype(slot)>>(x);
  };
  read("VCONTRACT_EXACT_CAP", b.exact_cap);
  read("VCONTRACT_SHATTER_CAP", b.shatter_cap);
  read("VCONTRACT_COVER_EXACT_MAX", b.cover_exact_max);
  read("VCONTRACT_MULTISET_BUDGET", b.multiset_budget);
  read("VCONTRACT_FAT_BUDGET", b.fat_budget);
  read("VCONTRACT_PRODUCT_BUDGET", b.product_budget);
}

Budgets budgets_from(const Json& config) {
  Budgets b;
  apply_env_budgets(b);
  if (!config.contains("budgets")) return b;
  const Json& j = config.at("budgets");
  auto read = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::remove_reference_t<decltype(slot)>>();
  };
  read("exact_cap", b.exact_cap);
  read("shatter_cap", b.shatter_cap);
  read("cover_exact_max", b.cover_exact_max);
  read("multiset_budget", b.multiset_budget);
  read("fat_budget", b.fat_budget);
  read("product_budget", b.product_budget);
  return b;
}

Json budgets_json(const Budgets& b) {
  return {{"exact_cap", b.exact_cap},           {"shatter_cap", b.shatter_cap},
          {"cover_exact_max", b.cover_exact_max}, {"multiset_budget", b.multiset_budget},
          {"fat_budget", b.fat_budget},         {"product_budget", b.product_budget}};
}

double num(const Json& config, const char* key, double fallback) {
  return config.contains(key) ? number_from_json(config.at(key)) : fallback;
}

template <class T>
T get(const Json& config, const char* key, T fallback) {
  if (!config.contains(key)) return fallback;
  try {
    return config.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("config \"") + key + "\": " + e.what());
  }
}

double require_num(const Json& config, const char* key) {
  if (!config.contains(key))
    fail(ErrorKind::ConfigError, std::string("missing \"") + key + "\" (config or flag)");
  return number_from_json(config.at(key));
}

FunctionClass load_class(const Json& config) {
  if (!config.contains("class")) fail(ErrorKind::ConfigError, "missing \"class\" in config");
  return function_class_from_json(config.at("class"));
}

Sample load_sample(const Json& config, const FunctionClass& cls) {
  if (!config.contains("sample")) fail(ErrorKind::ConfigError, "missing \"sample\" in config");
  Sample s = sample_from_json(config.at("sample"));
  if (s.size() == 0) fail(ErrorKind::InvalidSample, "sample must be non-empty");
  s.validate(cls.domain().size);
  return s;
}

LipschitzSeq load_phi(const Json& config, std::size_t n) {
  if (!config.contains("phi")) fail(ErrorKind::ConfigError, "missing \"phi\" in config");
  return lipschitz_seq_from_json(config.at("phi"), n);
}

CoverNorm parse_norm(const std::string& s) {
  if (s == "l2" || s == "l2_rms") return CoverNorm::l2_rms;
  if (s == "linf") return CoverNorm::linf;
  fail(ErrorKind::ConfigError, "norm must be l2 or linf");
}

CoverMode parse_mode(const std::string& s) {
  if (s == "greedy") return CoverMode::greedy;
  if (s == "exact") return CoverMode::exact;
  fail(ErrorKind::ConfigError, "mode must be greedy or exact");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json worst_case_json(const WorstCaseResult& wc) {
  return {{"value", json_number(wc.value)},
          {"argmax_multiset", wc.argmax_multiset},
          {"method", wc.method == SearchMethod::exhaustive ? "exhaustive" : "local_search"},
          {"is_certified_max", wc.is_certified_max}};
}

// Throws CertificationFailed with the counterexample recorded in `doc`.
void certify_or_fail(const LipschitzSeq& phi, std::size_t K, std::uint64_t seed,
                     ReportDocument& doc) {
  const LipschitzCertificate cert = certify_lipschitz(phi, K, kCertifyTrials, seed);
  Json c = {{"certified", cert.certified},
            {"max_ratio", json_number(cert.max_ratio)},
            {"pairs_checked", cert.pairs_checked}};
  if (cert.counterexample) {
    const auto& ce = *cert.counterexample;
    Json u = Json::array(), v = Json::array();
    for (double x : ce.u) u.push_back(json_number(x));
    for (double x : ce.v) v.push_back(json_number(x));
    c["counterexample"] = {{"timestep", ce.timestep}, {"u", u}, {"v", v},
                           {"ratio", json_number(ce.ratio)}};
  }
  doc.extras["lipschitz_certificate"] = std::move(c);
  if (!cert.certified)
    fail(ErrorKind::CertificationFailed,
         "declared Lipschitz constant " + std::to_string(phi.declared_lipschitz) +
             " is violated (observed ratio " + std::to_string(cert.max_ratio) + ")");
}

void run_rademacher(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  const FunctionClass cls = load_class(config);
  const Sample sample = load_sample(config, cls);
  const EvaluatedClass ec = evaluate(cls, sample);
  ScalarTable table;
  std::string label;
  if (config.contains("phi")) {
    table = compose(load_phi(config, sample.size()), ec).table;
    label = "phi_o_F";
  } else {
    const auto i = get<std::size_t>(config, "coordinate", 0);
    table = ec.coordinate(i);
    label = "F|_" + std::to_string(i);
  }
  const auto draws = get<std::uint64_t>(config, "mc_draws", 10000);
  const double confidence = num(config, "confidence", 0.95);
  doc.estimates.push_back(
      {label, rademacher_estimate(table, budgets.exact_cap, draws, confidence, doc.seed)});
}

void run_worstcase(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  const FunctionClass cls = load_class(config);
  const auto i = get<std::size_t>(config, "coordinate", 0);
  const auto n = get<std::size_t>(config, "n", 0);
  if (n == 0) fail(ErrorKind::ConfigError, "worstcase needs n >= 1");
  doc.extras["worst_case"] = worst_case_json(worst_case_rademacher(restrict(cls, i), n, budgets, doc.seed));
}

void run_cover(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  const FunctionClass cls = load_class(config);
  const Sample sample = load_sample(config, cls);
  const auto i = get<std::size_t>(config, "coordinate", 0);
  const double eps = require_num(config, "eps");
  const CoverNorm norm = parse_norm(get<std::string>(config, "norm", "linf"));
  const ScalarTable table = evaluate(cls, sample).coordinate(i);
  const CoverResult c = config.contains("mode")
                            ? min_cover(table, eps, norm, parse_mode(config.at("mode")), budgets)
                            : best_cover(table, eps, norm, budgets);
  Json centers = Json::array();
  for (const auto& row : c.centers) {
    Json r = Json::array();
    for (double x : row) r.push_back(json_number(x));
    centers.push_back(std::move(r));
  }
  doc.extras["cover"] = {{"scale", json_number(c.scale)},
                         {"norm", norm == CoverNorm::linf ? "linf" : "l2"},
                         {"size", c.size},
                         {"center_rows", c.center_rows},
                         {"centers", centers},
                         {"assignment", c.assignment},
                         {"mode", c.mode == CoverMode::exact ? "exact" : "greedy"},
                         {"is_minimal", c.is_minimal}};
}

void run_fat(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  const FunctionClass cls = load_class(config);
  const auto i = get<std::size_t>(config, "coordinate", 0);
  const FatResult f = fat_dim(restrict(cls, i), require_num(config, "gamma"), budgets);
  Json levels = Json::array();
  for (double v : f.witness_levels) levels.push_back(json_number(v));
  doc.extras["fat"] = {{"gamma", json_number(f.gamma)},
                       {"dimension", f.dimension},
                       {"witness_points", f.witness_points},
                       {"witness_levels", levels},
                       {"is_certified", f.is_certified}};
}

Instance load_instance(const Json& config, ReportDocument& doc) {
  FunctionClass cls = load_class(config);
  Sample sample = load_sample(config, cls);
  LipschitzSeq phi = load_phi(config, sample.size());
  for (const auto& m : phi.maps) m.validate(cls.output_dim());
  certify_or_fail(phi, cls.output_dim(), doc.seed, doc);
  return Instance::make(std::move(cls), std::move(sample), std::move(phi));
}

void run_prop1(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  const auto K = get<std::size_t>(config, "K", 4);
  const auto n = get<std::size_t>(config, "n", 16);
  const Prop1Verification v = prop1_verify(K, n, budgets);
  doc.reports.push_back(v.report);
  doc.extras["prop1"] = {{"identities_agree", v.identities_agree}, {"all_hold", v.all_hold}};
}

void run_check(const std::string& id_name, const Json& config, const Budgets& budgets,
               ReportDocument& doc) {
  const auto id = parse_inequality_id(id_name);
  if (!id) fail(ErrorKind::ConfigError, "unknown inequality id " + id_name);
  const double delta = num(config, "delta", 0.5);
  const double p = num(config, "p", 2.0);

  switch (*id) {
    case InequalityId::prop1_lower:
      run_prop1(config, budgets, doc);
      return;
    case InequalityId::step_iii_monotone: {
      const double b = num(config, "b", std::exp(1.0 + delta));
      const double a = num(config, "a", b);
      const auto points = get<std::size_t>(config, "grid_points", 1000);
      doc.reports.push_back(step_iii_monotone_check(a, b, delta, step_iii_grid(b, delta, points)));
      return;
    }
    default: break;
  }

  const Instance inst = load_instance(config, doc);
  switch (*id) {
    case InequalityId::eq2_scalar:
      doc.reports.push_back(check_scalar_contraction(inst, budgets));
      break;
    case InequalityId::eq3_maurer:
      doc.reports.push_back(check_maurer(inst, budgets));
      break;
    case InequalityId::lemma1_cover: {
      std::optional<double> lp;
      if (config.contains("p")) lp = p;
      doc.reports.push_back(check_lemma1(inst.rescaled(), require_num(config, "eps"), lp, budgets));
      break;
    }
    case InequalityId::lemma3_fat: {
      const Instance bar = inst.rescaled();
      const auto i = get<std::size_t>(config, "coordinate", 0);
      std::vector<double> grid;
      if (config.contains("eps_grid")) {
        for (const auto& e : config.at("eps_grid")) grid.push_back(number_from_json(e));
      } else {
        grid.push_back(require_num(config, "eps"));
      }
      doc.reports.push_back(check_lemma3(restrict(bar.cls, i), bar.n(), grid, budgets));
      break;
    }
    case InequalityId::lemma2_diag: {
      const Instance bar = inst.rescaled();
      const auto i = get<std::size_t>(config, "coordinate", 0);
      doc.reports.push_back(rv_diagnostic(restrict(bar.cls, i), bar.sample,
                                          require_num(config, "eps"), num(config, "C", 1.0),
                                          num(config, "c", 0.5), delta, budgets));
      break;
    }
    case InequalityId::dudley:
      doc.reports.push_back(check_dudley(inst, budgets));
      break;
    case InequalityId::thm1_ratio:
      doc.reports.push_back(thm_ratio(inst, {ThmVariant::Kind::linf, delta, p}, budgets));
      break;
    case InequalityId::thm3_ratio:
      doc.reports.push_back(thm_ratio(inst, {ThmVariant::Kind::lp, delta, p}, budgets));
      break;
    default: break;
  }
}

void run_dudley(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  if (config.contains("profile")) {
    // A stated profile is judged against a stated left side.
    const Json& pj = config.at("profile");
    CoverProfile profile;
    for (const auto& b : pj.at("breakpoints")) profile.breakpoints.push_back(number_from_json(b));
    for (const auto& v : pj.at("log_sizes")) profile.log_sizes.push_back(number_from_json(v));
    profile.certified = get<bool>(pj, "certified", true);
    const auto n = get<std::size_t>(config, "n", 0);
    std::optional<double> lhs;
    if (config.contains("lhs")) lhs = number_from_json(config.at("lhs"));
    doc.reports.push_back(dudley_bound(profile, n, lhs));
    return;
  }
  if (config.contains("phi")) {
    doc.reports.push_back(check_dudley(load_instance(config, doc), budgets));
    return;
  }
  // Without phi: the chaining bound for one coordinate of the class itself.
  const FunctionClass cls = load_class(config);
  const Sample sample = load_sample(config, cls);
  const auto i = get<std::size_t>(config, "coordinate", 0);
  Instance inst = Instance::make(as_vector_class(restrict(cls, i)), sample,
                                 LipschitzSeq::repeat(LipschitzMap::projection(0), sample.size(), 1.0));
  doc.reports.push_back(check_dudley(inst, budgets));
}

void run_suite(const Json& config, const Budgets& budgets, ReportDocument& doc) {
  SuiteSpec spec;
  spec.budgets = budgets;
  spec.instances = get<std::size_t>(config, "instances", spec.instances);
  spec.delta = num(config, "delta", spec.delta);
  spec.lp = num(config, "p", spec.lp);
  if (config.contains("suite")) {
    const Json& s = config.at("suite");
    spec.max_n = get<std::size_t>(s, "max_n", spec.max_n);
    spec.max_dimension = get<std::size_t>(s, "max_dimension", spec.max_dimension);
    spec.max_functions = get<std::size_t>(s, "max_functions", spec.max_functions);
    spec.max_domain = get<std::size_t>(s, "max_domain", spec.max_domain);
    spec.rv_C = num(s, "rv_C", spec.rv_C);
    spec.rv_c = num(s, "rv_c", spec.rv_c);
    spec.lemma1_scales = get<std::vector<double>>(s, "lemma1_scales", spec.lemma1_scales);
    spec.rv_scales = get<std::vector<double>>(s, "rv_scales", spec.rv_scales);
  }
  const SuiteResult result = fuzz_suite(spec, doc.seed);
  Json cases = Json::array();
  for (const auto& c : result.cases) {
    cases.push_back({{"index", c.index},
                     {"family", c.family},
                     {"n", c.n},
                     {"K", c.dimension},
                     {"M", c.functions},
                     {"domain", c.domain},
                     {"first_report", doc.reports.size()},
                     {"report_count", c.reports.size()}});
    doc.reports.insert(doc.reports.end(), c.reports.begin(), c.reports.end());
  }
  doc.extras["summary"] = to_json(result.summary);
  doc.extras["cases"] = std::move(cases);
}

int status_for(ErrorKind kind) {
  return kind == ErrorKind::BudgetExceeded ? kExitBudget : kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rademacher complexity and vector contraction checks on finite classes", "vcontract"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  auto* o_config = app.add_option("--config", f.config_path, "JSON run configuration");
  auto* o_seed = app.add_option("--seed", f.seed, "master seed");
  app.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", f.out, "write the document here instead of stdout");
  auto* o_cap = app.add_option("--exact-cap", f.exact_cap, "max sign-vector length enumerated exactly");
  auto* o_draws = app.add_option("--mc-draws", f.mc_draws, "Monte Carlo draws beyond the cap");
  auto* o_conf = app.add_option("--confidence", f.confidence, "Monte Carlo interval confidence");
  auto* o_delta = app.add_option("--delta", f.delta, "log exponent slack");
  auto* o_p = app.add_option("--p", f.p, "l_p exponent");
  app.add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp and runtimes");
  auto* o_threads = app.add_option("--threads", f.threads, "OpenMP threads");
  auto* o_K = app.add_option("--K", f.K, "output dimension (prop1)");
  auto* o_n = app.add_option("--n", f.n, "sample length");
  auto* o_eps = app.add_option("--eps", f.eps, "scale");
  auto* o_gamma = app.add_option("--gamma", f.gamma, "shattering margin");
  auto* o_norm = app.add_option("--norm", f.norm, "l2 or linf");
  auto* o_mode = app.add_option("--mode", f.mode, "greedy or exact");
  auto* o_coord = app.add_option("--coordinate", f.coordinate, "output coordinate");
  auto* o_inst = app.add_option("--instances", f.instances, "suite size");

  const std::pair<const char*, const char*> commands[] = {
      {"rademacher", "empirical Rademacher complexity of a class on a sample"},
      {"worstcase", "worst-case complexity over samples of length n"},
      {"cover", "proper covering number at one scale"},
      {"fat", "fat-shattering dimension at margin gamma"},
      {"dudley", "chaining upper bound"},
      {"prop1", "sign-product lower-bound construction"},
      {"suite", "seeded fuzz suite over every certified inequality"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  auto* check = app.add_subcommand("check", "check one inequality");
  check->add_option("inequality_id", f.check_id, "inequality to check")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "vcontract: " << e.what() << "\n";
    return kExitUsage;
  }

  ReportDocument doc;
  doc.command = app.get_subcommands().front()->get_name();
  if (doc.command == "check") doc.command += " " + f.check_id;
  const auto format = *parse_format(f.format);

  try {
    Json config = o_config->count() ? read_config(f.config_path) : Json::object();
    auto put = [&](CLI::Option* o, const char* key, auto value) {
      if (o->count()) config[key] = value;
    };
    put(o_seed, "seed", f.seed);
    put(o_draws, "mc_draws", f.mc_draws);
    put(o_conf, "confidence", f.confidence);
    put(o_delta, "delta", f.delta);
    put(o_p, "p", f.p);
    put(o_K, "K", f.K);
    put(o_n, "n", f.n);
    put(o_eps, "eps", f.eps);
    put(o_gamma, "gamma", f.gamma);
    put(o_norm, "norm", f.norm);
    put(o_mode, "mode", f.mode);
    put(o_coord, "coordinate", f.coordinate);
    put(o_inst, "instances", f.instances);
    if (o_cap->count()) config["budgets"]["exact_cap"] = f.exact_cap;
    const Budgets budgets = budgets_from(config);
    config["budgets"] = budgets_json(budgets);
    doc.seed = get<std::uint64_t>(config, "seed", 0);
    doc.config = config;
    if (o_threads->count()) {
      if (f.threads < 1) fail(ErrorKind::ConfigError, "--threads must be >= 1");
      omp_set_num_threads(f.threads);
    }

    const std::string& cmd = app.get_subcommands().front()->get_name();
    if (cmd == "rademacher") run_rademacher(config, budgets, doc);
    else if (cmd == "worstcase") run_worstcase(config, budgets, doc);
    else if (cmd == "cover") run_cover(config, budgets, doc);
    else if (cmd == "fat") run_fat(config, budgets, doc);
    else if (cmd == "dudley") run_dudley(config, budgets, doc);
    else if (cmd == "prop1") run_prop1(config, budgets, doc);
    else if (cmd == "suite") run_suite(config, budgets, doc);
    else run_check(f.check_id, config, budgets, doc);

    const bool violated = std::any_of(doc.reports.begin(), doc.reports.end(),
                                      [](const BoundReport& r) { return r.verdict == Verdict::violated; });
    const bool diagnostic = std::any_of(doc.reports.begin(), doc.reports.end(), [](const BoundReport& r) {
      return r.verdict == Verdict::diagnostic_only;
    });
    doc.overall_verdict = violated ? "violated" : (diagnostic ? "diagnostic_only" : "holds");
    doc.exit_status = violated ? kExitViolation : kExitOk;
  } catch (const Error& e) {
    doc.errors.push_back({std::string(to_string(e.kind())), e.what()});
    doc.overall_verdict = "error";
    doc.exit_status = status_for(e.kind());
    err << "vcontract: " << to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    doc.errors.push_back({"ConfigError", e.what()});
    doc.overall_verdict = "error";
    doc.exit_status = kExitUsage;
    err << "vcontract: ConfigError: " << e.what() << "\n";
  }

  if (f.no_timestamp) strip_volatile(doc);
  else doc.timestamp = utc_timestamp();

  const std::string text = emit(doc, format);
  if (f.out.empty()) {
    out << text;
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
      err << "vcontract: cannot write " << f.out << "\n";
      return kExitUsage;
    }
    file << text;
  }
  return doc.exit_status;
}

}  // namespace vcontract
