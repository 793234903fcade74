// interlace: samplers, simulators, boundary flow, branching rows and the verification suites.
// Exit codes: 0 ok / all checks passed, 1 a check failed or a runtime error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <interlace/interlace.hpp>

namespace {

using namespace interlace;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string format;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json header(const char* command, const Common& c) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = c.seed;
  return j;
}

std::string format_or(const Common& c, const char* fallback) { return c.format.empty() ? fallback : c.format; }

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + c.out);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + c.out);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// sample-kernel

struct KernelArgs {
  std::string kernel;
  double alpha = 0.0;
  std::vector<double> x;
  std::size_t n = 1000;
  std::string method = "rejection";
};

int run_sample_kernel(const KernelArgs& a, const Common& c) {
  const OrderedPoint x(a.x);
  const bool matrix = a.method == "matrix";
  if (matrix && (a.kernel == "L" || !is_nonneg_integer(a.alpha))) {
    throw UsageError("--method matrix needs kernel lambda-eq or lambda-plus and a non-negative integer alpha");
  }
  const KernelParams kp(a.alpha);
  const int ia = static_cast<int>(a.alpha);
  const auto pts = monte_carlo<OrderedPoint>(a.n, derive_seed(c.seed, StreamTag::Kernel), c.threads,
                                             [&](RandomStream& rng, std::size_t) {
                                               if (a.kernel == "L") return sample_L(x, rng);
                                               if (a.kernel == "lambda-eq") {
                                                 return matrix ? sample_lambda_eq_via_matrices(ia, x, rng)
                                                               : sample_lambda_eq(kp, x, rng);
                                               }
                                               return matrix ? sample_lambda_plus_via_matrices(ia, x, rng)
                                                             : sample_lambda_plus(kp, x, rng);
                                             });
  const std::size_t dim = a.kernel == "lambda-eq" ? x.dim() : x.dim() - 1;
  std::ostringstream os;
  if (format_or(c, "csv") == "csv") {
    write_points_csv(os, pts, "y", dim);
    emit(c, os.str());
  } else {
    Json j = header("sample-kernel", c);
    j["params"] = {{"kernel", a.kernel}, {"alpha", json_number(a.alpha)}, {"x", json_numbers(a.x)},
                   {"n", a.n}, {"method", a.method}};
    j["samples"] = points_json(pts);
    emit(c, dump(j));
  }
  return kExitOk;
}

// sample-ensemble

struct EnsembleArgs {
  std::string ensemble = "pickrell";
  double s = 1.0;
  double alpha = 0.0;
  int N = 1;
  std::size_t n = 1000;
  std::string method = "mcmc";
  McmcOptions mcmc;
};

int run_sample_ensemble(const EnsembleArgs& a, const Common& c) {
  std::vector<OrderedPoint> pts;
  Json summary;
  McmcOptions opt = a.mcmc;
  opt.threads = c.threads;
  if (a.ensemble == "laguerre") {
    if (!is_nonneg_integer(a.alpha)) throw UsageError("laguerre ensemble needs a non-negative integer alpha");
    pts = monte_carlo<OrderedPoint>(a.n, derive_seed(c.seed, StreamTag::Ensemble), c.threads,
                                    [&](RandomStream& rng, std::size_t) { return sample_laguerre(static_cast<int>(a.alpha), a.N, rng); });
    summary["method"] = "wishart";
    summary["exact"] = true;
  } else {
    const EnsembleMethod m = a.method == "auto" ? EnsembleMethod::Auto
                             : a.method == "exact" ? EnsembleMethod::Exact
                                                   : EnsembleMethod::Mcmc;
    RandomStream rng(derive_seed(c.seed, StreamTag::Ensemble));
    EnsembleSample es = sample_pickrell(EnsembleParams(a.s, a.alpha, a.N), a.n, rng, opt, m);
    pts = std::move(es.points);
    summary["method"] = es.method;
    summary["exact"] = es.exact;
    summary["acceptance_rate"] = json_number(es.acceptance_rate);
  }
  std::ostringstream os;
  if (format_or(c, "csv") == "csv") {
    write_points_csv(os, pts, "x", static_cast<std::size_t>(a.N));
    emit(c, os.str());
  } else {
    Json j = header("sample-ensemble", c);
    j["params"] = {{"ensemble", a.ensemble}, {"s", json_number(a.s)}, {"alpha", json_number(a.alpha)},
                   {"N", a.N}, {"n", a.n}, {"method", a.method}, {"burn-in", opt.burn_in},
                   {"thin", opt.thin}, {"step", json_number(opt.step)}, {"chains", opt.chains}};
    for (auto& [k, v] : summary.items()) j[k] = v;
    j["samples"] = points_json(pts);
    emit(c, dump(j));
  }
  return kExitOk;
}

// simulate

struct SimulateArgs {
  std::string process = "laguerre";
  std::string scheme = "euler";
  double s = 1.0;
  double alpha = 0.0;
  std::vector<double> x0;
  double t = 1.0;
  double dt = 1e-3;
  std::size_t paths = 1000;
};

int run_simulate(const SimulateArgs& a, const Common& c) {
  const OrderedPoint x0(a.x0);
  const bool lift = a.scheme == "matrix";
  if (lift && a.process == "laguerre" && !is_nonneg_integer(a.alpha)) {
    throw UsageError("--scheme matrix for laguerre needs a non-negative integer alpha");
  }
  const SdeConfig cfg(a.dt, a.t, lift ? Scheme::MatrixLift : Scheme::EulerGuarded);
  const PickrellParams pp(a.s, a.alpha, static_cast<int>(x0.dim()));
  struct Path {
    OrderedPoint x;
    GuardStats g;
  };
  const auto paths = monte_carlo<Path>(a.paths, derive_seed(c.seed, StreamTag::Evolve), c.threads,
                                       [&](RandomStream& rng, std::size_t) {
                                         Path p;
                                         if (a.process == "laguerre") {
                                           p.x = lift ? simulate_laguerre_matrix(static_cast<int>(a.alpha), x0, cfg, rng)
                                                      : simulate_laguerre(a.alpha, x0, cfg, rng, &p.g);
                                         } else {
                                           p.x = lift ? simulate_pickrell_matrix(pp, x0, cfg, rng)
                                                      : simulate_pickrell_particles(pp, x0, cfg, rng, &p.g);
                                         }
                                         return p;
                                       });
  std::vector<OrderedPoint> pts;
  GuardStats g;
  for (const auto& p : paths) {
    pts.push_back(p.x);
    g += p.g;
  }
  std::ostringstream os;
  if (format_or(c, "csv") == "csv") {
    write_points_csv(os, pts, "x", x0.dim());
    emit(c, os.str());
  } else {
    Json j = header("simulate", c);
    j["params"] = {{"process", a.process}, {"scheme", a.scheme}, {"s", json_number(a.s)},
                   {"alpha", json_number(a.alpha)}, {"x0", json_numbers(a.x0)}, {"t", json_number(a.t)},
                   {"dt", json_number(a.dt)}, {"paths", a.paths}};
    if (!lift) {
      j["guard"] = {{"steps", g.steps}, {"guarded_steps", g.guarded_steps}, {"reflections", g.reflections},
                    {"nudges", g.nudges}, {"refinements", g.refinements}};
    }
    j["terminal"] = points_json(pts);
    emit(c, dump(j));
  }
  return kExitOk;
}

// boundary-flow

struct FlowArgs {
  std::vector<double> alphas;
  double gamma0 = 1.0;
  double t = 0.0;
};

int run_boundary_flow(const FlowArgs& a, const Common& c) {
  const BoundaryPoint w0(a.alphas, a.gamma0);
  const BoundaryPoint w = boundary_flow(w0, a.t);
  const std::string fmt = format_or(c, "text");
  std::ostringstream os;
  if (fmt == "text") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t = %.6f\n", a.t);
    os << buf;
    std::snprintf(buf, sizeof buf, "γ = %.6f\n", w.gamma());
    os << buf;
    for (std::size_t i = 0; i < w.alphas().size(); ++i) {
      std::snprintf(buf, sizeof buf, "α_%zu = %.6f\n", i + 1, w.alphas()[i]);
      os << buf;
    }
  } else if (fmt == "csv") {
    std::vector<std::string> head{"t", "gamma"};
    for (const auto& h : indexed_header("alpha", w.alphas().size())) head.push_back(h);
    write_csv_row(os, head);
    std::vector<std::string> row{fmt9(a.t), fmt9(w.gamma())};
    for (double v : w.alphas()) row.push_back(fmt9(v));
    write_csv_row(os, row);
  } else {
    Json j = header("boundary-flow", c);
    j["params"] = {{"alphas", json_numbers(a.alphas)}, {"gamma0", json_number(a.gamma0)}, {"t", json_number(a.t)}};
    j["omega"] = to_json(w);
    os << dump(j);
  }
  emit(c, os.str());
  return kExitOk;
}

// branching

struct BranchingArgs {
  std::vector<int> lambda;
  int N = 0;
  double alpha = 0.0;
  double beta = 0.0;
  long kappa = 0;
  int grid = 30;
};

int run_branching(const BranchingArgs& a, const Common& c) {
  const Partition lambda = Partition::from_ascending(a.lambda);
  const std::size_t N = a.N > 0 ? static_cast<std::size_t>(a.N) : lambda.size() - 1;
  if (N < 1) throw UsageError("branching: need N >= 1 (give --N or a lambda with at least two parts)");
  const JacobiParams p(a.alpha, a.beta);
  const Json params = {{"lambda", a.lambda}, {"N", N}, {"alpha", json_number(a.alpha)},
                       {"beta", json_number(a.beta)}, {"kappa", a.kappa}, {"grid", a.grid}};
  std::ostringstream os;
  if (a.kappa > 0) {
    if (N + 1 != lambda.size()) throw UsageError("branching --kappa: lambda must have exactly N+1 parts");
    const auto r = compare_scaling_limit(lambda, a.kappa, p.alpha, p, a.grid);
    if (format_or(c, "json") == "csv") {
      write_csv_row(os, {"kappa", "discrepancy", "row_mass", "support_size"});
      write_csv_row(os, {std::to_string(r.kappa), fmt9(r.discrepancy), fmt9(r.row_mass), std::to_string(r.support_size)});
    } else {
      Json j = header("branching", c);
      j.erase("seed");
      j["params"] = params;
      j["kappa"] = r.kappa;
      j["discrepancy"] = json_number(r.discrepancy);
      j["row_mass"] = json_number(r.row_mass);
      j["support_size"] = r.support_size;
      os << dump(j);
    }
    emit(c, os.str());
    return kExitOk;
  }
  const auto row = discrete_kernel_row(lambda.resized(std::max(N + 1, lambda.size())), N, p);
  // Printed ascending, like the input.
  if (format_or(c, "csv") == "csv") {
    auto head = indexed_header("nu", N);
    head.push_back("probability");
    write_csv_row(os, head);
    for (const auto& [nu, prob] : row) {
      std::vector<std::string> fields;
      for (auto it = nu.rbegin(); it != nu.rend(); ++it) fields.push_back(std::to_string(*it));
      fields.push_back(fmt9(prob));
      write_csv_row(os, fields);
    }
  } else {
    Json j = header("branching", c);
    j.erase("seed");
    j["params"] = params;
    Json rows = Json::array();
    double total = 0.0;
    for (const auto& [nu, prob] : row) {
      rows.push_back({{"nu", std::vector<int>(nu.rbegin(), nu.rend())}, {"probability", json_number(prob)}});
      total += prob;
    }
    j["row"] = std::move(rows);
    j["row_sum"] = json_number(total);
    os << dump(j);
  }
  emit(c, os.str());
  return kExitOk;
}

// verify

struct VerifyArgs {
  std::string suite;
  std::size_t n_perm = 999;
  double level = kDefaultLevel;
  double scale = 1.0;
};

int run_verify(const VerifyArgs& a, const Common& c) {
  const auto suite = parse_suite(a.suite);
  if (!suite) throw UsageError("unknown suite '" + a.suite + "'");
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.threads = c.threads;
  opt.n_perm = a.n_perm;
  opt.level = a.level;
  opt.scale = a.scale;
  const auto reports = run_suite(*suite, opt);
  const Json config = {{"suite", a.suite}, {"seed", c.seed}, {"n-perm", a.n_perm},
                       {"level", json_number(a.level)}, {"scale", json_number(a.scale)}};
  bool all = true;
  std::ostringstream os;
  const std::string fmt = format_or(c, "json");
  if (fmt == "csv") write_csv_row(os, {"name", "statistic", "p_value", "threshold", "passed"});
  Json arr = Json::array();
  for (const auto& r : reports) {
    all = all && r.passed;
    std::fprintf(stderr, "%-5s %-32s stat=%s p=%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                 fmt9(r.statistic).c_str(), r.p_value ? fmt9(*r.p_value).c_str() : "-");
    if (fmt == "csv") {
      write_csv_row(os, {r.name, fmt9(r.statistic), r.p_value ? fmt9(*r.p_value) : "", fmt9(r.threshold),
                         r.passed ? "true" : "false"});
    } else {
      Json j = to_json(r);
      j["version"] = kVersion;
      j["config"] = config;
      arr.push_back(std::move(j));
    }
  }
  if (fmt != "csv") os << dump(arr);
  emit(c, os.str());
  return all ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interlace: interlacing kernels, Laguerre/Pickrell diffusions and their verification"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key = value config file; keys are flag names, flags given on the command line win");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Master seed (default 0)")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker cap, 0 = all cores; results do not depend on it");
  app.add_option("--out", common.out, "Output file (default stdout)");
  app.add_option("--format", common.format, "csv or json (boundary-flow also: text)")
      ->check(CLI::IsMember({"csv", "json", "text"}));

  KernelArgs ka;
  auto* sk = app.add_subcommand("sample-kernel", "Draw y ~ K(x, .) for K in {L, lambda-eq, lambda-plus}");
  sk->add_option("--kernel", ka.kernel)->required()->check(CLI::IsMember({"L", "lambda-eq", "lambda-plus"}));
  sk->add_option("--alpha", ka.alpha)->capture_default_str();
  sk->add_option("--x", ka.x, "Comma-separated start point")->required()->delimiter(',');
  sk->add_option("--n", ka.n, "Number of samples")->capture_default_str();
  sk->add_option("--method", ka.method)->check(CLI::IsMember({"rejection", "matrix"}))->capture_default_str();

  EnsembleArgs ea;
  auto* se = app.add_subcommand("sample-ensemble", "Samples of the Pickrell or Laguerre ensemble");
  se->add_option("--ensemble", ea.ensemble)->check(CLI::IsMember({"pickrell", "laguerre"}))->capture_default_str();
  se->add_option("--s", ea.s)->capture_default_str();
  se->add_option("--alpha", ea.alpha)->capture_default_str();
  se->add_option("--N", ea.N)->check(CLI::PositiveNumber)->capture_default_str();
  se->add_option("--n", ea.n)->capture_default_str();
  se->add_option("--method", ea.method)->check(CLI::IsMember({"auto", "mcmc", "exact"}))->capture_default_str();
  se->add_option("--burn-in", ea.mcmc.burn_in)->capture_default_str();
  se->add_option("--thin", ea.mcmc.thin)->capture_default_str();
  se->add_option("--step", ea.mcmc.step)->capture_default_str();
  se->add_option("--chains", ea.mcmc.chains)->capture_default_str();

  SimulateArgs sa;
  auto* si = app.add_subcommand("simulate", "Terminal states of the Laguerre or Pickrell particle system");
  si->add_option("--process", sa.process)->check(CLI::IsMember({"laguerre", "pickrell"}))->capture_default_str();
  si->add_option("--scheme", sa.scheme)->check(CLI::IsMember({"euler", "matrix"}))->capture_default_str();
  si->add_option("--s", sa.s)->capture_default_str();
  si->add_option("--alpha", sa.alpha)->capture_default_str();
  si->add_option("--x0", sa.x0, "Comma-separated start point")->required()->delimiter(',');
  si->add_option("--t", sa.t)->capture_default_str();
  si->add_option("--dt", sa.dt)->capture_default_str();
  si->add_option("--paths", sa.paths)->capture_default_str();

  FlowArgs fa;
  auto* bf = app.add_subcommand("boundary-flow", "Deterministic flow of a boundary point");
  bf->add_option("--alphas", fa.alphas, "Comma-separated, non-increasing")->delimiter(',');
  bf->add_option("--gamma0", fa.gamma0)->required();
  bf->add_option("--t", fa.t)->required();

  BranchingArgs ba;
  auto* br = app.add_subcommand("branching", "Row of the discrete Jacobi branching kernel, or its scaling limit");
  br->add_option("--lambda", ba.lambda, "Comma-separated parts, ascending")->required()->delimiter(',');
  br->add_option("--N", ba.N, "Level of nu (default: parts of lambda minus one)");
  br->add_option("--alpha", ba.alpha)->capture_default_str();
  br->add_option("--beta", ba.beta)->capture_default_str();
  br->add_option("--kappa", ba.kappa, "Compare kappa^-1 * row with the continuous kernel");
  br->add_option("--grid", ba.grid)->capture_default_str();

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Run a verification suite; JSON array of reports");
  ve->add_option("--suite", va.suite)
      ->required()
      ->check(CLI::IsMember({"identities", "samplers", "intertwine", "invariance", "consistency", "flow", "boundary",
                             "branching-limit", "all"}));
  ve->add_option("--n-perm", va.n_perm)->capture_default_str();
  ve->add_option("--level", va.level)->capture_default_str();
  ve->add_option("--scale", va.scale, "Multiplies sample sizes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (common.format == "text" && !bf->parsed()) {
    std::cerr << "error: --format text is only available for boundary-flow\n";
    return kExitUsage;
  }
  std::fprintf(stderr, "seed=%llu threads=%u\n", static_cast<unsigned long long>(common.seed), common.threads);
  try {
    if (sk->parsed()) return run_sample_kernel(ka, common);
    if (se->parsed()) return run_sample_ensemble(ea, common);
    if (si->parsed()) return run_simulate(sa, common);
    if (bf->parsed()) return run_boundary_flow(fa, common);
    if (br->parsed()) return run_branching(ba, common);
    if (ve->parsed()) return run_verify(va, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
