// bitreset: simulate, solve, bound, sweep and verify finite-time bit reset.
//
// Exit codes: 0 ok, 1 verification found violations, 2 usage or invalid
// input, 3 numerical failure, 4 infeasible design target.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bitreset/bounds.hpp"
#include "bitreset/errors.hpp"
#include "bitreset/protocols.hpp"
#include "bitreset/sweep.hpp"
#include "bitreset/verify.hpp"

namespace {

using namespace bitreset;
using json = nlohmann::json;

constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;

struct BathFlags {
  double beta = 1.0;
  double mu = 0.1;

  void attach(CLI::App* app) {
    app->add_option("--beta", beta, "inverse temperature")->capture_default_str();
    app->add_option("--mu", mu, "partial-swap rate")->capture_default_str();
  }
  BathParams get() const { return BathParams(beta, mu); }
};

struct RunFlags {
  int n_steps = 10;
  double e_max = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  bool as_json = false;
  BathFlags bath;
};

using Fields = std::vector<std::pair<std::string, double>>;

void print_fields(const Fields& fields, bool as_json) {
  if (as_json) {
    json out = json::object();
    for (const auto& [k, v] : fields) out[k] = v;
    std::cout << out.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : fields) std::printf("%-18s %s\n", k.c_str(), format_number(v).c_str());
}

Fields run_fields(const RunRecord& run, const BathParams& bath) {
  return {{"tau", run.tau},
          {"e_max", run.e_max},
          {"mu", bath.mu()},
          {"beta", bath.beta()},
          {"W", run.work},
          {"W_qs", run.w_qs},
          {"W_pn", run.w_pn},
          {"D", run.d_final},
          {"Sigma", run.sigma},
          {"epsilon", run.epsilon},
          {"identity_residual", bath.beta() * run.w_pn - run.d_final - run.sigma}};
}

int cmd_simulate(const RunFlags& f, bool discrete) {
  const BathParams bath = f.bath.get();
  if (discrete) {
    const RunRecord run = run_discrete(DiscreteProtocol(f.n_steps, f.e_max, f.tau), bath);
    Fields fields = run_fields(run, bath);
    fields.insert(fields.begin(), {"n_steps", static_cast<double>(f.n_steps)});
    print_fields(fields, f.as_json);
  } else {
    const RunRecord run = run_continuous(ContinuousProtocol(f.delta, f.tau), bath);
    Fields fields = run_fields(run, bath);
    fields.insert(fields.begin(), {"delta", f.delta});
    print_fields(fields, f.as_json);
  }
  return 0;
}

int cmd_bounds(const RunFlags& f, bool discrete) {
  const BathParams bath = f.bath.get();
  std::optional<RunRecord> run;
  std::vector<BoundReport> reports;
  if (discrete) {
    const DiscreteProtocol proto(f.n_steps, f.e_max, f.tau);
    run = run_discrete(proto, bath);
    reports = discrete_bounds(*run, proto, bath);
  } else {
    const ContinuousProtocol proto(f.delta, f.tau);
    run = run_continuous(proto, bath);
    reports = continuous_bounds(*run, proto, bath);
  }
  bool violated = false;
  std::printf("%-12s %-6s %-10s %-24s %-24s %s\n", "bound", "side", "target", "value", "observed", "verdict");
  for (const BoundReport& r : reports) {
    const double obs = observed(*run, r.target, bath);
    const Verdict v = check(r, obs);
    violated |= v == Verdict::violated;
    std::printf("%-12s %-6s %-10s %-24s %-24s %s\n", r.name.c_str(), r.side == Side::lower ? "lower" : "upper",
                std::string(to_string(r.target)).c_str(), r.value ? format_number(*r.value).c_str() : "NA",
                format_number(obs).c_str(), std::string(to_string(v)).c_str());
    for (const auto& [k, x] : r.extras) std::printf("    %-20s %s\n", k.c_str(), format_number(x).c_str());
  }
  if (discrete) {
    const DiscreteProtocol proto(f.n_steps, f.e_max, f.tau);
    std::printf("%-12s threshold tau = %s, %s\n", "eq11", format_number(sigma_dominance_threshold(f.n_steps, bath)).c_str(),
                sigma_dominates_eq11(proto, bath) ? "Sigma dominates (D <= Sigma expected)" : "no claim");
  }
  return violated ? kExitViolations : 0;
}

struct SolveFlags {
  double epsilon = 0.05;
  double tau = 0.0;
  int n_steps = 10;
  bool as_json = false;
  BathFlags bath;
};

int cmd_solve(const SolveFlags& f, bool discrete) {
  const BathParams bath = f.bath.get();
  Fields fields{{"epsilon", f.epsilon},
                {"tau", f.tau},
                {"tau0", minimal_reset_time(f.epsilon, bath)},
                {"epsilon_floor", reset_error_floor(f.tau, bath)}};
  try {
    if (discrete) {
      const double e_max = solve_emax_discrete(f.epsilon, f.n_steps, f.tau, bath);
      fields.insert(fields.begin(), {"n_steps", static_cast<double>(f.n_steps)});
      fields.emplace_back("e_max", e_max);
      if (f.epsilon < 0.5) {
        const EmaxSandwich s = emax_sandwich_eq15(f.epsilon, f.n_steps, bath);
        fields.emplace_back("emax_lb_eq15", s.lower);
        if (s.upper) fields.emplace_back("emax_ub_eq15", *s.upper);
      }
    } else {
      const double delta = solve_delta_continuous(f.epsilon, f.tau, bath);
      fields.emplace_back("delta", delta);
      fields.emplace_back("e_max", ContinuousProtocol(delta, f.tau).e_max(bath));
      if (f.epsilon < 0.5) fields.emplace_back("emax_lb_eq15", emax_sandwich_eq15(f.epsilon, 1, bath).lower);
    }
  } catch (const InfeasibleTarget& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    std::fprintf(stderr, "tau0 = %s\nepsilon_floor = %s\n", format_number(e.min_time()).c_str(),
                 format_number(e.floor()).c_str());
    return kExitInfeasible;
  }
  print_fields(fields, f.as_json);
  if (!f.as_json && discrete && f.epsilon < 0.5 && !emax_sandwich_eq15(f.epsilon, f.n_steps, bath).upper) {
    std::printf("%-18s %s\n", "emax_ub_eq15", "NA (not applicable: eps - (2 eps)^(1/N)/2 <= 0)");
  }
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, unsigned threads) {
  const SweepSpec spec = load_sweep_spec(spec_path);
  const Table table = run_sweep(spec, threads == 0 ? default_thread_count() : threads);
  if (out_path.empty() || out_path == "-") {
    emit_csv(table, std::cout);
  } else {
    write_csv_file(table, out_path);
  }
  return 0;
}

int cmd_verify(int n_steps, const BathFlags& bath) {
  const VerificationReport report = verify_all({n_steps, bath.get()});
  for (const Violation& v : report.violations) {
    std::printf("VIOLATION %s | %s | bound=%s observed=%s\n", v.check.c_str(), v.context.c_str(),
                format_number(v.bound).c_str(), format_number(v.observed).c_str());
  }
  std::printf("%d checks, %d not applicable, %zu violations\n", report.checks, report.not_applicable,
              report.violations.size());
  return report.ok() ? 0 : kExitViolations;
}

void add_run_flags(CLI::App* app, RunFlags& f, bool discrete) {
  if (discrete) {
    app->add_option("--n", f.n_steps, "number of steps N")->capture_default_str();
    app->add_option("--emax", f.e_max, "final energy gap E_max")->required();
  } else {
    app->add_option("--delta", f.delta, "initial jump (in units of 1/beta)")->required();
  }
  app->add_option("--tau", f.tau, "protocol duration")->required();
  f.bath.attach(app);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time bit reset in a two-level system"};
  app.require_subcommand(1);

  RunFlags sim_d, sim_c, bnd_d, bnd_c;
  auto* simulate = app.add_subcommand("simulate", "run one protocol and print its thermodynamics");
  simulate->require_subcommand(1);
  auto* sim_disc = simulate->add_subcommand("discrete", "N-step discrete shifting");
  add_run_flags(sim_disc, sim_d, true);
  sim_disc->add_flag("--json", sim_d.as_json, "print JSON");
  auto* sim_cont = simulate->add_subcommand("continuous", "linear drive with initial jump");
  add_run_flags(sim_cont, sim_c, false);
  sim_cont->add_flag("--json", sim_c.as_json, "print JSON");

  auto* bounds = app.add_subcommand("bounds", "evaluate every bound against a run");
  bounds->require_subcommand(1);
  auto* bnd_disc = bounds->add_subcommand("discrete", "N-step discrete shifting");
  add_run_flags(bnd_disc, bnd_d, true);
  auto* bnd_cont = bounds->add_subcommand("continuous", "linear drive with initial jump");
  add_run_flags(bnd_cont, bnd_c, false);

  SolveFlags sol_d, sol_c;
  auto* solve = app.add_subcommand("solve", "find the drive that reaches a target reset error");
  solve->require_subcommand(1);
  auto* sol_disc = solve->add_subcommand("discrete", "solve for E_max");
  sol_disc->add_option("--eps", sol_d.epsilon, "target reset error")->required();
  sol_disc->add_option("--tau", sol_d.tau, "protocol duration")->required();
  sol_disc->add_option("--n", sol_d.n_steps, "number of steps N")->capture_default_str();
  sol_disc->add_flag("--json", sol_d.as_json, "print JSON");
  sol_d.bath.attach(sol_disc);
  auto* sol_cont = solve->add_subcommand("continuous", "solve for the initial jump delta");
  sol_cont->add_option("--eps", sol_c.epsilon, "target reset error")->required();
  sol_cont->add_option("--tau", sol_c.tau, "protocol duration")->required();
  sol_cont->add_flag("--json", sol_c.as_json, "print JSON");
  sol_c.bath.attach(sol_cont);

  std::string spec_path, out_path;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "run a JSON sweep spec and write CSV");
  sweep->add_option("--spec", spec_path, "sweep spec (JSON)")->required();
  sweep->add_option("--out", out_path, "output CSV (default: stdout)");
  sweep->add_option("--threads", threads, "worker threads (default: BITRESET_THREADS or all cores)");

  int verify_n = 10;
  BathFlags verify_bath;
  auto* verify = app.add_subcommand("verify", "check every invariant and bound on the built-in grid");
  verify->add_option("--n", verify_n, "number of steps N for the discrete grid")->capture_default_str();
  verify_bath.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim_disc) return cmd_simulate(sim_d, true);
    if (*sim_cont) return cmd_simulate(sim_c, false);
    if (*bnd_disc) return cmd_bounds(bnd_d, true);
    if (*bnd_cont) return cmd_bounds(bnd_c, false);
    if (*sol_disc) return cmd_solve(sol_d, true);
    if (*sol_cont) return cmd_solve(sol_c, false);
    if (*sweep) return cmd_sweep(spec_path, out_path, threads);
    if (*verify) return cmd_verify(verify_n, verify_bath);
  } catch (const InfeasibleTarget& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
