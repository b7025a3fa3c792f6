#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <nlohmann/json.hpp>
#include <ostream>

#include "unisgd/check.hpp"
#include "unisgd/driver.hpp"
#include "unisgd/errors.hpp"
#include "unisgd/theory.hpp"

namespace unisgd::cli {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kHeader = "iter,dist_sq,f_gap,rel_subopt,sigma_sq,lyapunov\n";

void write_rows(const std::filesystem::path& file, const std::vector<std::size_t>& iters,
                const std::array<const std::vector<double>*, 5>& columns) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << kHeader;
  for (std::size_t t = 0; t < iters.size(); ++t) {
    out << iters[t];
    for (const auto* col : columns) out << ',' << fmt((*col)[t]);
    out << '\n';
  }
}

nlohmann::json to_json(const ParamSet& p) {
  return {{"A", p.A}, {"B", p.B}, {"rho", p.rho}, {"C", p.C}, {"D1", p.D1}, {"D2", p.D2}};
}

// JSON has no NaN or infinity; those become null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

RunConfig run_config(const ExperimentSpec& spec, const MethodEntry& m) {
  RunConfig c;
  c.method = m.config;
  c.step = m.step;
  c.lyapunov_weight = m.lyapunov_weight;
  c.iterations = spec.iterations;
  c.seeds = spec.seeds;
  c.record_every = spec.record_every;
  c.diagnostics = spec.diagnostics;
  c.threads = spec.threads;
  return c;
}

void print_params(std::ostream& out, const ParamSet& p) {
  out << "  A=" << fmt(p.A) << " B=" << fmt(p.B) << " rho=" << fmt(p.rho) << " C=" << fmt(p.C)
      << " D1=" << fmt(p.D1) << " D2=" << fmt(p.D2) << '\n';
}

}  // namespace

int cmd_run(const ExperimentSpec& spec, std::ostream& out) {
  const Problem problem = build_problem(spec.problem);
  const Reference ref = solve_reference(problem);
  std::filesystem::create_directories(spec.output);

  nlohmann::json summary;
  summary["problem"] = {{"n", problem.n()},
                        {"d", problem.d()},
                        {"smoothness", problem.smoothness()},
                        {"strong_convexity", problem.strong_convexity()},
                        {"optimal_objective", ref.objective}};
  summary["iterations"] = spec.iterations;
  summary["seeds"] = spec.seeds;
  summary["methods"] = nlohmann::json::array();

  for (const auto& m : spec.methods) {
    if (!m.standalone) continue;
    const RunResult r = run(problem, &ref, run_config(spec, m));
    for (const auto& tr : r.traces) {
      write_rows(spec.output / (m.label + "_seed" + std::to_string(tr.seed) + ".csv"), tr.iterations,
                 {&tr.dist_sq, &tr.f_gap, &tr.rel_subopt, &tr.sigma_sq, &tr.lyapunov});
    }
    const Ensemble& e = r.ensemble;
    write_rows(spec.output / (m.label + "_mean.csv"), e.iterations,
               {&e.dist_sq.mean, &e.f_gap.mean, &e.rel_subopt.mean, &e.sigma_sq.mean, &e.lyapunov.mean});
    write_rows(spec.output / (m.label + "_stderr.csv"), e.iterations,
               {&e.dist_sq.stderr_, &e.f_gap.stderr_, &e.rel_subopt.stderr_, &e.sigma_sq.stderr_,
                &e.lyapunov.stderr_});

    nlohmann::json entry{{"label", m.label},
                         {"method", to_string(r.method.method)},
                         {"step", r.step},
                         {"lyapunov_weight", number(r.lyapunov_weight)}};
    if (r.params) entry["params"] = to_json(*r.params);
    if (r.predicted)
      entry["predicted"] = {{"applicable", r.predicted->applicable},
                            {"contraction", number(r.predicted->contraction)},
                            {"neighborhood", number(r.predicted->neighborhood)}};
    entry["final_dist_sq"] = number(e.dist_sq.mean.back());
    summary["methods"].push_back(entry);
    out << m.label << ": step " << fmt(r.step) << ", final mean dist_sq " << fmt(e.dist_sq.mean.back()) << '\n';
  }
  std::ofstream(spec.output / "summary.json") << summary.dump(2) << '\n';
  return ExitCode::ok;
}

int cmd_rates(const ExperimentSpec& spec, std::ostream& out) {
  const Problem problem = build_problem(spec.problem);
  const Reference ref = solve_reference(problem);
  const double mu = problem.strong_convexity();
  out << "mu=" << fmt(mu) << " L=" << fmt(problem.smoothness()) << '\n';
  for (const auto& m : spec.methods) {
    if (!m.standalone) continue;
    const MethodConfig resolved = resolve(m.config, problem);
    out << m.label << " (" << to_string(resolved.method) << ")\n";
    std::optional<ParamSet> maybe;
    try {
      maybe = method_params(resolved, problem, &ref);
    } catch (const ConfigError&) {
      out << "  no parameter set; runs need an explicit step\n";
      continue;
    }
    const ParamSet& params = *maybe;
    const double smooth = method_smoothness(resolved, problem);
    print_params(out, params);
    if (resolved.method == Method::svrg) {
      RunConfig c = run_config(spec, m);
      const double step = choose_step(problem, resolved, &ref, c).step;
      out << "  per-epoch bound: step=" << fmt(step) << " epoch=" << resolved.epoch_length
          << " factor=" << fmt(svrg_epoch_factor(step, smooth, mu, resolved.epoch_length)) << '\n';
      continue;
    }
    const double M = m.lyapunov_weight.value_or(default_lyapunov_weight(resolved, problem, params));
    const double gamma_max = stepsize_bound(params, M, mu);
    const double gamma = m.step.value_or(gamma_max);
    const RateReport r = rate(params, M, gamma, mu);
    out << "  M=" << fmt(M) << " gamma_max=" << fmt(gamma_max) << " gamma=" << fmt(gamma) << '\n';
    out << "  contraction=" << fmt(r.contraction) << " neighborhood=" << fmt(r.neighborhood)
        << " complexity=" << fmt(r.complexity) << (r.applicable ? "" : " (not applicable)") << '\n';
  }
  return ExitCode::ok;
}

int cmd_check(const ExperimentSpec& spec, std::ostream& out) {
  const Problem problem = build_problem(spec.problem);
  const Reference ref = solve_reference(problem);
  bool all_ok = true;
  for (const auto& m : spec.methods) {
    if (!m.standalone) continue;
    const MethodConfig resolved = resolve(m.config, problem);
    ParamSet params = method_params(resolved, problem, &ref);
    params.A *= m.scale_A;
    CheckOptions options{spec.check.samples, spec.check.states, spec.check.seed};
    const AssumptionReport report = check_assumption(problem, resolved, ref, params, options);
    out << m.label << " (" << to_string(resolved.method) << ")\n";
    print_params(out, params);
    for (std::size_t s = 0; s < report.states.size(); ++s) {
      const StateCheck& c = report.states[s];
      out << "  state " << s << ": gradient " << fmt(c.gradient_lhs) << " +- " << fmt(c.gradient_se)
          << " vs " << fmt(c.gradient_rhs) << (c.gradient_ok ? " pass" : " FAIL") << "; memory "
          << fmt(c.memory_lhs) << " +- " << fmt(c.memory_se) << " vs " << fmt(c.memory_rhs)
          << (c.memory_ok ? " pass" : " FAIL") << '\n';
    }
    out << "  gradient " << report.gradient_passes << '/' << report.states.size() << ", memory "
        << report.memory_passes << '/' << report.states.size() << '\n';
    all_ok = all_ok && report.ok();
  }
  return all_ok ? ExitCode::ok : ExitCode::check_failed;
}

int cmd_solve(const ExperimentSpec& spec, std::ostream& out) {
  const Problem problem = build_problem(spec.problem);
  const Reference ref = solve_reference(problem);
  out << "iterations=" << ref.iterations << '\n';
  out << "objective=" << fmt(ref.objective) << '\n';
  out << "smooth_value=" << fmt(ref.value) << '\n';
  out << "gradient_norm=" << fmt(ref.gradient.norm()) << '\n';
  out << "x";
  for (double v : ref.x) out << ',' << fmt(v);
  out << '\n';
  return ExitCode::ok;
}

int dispatch(const std::string& command, const std::filesystem::path& spec_file, std::ostream& out,
             std::ostream& err) {
  try {
    const ExperimentSpec spec = load_spec(spec_file);
    if (command == "run") return cmd_run(spec, out);
    if (command == "rates") return cmd_rates(spec, out);
    if (command == "check") return cmd_check(spec, out);
    if (command == "solve") return cmd_solve(spec, out);
    err << "unknown command " << command << '\n';
    return ExitCode::spec_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return ExitCode::numerical_failure;
  } catch (const ParseError& e) {
    err << spec_file.string() << ": " << e.what() << '\n';
    return ExitCode::spec_error;
  } catch (const std::exception& e) {
    err << spec_file.string() << ": " << e.what() << '\n';
    return ExitCode::spec_error;
  }
}

}  // namespace unisgd::cli
