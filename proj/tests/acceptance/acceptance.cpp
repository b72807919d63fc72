// End-to-end reproduction checks. One line per criterion; exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "esld/config.hpp"
#include "esld/experiments.hpp"

using namespace esld;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig example_one() {
  ExperimentConfig cfg;
  cfg.objective = "f1";
  cfg.fields = "example";
  cfg.fields_a = 5.0;
  cfg.dither_kind = DitherKind::trig;
  cfg.amplitude = AmplitudeLaw::sqrt_omega_scaled;
  cfg.x0 = {1.8};
  cfg.integrator = {2000, Method::rk4};
  return cfg;
}

Outcome error_scaling() {
  ExperimentConfig cfg = example_one();
  cfg.periods = {0.1, 0.01, 0.001};
  cfg.run_horizon = 2.0;
  cfg.report_time = 1.0;
  const CommandResult r = cmd_compare(cfg);
  const CsvReport& ratios = r.extra("ratios");
  Outcome o{!r.diverged && ratios.rows.size() == 2, "ratios at t=1:"};
  for (const auto& row : ratios.rows) {
    const double ratio = std::stod(row[4]);
    o.pass = o.pass && ratio >= 5.0 && ratio <= 20.0;
    o.detail += " " + row[0] + "/" + row[1] + "=" + fmt("%.3f", ratio);
  }
  o.detail += " (need [5, 20])";
  return o;
}

Outcome one_period_consistency() {
  const Objective obj = make_f1();
  const VectorFieldPair vf = make_example_fields(5.0);
  const LieBracketField g0 = make_lie_bracket(vf);
  const IntegratorConfig cfg;
  auto residual = [&](double T) {
    const DitherPair d = make_trig_dither(T);
    const double x0[] = {1.8};
    const double sim = simulate_es(obj, vf, d, x0, T, cfg).back()[0];
    return std::abs(sim - 1.8 - recovered_gradient(obj, vf, g0, d, 1.8, cfg).value[0]);
  };
  const double c = residual(0.1) / 0.01;
  Outcome o{true, "C=" + fmt("%.4g", c) + ";"};
  for (double T : {0.01, 0.001}) {
    const double scaled = residual(T) / (c * T * T);
    o.pass = o.pass && scaled >= 1.0 / 3.0 && scaled <= 3.0;
    o.detail += " T=" + format_double(T) + ": residual/(C T^2)=" + fmt("%.3f", scaled);
  }
  o.detail += " (need [1/3, 3])";
  return o;
}

Outcome riemann_convergence() {
  const Objective obj = make_f1();
  const VectorFieldPair vf = make_example_fields(5.0);
  const LieBracketField g0 = make_lie_bracket(vf);
  const IntegratorConfig cfg;
  Outcome o{true, ""};
  for (double T : {0.1, 0.01, 0.001}) {
    const DitherPair d = make_trig_dither(T);
    const double limit = recovered_gradient(obj, vf, g0, d, 1.8, cfg).value[0];
    auto gap = [&](std::size_t n) {
      return std::abs(recovered_gradient_finite_n(obj, vf, g0, d, 1.8, n, cfg).value[0] - limit);
    };
    const double coarse = gap(10);
    const double fine = gap(640);
    o.pass = o.pass && fine <= coarse / 10.0;
    o.detail += "T=" + format_double(T) + ": |f640-lim|=" + fmt("%.2e", fine) +
                " vs |f10-lim|/10=" + fmt("%.2e", coarse / 10.0) + "; ";
  }
  o.detail += "relative to |lim|~0.4T";
  return o;
}

Outcome needle_order() {
  const double T = 0.1;
  const DitherPair d = make_trig_dither(T);
  IntegratorConfig cfg;
  cfg.steps_per_period = 8000;
  const double eps[] = {1e-2 * T, 5e-3 * T, 2.5e-3 * T, 1.25e-3 * T};
  const NeedleStudy s =
      needle_order_study(make_f1(), make_example_fields(5.0), d, 1.8, 0.1 * T, d.amplitude(), eps, cfg);
  Outcome o{s.ratios.size() == 3, "r(eps)/r(eps/2):"};
  for (double r : s.ratios) {
    o.pass = o.pass && r >= 3.5 && r <= 4.5;
    o.detail += " " + fmt("%.3f", r);
  }
  o.detail += " (need [3.5, 4.5])";
  return o;
}

Outcome stm_identities() {
  const Objective obj = make_f1();
  const VectorFieldPair vf = make_example_fields(5.0);
  const double x0[] = {1.8};
  auto table = [&](const DitherPair& d) {
    return build_stm(obj, vf, d, simulate_nominal(obj, vf, d, x0, d.period(), {}));
  };
  const double semigroup = stm_semigroup_error(table(make_trig_dither(0.1)), 1000, 1);
  Outcome o{semigroup <= 1e-10, "semigroup " + fmt("%.2e", semigroup) + " (<=1e-10);"};
  for (DitherKind kind : {DitherKind::trig, DitherKind::square, DitherKind::sawtooth}) {
    const SymmetryReport r = check_stm_symmetry(table(make_dither(kind, 0.1, AmplitudeLaw::sqrt_omega_scaled)));
    o.pass = o.pass && r.passed;
    o.detail += " " + to_string(kind) + " sym " + fmt("%.1e", r.max_violation / r.max_phi);
  }
  const SymmetryReport broken =
      check_stm_symmetry(table(make_trig_dither(0.1, AmplitudeLaw::unit).with_offsets(0.1, 0.0)));
  o.pass = o.pass && !broken.passed;
  o.detail += "; offset u1 sym " + fmt("%.1e", broken.max_violation / broken.max_phi) +
              (broken.passed ? " (wrongly passes)" : " (fails as required)");
  return o;
}

Outcome palindrome() {
  const double x0[] = {1.8};
  Outcome o{true, "max|x*(t)-x*(T-t)|:"};
  for (DitherKind kind : {DitherKind::trig, DitherKind::square, DitherKind::sawtooth}) {
    const DitherPair d = make_dither(kind, 0.1, AmplitudeLaw::sqrt_omega_scaled);
    const IntegratorConfig cfg;
    const Trajectory nom = simulate_nominal(make_f1(), make_example_fields(5.0), d, x0, 0.1, cfg);
    const double e = palindrome_error(nom, cfg.steps_per_period);
    o.pass = o.pass && e <= 1e-7;
    o.detail += " " + to_string(kind) + "=" + fmt("%.1e", e);
  }
  o.detail += " (<=1e-7)";
  return o;
}

Outcome non_convex() {
  ExperimentConfig cfg;
  cfg.objective = "f2";
  cfg.fields = "example";
  cfg.fields_a = 20.0;
  cfg.x0 = {1.8};
  cfg.periods = {0.08, 1e-4};
  cfg.run_horizon = 2.0;
  cfg.landscape_x_min = -0.5;
  cfg.landscape_x_max = 2.0;
  cfg.landscape_points = 101;
  const double center = cfg.f2.center;

  const CommandResult cmp = cmd_compare(cfg);
  const CommandResult land = cmd_landscape(cfg);
  const auto& summary = cmp.extra("summary").rows;
  const auto& minima = land.extra("minima").rows;
  if (cmp.diverged || summary.size() != 2 || minima.size() != 2) {
    return {false, "run diverged or incomplete"};
  }
  // final_sim_norm and final_rec_norm are |x| in one dimension.
  const double sim_large = std::stod(summary[0][3]);
  const double rec_large = std::stod(summary[0][4]);
  const double sim_small = std::stod(summary[1][3]);
  const double rec_small = std::stod(summary[1][4]);
  const int minima_large = std::stoi(minima[0][1]);
  const int minima_small = std::stoi(minima[1][1]);
  const bool pass = sim_large < 0.2 && rec_large < 0.2 && std::abs(sim_small - center) < 0.2 &&
                    std::abs(rec_small - center) < 0.2 && minima_large == 1 && minima_small == 2;
  return {pass, "T=0.08: |x_sim|=" + fmt("%.3f", sim_large) + " |x_rec|=" + fmt("%.3f", rec_large) +
                    " minima=" + std::to_string(minima_large) + "; T=1e-4: x_sim=" +
                    fmt("%.3f", sim_small) + " x_rec=" + fmt("%.3f", rec_small) +
                    " minima=" + std::to_string(minima_small) + " (dent at " +
                    format_double(center) + ")"};
}

Outcome staircase() {
  const Objective obj = make_f3();
  const VectorFieldPair vf = make_example_fields(10.0);
  const LieBracketField g0 = make_lie_bracket(vf);
  const IntegratorConfig cfg;
  const double T = 0.01;
  const std::size_t blocks = 200;
  const SequentialDither sd = make_sequential(make_trig_dither(T), 2);
  const double x0[] = {1.8, 1.8};

  const LearningRun rec = run_recursion(obj, vf, g0, sd, x0, blocks, cfg);
  const LearningRun sim =
      extract_simulated_ld(simulate_es(obj, vf, sd, x0, static_cast<double>(blocks) * T, cfg), sd, true);
  if (rec.diverged || rec.size() != blocks + 1 || sim.size() != blocks + 1) {
    return {false, "run diverged or incomplete"};
  }
  bool rec_inactive_zero = true;
  double worst_sim_ratio = 0.0;
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t active = k % 2;
    rec_inactive_zero = rec_inactive_zero && rec.gradients[k].value[1 - active] == 0.0;
    const double moved = std::abs(sim.states[k + 1][active] - sim.states[k][active]);
    const double idle = std::abs(sim.states[k + 1][1 - active] - sim.states[k][1 - active]);
    worst_sim_ratio = std::max(worst_sim_ratio, idle / moved);
  }
  auto norm = [](const Vec& x) { return std::hypot(x[0], x[1]); };
  const double sim_final = norm(sim.states.back());
  const double rec_final = norm(rec.states.back());

  // Accumulation over the first ten sweeps (20 blocks).
  const Vec errors = compare_runs(sim, rec);
  bool growing = true;
  for (std::size_t k = 1; k <= 20; ++k) growing = growing && errors[k] > errors[k - 1];
  const double growth = errors[20] / errors[1];
  const double peak = *std::max_element(errors.begin(), errors.end());

  const bool pass = rec_inactive_zero && worst_sim_ratio <= 0.1 && sim_final < 0.3 &&
                    rec_final < 0.3 && growing && growth >= 5.0;
  return {pass, std::string("inactive rec step exactly 0: ") + (rec_inactive_zero ? "yes" : "no") +
                    "; sim idle/active " + fmt("%.1e", worst_sim_ratio) + " (<=0.1); |x| sim " +
                    fmt("%.4f", sim_final) + " rec " + fmt("%.4f", rec_final) +
                    " (<0.3); error increasing over blocks 0..20: " + (growing ? "yes" : "no") +
                    ", e20/e1=" + fmt("%.1f", growth) + " (>=5), peak " + fmt("%.4f", peak)};
}

Outcome trivial() {
  const Objective c = make_constant(1, 2.0);
  const VectorFieldPair vf = make_example_fields(5.0);
  const LieBracketField g0 = make_lie_bracket(vf);
  const IntegratorConfig cfg;
  const DitherPair d = make_trig_dither(0.1);
  const double x0[] = {0.7};
  const double end = simulate_es(c, vf, d, x0, 0.1, cfg).back()[0];
  const double step = recovered_gradient(c, vf, g0, d, 0.7, cfg).value[0];
  const StmTable stm = build_stm(c, vf, d, simulate_nominal(c, vf, d, x0, 0.1, cfg));
  double phi_dev = 0.0;
  for (std::size_t k = 0; k < stm.size(); k += 10) {
    for (std::size_t k0 = 0; k0 < stm.size(); k0 += 10) {
      phi_dev = std::max(phi_dev, std::abs(stm.phi(k, k0) - 1.0));
    }
  }
  const double drift = std::abs(end - 0.7);
  return {drift <= 1e-12 && step == 0.0 && phi_dev == 0.0,
          "|x(T)-x0|=" + fmt("%.1e", drift) + " (<=1e-12), step=" + fmt("%.1e", step) +
              ", max|Phi-1|=" + fmt("%.1e", phi_dev)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "error scaling between simulation and recursion", 60, error_scaling},
      {2, "one-period O(T^2) consistency", 60, one_period_consistency},
      {3, "finite-N needle sum converges to the limit", 60, riemann_convergence},
      {4, "needle first-order accuracy", 30, needle_order},
      {5, "STM semigroup and symmetry", 30, stm_identities},
      {6, "nominal palindrome", 30, palindrome},
      {7, "non-convex objective, large vs small period", 120, non_convex},
      {8, "two-dimensional staircase", 120, staircase},
      {9, "constant objective", 10, trivial},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s | %s | %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL",
                c.id, c.title, o.detail.c_str(), seconds, c.time_limit);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
