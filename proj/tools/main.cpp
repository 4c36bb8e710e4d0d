// Command-line front end: run scenarios, plot emitted logs, and run the
// verification suites.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flocksim/csv.hpp"
#include "flocksim/engine.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/scenario_io.hpp"
#include "flocksim/svg_plot.hpp"
#include "flocksim/verify.hpp"

namespace fs = std::filesystem;
using namespace flocksim;

namespace {

void print_run_summary(const SimLog& log, const Scenario& sc) {
  const Diagnostics& d = log.diag;
  for (const auto& w : log.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "scenario " << sc.name << ": " << log.n << " followers, t_end "
            << sc.t_end << " s, dt " << sc.dt << " s\n";
  std::cout << "  sigma_l = " << d.sigma_l
            << ", lambda_min(H(0)) = " << d.lambda_min_h0 << "\n";
  if (d.gain_condition_applicable) {
    std::cout << "  gain condition alpha > max(sigma_l, sigma_l/sqrt(lambda))"
              << ": alpha = " << sc.controller.alpha << ", threshold = "
              << d.gain_threshold << " -> "
              << (d.gain_condition_holds ? "satisfied" : "NOT satisfied")
              << "\n";
  }
  double final_err = 0.0;
  for (double e : d.vel_err.back()) final_err = std::max(final_err, e);
  std::cout << "  final max velocity error = " << final_err << " m/s\n";
  std::cout << "  edges added " << d.edges_added << ", edges lost "
            << d.edges_lost << " (events: +" << d.add_events << " / -"
            << d.remove_events << ")\n";
  std::cout << "  min pairwise distance " << d.min_distance_floor
            << " m; connected-pair separation range [" << d.connected_min
            << ", " << d.connected_max << "] m\n";
  std::cout << "  gradient cap engagements: " << d.cap_engagements << "\n";
}

int map_exception() {
  try {
    throw;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return exit_code::validation_error;
  } catch (const BarrierViolation& e) {
    std::cerr << "barrier violation: " << e.what() << "\n";
    return exit_code::barrier_violation;
  } catch (const NumericalDivergence& e) {
    std::cerr << "numerical divergence: " << e.what() << "\n";
    return exit_code::numerical_divergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leader-follower flocking simulator for Lagrange networks"};
  app.require_subcommand(1);

  // run
  auto* cmd_run = app.add_subcommand("run", "simulate a scenario file");
  std::string scenario_path;
  std::string out_dir = ".";
  bool with_plots = false;
  cmd_run->add_option("scenario", scenario_path, "scenario file")->required();
  cmd_run->add_option("--out", out_dir, "output directory");
  cmd_run->add_flag("--plots", with_plots, "also emit trajectory and "
                    "velocity-error SVG plots");

  // plot
  auto* cmd_plot = app.add_subcommand("plot", "plot an emitted CSV log");
  std::string log_path, plot_out, kind_str = "velocity_error";
  double overlay_radius = 200.0;
  cmd_plot->add_option("log", log_path, "CSV log file")->required();
  cmd_plot->add_option("--kind", kind_str, "trajectory_xy | velocity_error")
      ->check(CLI::IsMember({"trajectory_xy", "velocity_error"}));
  cmd_plot->add_option("--out", plot_out, "output SVG path");
  cmd_plot->add_option("--radius", overlay_radius,
                       "sensing radius for the initial-edge overlay [m]");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  std::uint64_t seed = 42;
  cmd_verify->add_option("suite", suite, "matrices | plant | potential | "
                         "lyapunov | all")
      ->check(CLI::IsMember({"matrices", "plant", "potential", "lyapunov",
                             "all"}));
  cmd_verify->add_option("--seed", seed, "RNG seed for the property checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_run) {
      const Scenario sc = parse_scenario(scenario_path);
      const SimLog log = run(sc);
      fs::create_directories(out_dir);
      const fs::path csv_path = fs::path(out_dir) / (sc.name + ".csv");
      emit_csv(log, csv_path);
      print_run_summary(log, sc);
      std::cout << "  log written to " << csv_path.string() << "\n";
      if (with_plots) {
        const CsvTable table = read_csv(csv_path);
        const fs::path traj = fs::path(out_dir) / (sc.name + "_trajectory.svg");
        const fs::path verr = fs::path(out_dir) / (sc.name + "_velocity_error.svg");
        emit_plot(table, traj, PlotKind::TrajectoryXY, sc.potential.R);
        emit_plot(table, verr, PlotKind::VelocityError);
        std::cout << "  plots written to " << traj.string() << ", "
                  << verr.string() << "\n";
      }
      return exit_code::ok;
    }

    if (*cmd_plot) {
      const CsvTable table = read_csv(log_path);
      const PlotKind kind = kind_str == "trajectory_xy"
                                ? PlotKind::TrajectoryXY
                                : PlotKind::VelocityError;
      fs::path out = plot_out.empty()
                         ? fs::path(log_path).replace_extension(
                               kind_str == "trajectory_xy"
                                   ? ".trajectory.svg"
                                   : ".velocity_error.svg")
                         : fs::path(plot_out);
      emit_plot(table, out, kind, overlay_radius);
      std::cout << "plot written to " << out.string() << "\n";
      return exit_code::ok;
    }

    if (*cmd_verify) {
      std::vector<VerifyReport> reports;
      if (suite == "matrices") reports.push_back(verify_matrices(seed));
      else if (suite == "plant") reports.push_back(verify_plant(seed));
      else if (suite == "potential") reports.push_back(verify_potential(seed));
      else if (suite == "lyapunov") reports.push_back(verify_lyapunov());
      else reports = verify_all(seed);
      bool ok = true;
      for (const auto& rep : reports) {
        std::cout << format_report(rep);
        ok = ok && rep.all_passed();
      }
      return ok ? exit_code::ok : exit_code::verification_failure;
    }
  } catch (...) {
    return map_exception();
  }
  return 1;
}
