#include "raid/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "raid/scenario.hpp"

namespace raid::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool log_enabled() {
  const char* v = std::getenv("RAID_LOG");
  return v != nullptr && *v != '\0';
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[raid] " << msg << "\n";
}

json fit_to_json(const RateFit& fit, double predicted_exponent) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"window", {fit.t_min, fit.t_max}},
              {"predicted_exponent", predicted_exponent}};
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 int jobs) {
  Scenario scen;
  try {
    scen = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    scen.mc.jobs = jobs;
    log_line("simulate: " + std::to_string(scen.mc.seeds.size()) + " seeds, T=" +
             std::to_string(scen.mc.horizon));
    const AggregateSeries agg = run_monte_carlo(scen.mc);

    const double gamma = scen.mc.schedule.gamma;
    json rates;
    for (std::size_t i = 0; i < scen.mc.agents.size(); ++i) {
      const RateFit fit = fit_rate(agg.t_grid, agg.mean_theta_err[i],
                                   scen.rate_window.first, scen.rate_window.second);
      rates["metrics"]["theta_err_agent_" + std::to_string(i)] =
          fit_to_json(fit, -gamma / 2.0);
    }
    const RateFit reg_fit = fit_rate(agg.t_grid, agg.mean_avg_regret,
                                     scen.rate_window.first, scen.rate_window.second);
    rates["metrics"]["avg_regret"] = fit_to_json(reg_fit, gamma - 1.0);

    fs::create_directories(out_dir);

    std::string csv = "t,agent,mean_theta_err,std_theta_err,mean_avg_regret,std_avg_regret\n";
    for (std::size_t k = 0; k < agg.t_grid.size(); ++k) {
      for (std::size_t i = 0; i < scen.mc.agents.size(); ++i) {
        csv += std::to_string(agg.t_grid[k]);
        csv += ',';
        csv += std::to_string(i);
        csv += ',';
        csv += format_double(agg.mean_theta_err[i][k]);
        csv += ',';
        csv += format_double(agg.std_theta_err[i][k]);
        csv += ',';
        csv += format_double(agg.mean_avg_regret[k]);
        csv += ',';
        csv += format_double(agg.std_avg_regret[k]);
        csv += '\n';
      }
    }
    write_text(fs::path(out_dir) / "aggregate.csv", csv);
    write_text(fs::path(out_dir) / "rates.json", rates.dump(2) + "\n");

    json manifest{{"scenario", scen.echo},
                  {"version", "0.1.0"},
                  {"seeds", scen.mc.seeds}};
    write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    log_line("simulate: wrote " + out_dir);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& scenario_path, const std::string& check) {
  Scenario scen;
  try {
    scen = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const bool all = check == "all";
  bool ok = true;
  const std::uint64_t seed = scen.mc.seeds.front();

  auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  " << detail << "\n";
    ok = ok && pass;
  };

  try {
    if (all || check == "oracle") {
      const OracleCheck oc = verify_estimator_oracle(50, seed);
      report("estimator-oracle-equivalence", oc.pass,
             "max theta rel err " + format_double(oc.max_theta_rel_err) +
                 ", max rank-one rel err " + format_double(oc.max_rank_one_rel_err));
    }
    if (all || check == "excitation") {
      for (std::size_t i = 0; i < scen.mc.agents.size(); ++i) {
        const ExcitationCheck ec = check_excitation(
            scen.mc.agents[i], scen.mc.schedule.sigma2, 1000000, seed + i);
        report("excitation-agent-" + std::to_string(i), ec.pass,
               "lambda_min " + format_double(ec.lambda_min) + " +- " +
                   format_double(ec.std_err));
      }
    }
    if (all || check == "growth") {
      const long T = std::max<long>(100, scen.mc.horizon);
      for (std::size_t i = 0; i < scen.mc.agents.size(); ++i) {
        const auto series = verify_theorem2_growth(
            scen.mc.agents[i], scen.mc.schedule.sigma2, T, seed + i, scen.mc.init);
        // tail stability: ratio at T within +-20% of the ratio at ~T/10
        const double tail = series.back().second;
        double mid = tail;
        for (const auto& [t, v] : series) {
          if (t >= T / 10) {
            mid = v;
            break;
          }
        }
        const bool pass = mid > 0.0 && std::abs(tail - mid) <= 0.2 * mid;
        report("growth-agent-" + std::to_string(i), pass,
               "ratio(T)=" + format_double(tail) + " vs ratio(T/10)=" +
                   format_double(mid));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return ok ? 0 : 1;
}

int cmd_trace(const std::string& scenario_path, std::uint64_t seed,
              const std::string& out_path) {
  Scenario scen;
  try {
    scen = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const int d = scen.mc.agents.front().dim();
    std::string csv =
        "t,agent,phase,p,p_hat,x,interior,tr_sigma,lambda_min_info,sq_track_err";
    for (int k = 0; k < d; ++k) csv += ",theta_hat_" + std::to_string(k);
    csv += '\n';

    run_horizon(scen.mc.agents, scen.mc.x_des, scen.mc.schedule, scen.mc.horizon,
                seed, scen.mc.init, [&](const StepRecord& rec) {
                  csv += std::to_string(rec.t);
                  csv += ',';
                  csv += std::to_string(rec.agent);
                  csv += ',';
                  csv += phase_name(rec.phase);
                  csv += ',';
                  csv += format_double(rec.p);
                  csv += ',';
                  csv += format_double(rec.p_hat);
                  csv += ',';
                  csv += format_double(rec.x);
                  csv += ',';
                  csv += rec.interior ? '1' : '0';
                  csv += ',';
                  csv += format_double(rec.tr_sigma);
                  csv += ',';
                  csv += format_double(rec.lambda_min_info);
                  csv += ',';
                  csv += format_double(rec.sq_track_err);
                  for (int k = 0; k < d; ++k) {
                    csv += ',';
                    csv += format_double(rec.theta_hat[k]);
                  }
                  csv += '\n';
                });

    write_text(out_path, csv);
    log_line("trace: wrote " + out_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"RAID: adaptive incentive design simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  std::string out_file;
  std::string check = "all";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo run with aggregate outputs");
  sim->add_option("scenario", scenario, "scenario file")->required();
  sim->add_option("-o,--output", out_dir, "output directory")->required();
  sim->add_option("--jobs", jobs, "parallel seed workers");

  auto* ver = app.add_subcommand("verify", "run consistency/excitation property checks");
  ver->add_option("scenario", scenario, "scenario file")->required();
  ver->add_option("--check", check, "which checks to run")
      ->check(CLI::IsMember({"all", "oracle", "excitation", "growth"}));

  auto* tr = app.add_subcommand("trace", "single-seed per-step trajectory dump");
  tr->add_option("scenario", scenario, "scenario file")->required();
  tr->add_option("--seed", seed, "run seed")->required();
  tr->add_option("-o,--output", out_file, "output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed()) return cmd_simulate(scenario, out_dir, jobs);
  if (ver->parsed()) return cmd_verify(scenario, check);
  return cmd_trace(scenario, seed, out_file);
}

}  // namespace raid::cli
