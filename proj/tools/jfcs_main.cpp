// Command-line driver: simulate | benchmark | sweep | verify.
// Exit codes: 0 success, 2 configuration error, 3 simulation runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jfcs/config.hpp"
#include "jfcs/sim.hpp"
#include "jfcs/trace_io.hpp"

namespace {

struct CliOptions {
  std::string config_file;
  std::string preset;
  std::vector<std::string> overrides;  // key=value pairs collected from flags
  std::string out_dir;
  std::string name;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_file, "flat key=value config file");
  cmd->add_option("--preset", opt.preset, "named preset: desk")
      ->check(CLI::IsMember({"desk"}));
  cmd->add_option("--out", opt.out_dir, "output directory for CSV traces");
  cmd->add_option("--name", opt.name, "base name for output files");

  const auto forward = [&opt](const std::string& key) {
    return [&opt, key](const std::string& v) {
      opt.overrides.push_back(key + "=" + v);
      return std::string{};
    };
  };
  for (const char* key :
       {"phi", "lambda", "seed", "frames", "slots_per_frame", "tau", "scheduler",
        "a_lo", "a_hi", "a_max", "dbar", "eps", "num_ues", "num_dus", "rus_per_du", "antennas",
        "radius", "bandwidth", "noise_figure", "p_max_dbm", "shadow_sigma", "beta_active",
        "path_set_size", "ue_redraw_period", "tail_fraction", "rate_unit", "eta_u", "eta_theta",
        "eta_beta"}) {
    cmd->add_option_function<std::string>("--" + std::string(key), forward(key));
  }
}

// precedence: flags > file > preset > defaults
jfcs::SimConfig build_config(const CliOptions& opt) {
  jfcs::SimConfig cfg;
  if (opt.preset == "desk") cfg = jfcs::SimConfig::desk_preset();
  if (!opt.config_file.empty()) cfg = jfcs::load_config_file(opt.config_file, cfg);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    jfcs::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (const char* env = std::getenv("JFCS_OUT_DIR"); env && *env) cfg.out_dir = env;
  if (!opt.name.empty()) cfg.run_name = opt.name;
  cfg.validate();
  return cfg;
}

void write_trace(const jfcs::RunTrace& trace) {
  std::filesystem::create_directories(trace.cfg.out_dir);
  const auto paths = jfcs::export_csv(trace, trace.cfg.out_dir, trace.cfg.run_name);
  std::cout << "wrote " << paths.slots << "\n";
  std::cout << "wrote " << paths.frames << "\n";
  std::cout << "wrote " << paths.summary << "\n";
  const auto& s = trace.summary;
  std::cout << "steady ||a||  = " << s.steady_a_norm * trace.cfg.rate_unit_bps << " bits/s\n"
            << "steady ||qhat||_1 = " << s.steady_qhat_l1 * trace.cfg.rate_unit_bps << " bits\n"
            << "worst-case delay  = " << s.worst_delay_s << " s\n"
            << "drift violations  = " << s.drift_violations << "\n";
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time simulator for joint flow-split, congestion control and "
               "scheduling across radio units"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string sweep_param = "phi";
  std::string values_csv;
  std::string bench_scheme;

  auto* sim_cmd = app.add_subcommand("simulate", "run one simulation and export CSV traces");
  add_common_flags(sim_cmd, opt);
  sim_cmd->add_option_function<std::string>(
      "--scheme", [&opt](const std::string& v) { opt.overrides.push_back("scheme=" + v); },
      "jfcs | num-fra | num-efsd | num-nru");

  auto* bench_cmd = app.add_subcommand("benchmark", "run a benchmark scheme");
  add_common_flags(bench_cmd, opt);
  bench_cmd->add_option("--scheme", bench_scheme, "num-fra | num-efsd | num-nru")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "run one simulation per parameter value");
  add_common_flags(sweep_cmd, opt);
  sweep_cmd->add_option("--param", sweep_param, "phi | M | lambda")
      ->check(CLI::IsMember({"phi", "M", "lambda"}));
  sweep_cmd->add_option("--values", values_csv, "comma-separated parameter values");

  auto* verify_cmd = app.add_subcommand("verify", "phi sweep plus scaling-law verification report");
  add_common_flags(verify_cmd, opt);
  verify_cmd->add_option("--values", values_csv, "comma-separated phi values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    jfcs::SimConfig cfg = build_config(opt);

    if (sim_cmd->parsed()) {
      write_trace(jfcs::run_simulation(cfg));
      return 0;
    }
    if (bench_cmd->parsed()) {
      const auto scheme = jfcs::scheme_from_string(bench_scheme);
      if (scheme == jfcs::Scheme::jfcs) throw jfcs::ConfigError("benchmark scheme must not be jfcs");
      auto trace = jfcs::run_benchmark(scheme, cfg);
      trace.cfg.run_name += "_" + bench_scheme;
      write_trace(trace);
      return 0;
    }

    std::vector<double> values = parse_values(values_csv);
    if (verify_cmd->parsed() && values.empty()) values = {5.0, 15.0, 25.0, 35.0};
    const std::string param = verify_cmd->parsed() ? "phi" : sweep_param;
    const auto result = jfcs::sweep(cfg, param, values);
    if (result.values.empty()) {
      std::cout << "empty sweep, nothing to do\n";
      return 0;
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::string report_csv = cfg.out_dir + "/" + cfg.run_name + "_" + param + "_sweep.csv";
    {
      std::ofstream out(report_csv, std::ios::binary);
      out << "value,steady_a_norm_bps,steady_qhat_l1_bits,worst_delay_s,slots_to_steady,"
             "queue_growth_bound_bits,queue_bound_holds\n";
      for (std::size_t i = 0; i < result.values.size(); ++i) {
        const auto& s = result.summaries[i];
        out << jfcs::format_double(result.values[i]) << ','
            << jfcs::format_double(s.steady_a_norm * cfg.rate_unit_bps) << ','
            << jfcs::format_double(s.steady_qhat_l1 * cfg.rate_unit_bps) << ','
            << jfcs::format_double(s.worst_delay_s) << ',' << s.slots_to_steady << ','
            << jfcs::format_double(s.queue_growth_bound * cfg.rate_unit_bps) << ','
            << (s.queue_bound_holds ? 1 : 0) << '\n';
      }
    }
    std::cout << "wrote " << report_csv << "\n";
    for (std::size_t i = 0; i < result.values.size(); ++i) {
      std::cout << param << "=" << result.values[i]
                << "  steady ||a|| = " << result.summaries[i].steady_a_norm * cfg.rate_unit_bps
                << " bits/s,  steady ||qhat||_1 = "
                << result.summaries[i].steady_qhat_l1 * cfg.rate_unit_bps << " bits\n";
    }
    if (result.scaling_ran) std::cout << result.scaling.text;
    return 0;
  } catch (const jfcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return 3;
  }
}
