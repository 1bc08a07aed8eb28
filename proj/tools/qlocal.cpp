#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qlocal/cli/experiments.hpp"

namespace {

using qlocal::cli::Format;

const std::map<std::string, Format> kFormats{{"table", Format::table}, {"jsonl", Format::jsonl}};

int emit(const qlocal::cli::Report& report, const std::string& name, const std::string& out, Format format) {
  if (out.empty())
    qlocal::cli::write_summary(std::cout, report, format);
  else
    qlocal::cli::write_report_files(out, name, report, format);
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-synchronous simulator for classical and quantum LOCAL protocols"};
  app.require_subcommand(1);

  qlocal::cli::ExperimentConfig config;
  std::vector<std::string> names;
  for (const auto& [name, fn] : qlocal::cli::experiments()) names.push_back(name);

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--experiment", config.experiment, "Experiment name")->required()->check(CLI::IsMember(names));
  run->add_option("--d", config.d, "Triangle side length (even)");
  run->add_option("--k", config.k, "Number of disjoint copies");
  run->add_option("--T", config.T, "Round budget of classical strategies");
  run->add_option("--shots", config.shots, "Shots per input");
  run->add_option("--seed", config.seed, "Seed");
  run->add_option("--out", config.out, "Directory for summary and record files (default: summary to stdout)");
  run->add_option("--format", config.format, "table or jsonl")->transform(CLI::CheckedTransformer(kFormats));

  qlocal::cli::SweepConfig sweep_config;
  std::string d_list = "2", k_list = "1", t_list = "2", shots_list = "100";
  auto* sweep = app.add_subcommand("sweep", "Run one experiment over parameter lists");
  sweep->add_option("--experiment", sweep_config.base.experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(names));
  sweep->add_option("--d", d_list, "List such as 2,4,6");
  sweep->add_option("--k", k_list, "List such as 1..3");
  sweep->add_option("--T", t_list, "List of round budgets");
  sweep->add_option("--shots", shots_list, "List of shot counts");
  sweep->add_option("--seed", sweep_config.base.seed, "Seed");
  sweep->add_option("--out", sweep_config.base.out, "Directory for summary and record files");
  sweep->add_option("--format", sweep_config.base.format, "table or jsonl")
      ->transform(CLI::CheckedTransformer(kFormats));

  auto* topo = app.add_subcommand("topology", "Export or validate topology files");
  topo->require_subcommand(1);
  std::size_t topo_d = 2;
  bool with_inputs = false;
  std::string topo_out;
  auto* exp = topo->add_subcommand("export", "Write a triangle network");
  exp->add_option("--d", topo_d, "Triangle side length (even)");
  exp->add_flag("--inputs", with_inputs, "Attach the three degree-1 input nodes");
  exp->add_option("--out", topo_out, "Output file (default: stdout)");
  std::string topo_in;
  bool allow_disconnected = false;
  auto* imp = topo->add_subcommand("import", "Validate a topology file and print a summary");
  imp->add_option("file", topo_in, "Topology file")->required()->check(CLI::ExistingFile);
  imp->add_flag("--allow-disconnected", allow_disconnected, "Accept disconnected graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return emit(qlocal::cli::run_experiment(config), config.experiment, config.out, config.format);
    if (*sweep) {
      sweep_config.d = qlocal::cli::parse_list(d_list);
      sweep_config.k = qlocal::cli::parse_list(k_list);
      sweep_config.T = qlocal::cli::parse_list(t_list);
      sweep_config.shots = qlocal::cli::parse_list(shots_list);
      const auto& b = sweep_config.base;
      return emit(qlocal::cli::sweep(sweep_config), b.experiment + ".sweep", b.out, b.format);
    }
    if (*exp) {
      const auto net = with_inputs ? qlocal::net::build_script_gd(topo_d) : qlocal::net::build_gd(topo_d);
      if (topo_out.empty()) {
        qlocal::net::write_topology(std::cout, net.topology);
      } else {
        std::ofstream os(topo_out);
        qlocal::net::write_topology(os, net.topology);
      }
      return 0;
    }
    if (*imp) {
      std::ifstream is(topo_in);
      const auto g = qlocal::net::read_topology(is, {.allow_disconnected = allow_disconnected});
      std::cout << "nodes " << g.size() << "\nedges " << g.edges().size() << "\nconnected "
                << (g.connected() ? "yes" : "no") << '\n';
      return 0;
    }
  } catch (const qlocal::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const qlocal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
