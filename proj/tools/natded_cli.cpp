// Command-line front end: serve, check, export-isar, prove, countermodel,
// prune. Exit status 0 ok, 1 rejected, 2 usage.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "natded/export.hpp"
#include "natded/prover.hpp"
#include "natded/service.hpp"
#include "natded/wire.hpp"

using namespace natded;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("WriteFailed", "cannot write " + path);
}

std::string path_text(const std::vector<std::size_t>& path) {
  std::string out = "root";
  for (auto i : path) out += "." + std::to_string(i);
  return out;
}

// Parses and checks a proof file. Prints the diagnosis to stderr on
// failure.
std::optional<Derivation> load_checked(const std::string& file) {
  Derivation d;
  try {
    d = parse_proof(read_file(file));
  } catch (const Error& e) {
    std::cerr << file << ": " << e.code() << ": " << e.what() << '\n';
    return std::nullopt;
  }
  CheckReport report = check(d);
  if (!report.ok) {
    std::cerr << file << ": rejected at " << path_text(report.failure->path) << ": " << report.failure->reason << '\n';
    return std::nullopt;
  }
  return d;
}

std::size_t count_nodes(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += count_nodes(p);
  return n;
}

Formula formula_arg(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw CLI::ValidationError(std::string("formula: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural deduction for first-order logic: proof checking, export and proof service"};
  app.require_subcommand(1);

  std::string config_path;
  int port_override = -1;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  serve->add_option("--port", port_override, "Override the configured port");

  std::string proof_file, export_proof_path, export_isar_path, export_scratch_path;
  auto* check_cmd = app.add_subcommand("check", "Check a proof file with the kernel");
  check_cmd->add_option("proof-file", proof_file)->required();
  check_cmd->add_option("--export-proof", export_proof_path, "Write the normalized proof text");
  check_cmd->add_option("--export-isar", export_isar_path, "Write the closed Isar theorem");
  check_cmd->add_option("--export-scratch", export_scratch_path, "Write the Scratch theory for the open formula");

  bool scratch = false;
  std::string isar_out;
  auto* isar_cmd = app.add_subcommand("export-isar", "Generate Isar text for a checked proof file");
  isar_cmd->add_option("proof-file", proof_file)->required();
  isar_cmd->add_flag("--scratch", scratch, "Emit the Scratch theory for the open formula");
  isar_cmd->add_option("-o,--output", isar_out, "Output file (default stdout)");

  std::string formula_text;
  std::vector<std::string> assumption_texts;
  Budget budget;
  long wall_ms = budget.wall_time.count();
  auto* prove_cmd = app.add_subcommand("prove", "Run the tableau prover on a formula");
  prove_cmd->add_option("formula", formula_text)->required();
  prove_cmd->add_option("-a,--assume", assumption_texts, "Assumption (repeatable)");
  prove_cmd->add_option("--max-bound", budget.max_bound, "Iterative deepening limit");
  prove_cmd->add_option("--timeout-ms", wall_ms, "Wall-clock budget");

  CountermodelOptions cm_options;
  bool cm_json = false;
  auto* cm_cmd = app.add_subcommand("countermodel", "Search finite models for a countermodel");
  cm_cmd->add_option("formula", formula_text)->required();
  cm_cmd->add_option("--max-size", cm_options.max_size, "Largest universe")->check(CLI::PositiveNumber);
  cm_cmd->add_option("--budget", cm_options.budget, "Interpretations per size before sampling");
  cm_cmd->add_option("--seed", cm_options.seed, "Sampling seed");
  cm_cmd->add_flag("--json", cm_json, "Print the JSON report");

  std::string data_dir;
  long days = 0;
  auto* prune_cmd = app.add_subcommand("prune", "Delete stored sessions older than a number of days");
  prune_cmd->add_option("--data-dir", data_dir)->required();
  prune_cmd->add_option("--days", days)->required()->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) {
      ServiceConfig config = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
      config.apply_environment();
      if (port_override >= 0) config.port = port_override;
      Service service(config);
      std::cerr << "natded: " << service.session_count() << " sessions loaded\n";
      std::cerr << "natded: listening on " << config.bind << ":" << config.port << '\n';
      const bool ok = service.listen();
      if (!ok) {
        std::cerr << "natded: cannot bind " << config.bind << ":" << config.port << '\n';
        return kUsage;
      }
      return kOk;
    }

    if (*check_cmd) {
      auto d = load_checked(proof_file);
      if (!d) return kRejected;
      std::cout << "ok: " << count_nodes(*d) << " nodes, goal " << render_formula(d->goal, PrintStyle::Named) << '\n';
      if (!export_proof_path.empty()) write_output(export_proof_path, serialize_proof(*d));
      try {
        if (!export_isar_path.empty()) write_output(export_isar_path, to_isar_closed(*d));
        if (!export_scratch_path.empty()) write_output(export_scratch_path, to_isar_open(*d));
      } catch (const ExportError& e) {
        std::cerr << "export: " << e.code() << ": " << e.what() << '\n';
        return kRejected;
      }
      return kOk;
    }

    if (*isar_cmd) {
      auto d = load_checked(proof_file);
      if (!d) return kRejected;
      try {
        write_output(isar_out, scratch ? to_isar_open(*d) : to_isar_closed(*d));
      } catch (const ExportError& e) {
        std::cerr << "export: " << e.code() << ": " << e.what() << '\n';
        return kRejected;
      }
      return kOk;
    }

    if (*prove_cmd) {
      Sequent s;
      s.goal = formula_arg(formula_text);
      for (const auto& a : assumption_texts) s.assumptions.push_back(formula_arg(a));
      budget.wall_time = std::chrono::milliseconds(wall_ms);
      FeasibilityVerdict v = prove(s, budget);
      std::cout << verdict_name(v.verdict);
      if (v.proved()) std::cout << " (bound " << v.bound << ")";
      std::cout << '\n';
      return v.proved() ? kOk : kRejected;
    }

    if (*cm_cmd) {
      Formula f = formula_arg(formula_text);
      CountermodelResult r = find_countermodel(f, cm_options);
      if (cm_json) {
        std::cout << wire_countermodel(r).dump(2) << '\n';
      } else if (r.countermodel) {
        const Model& m = r.countermodel->model;
        std::cout << "countermodel of size " << m.size() << (r.countermodel->sampled ? " (sampled)" : "") << '\n';
        for (const auto& [k, table] : m.functions()) {
          std::cout << "  " << k.name << "/" << k.arity << ":";
          for (auto e : table) std::cout << ' ' << e;
          std::cout << '\n';
        }
        for (const auto& [k, table] : m.predicates()) {
          std::cout << "  " << k.name << "/" << k.arity << ":";
          for (bool b : table) std::cout << ' ' << (b ? 1 : 0);
          std::cout << '\n';
        }
        if (!r.countermodel->env.prefix().empty()) {
          std::cout << "  env:";
          for (auto e : r.countermodel->env.prefix()) std::cout << ' ' << e;
          std::cout << '\n';
        }
      } else {
        std::cout << (r.status == SearchStatus::BudgetExhausted ? "none found (sampled)" : "none up to size ")
                  << (r.status == SearchStatus::BudgetExhausted ? "" : std::to_string(cm_options.max_size)) << '\n';
      }
      return r.countermodel ? kRejected : kOk;
    }

    if (*prune_cmd) {
      std::size_t n = prune_sessions(data_dir, std::chrono::hours(24 * days));
      std::cout << "removed " << n << " sessions\n";
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
