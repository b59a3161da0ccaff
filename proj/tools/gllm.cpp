// Command-line front end: fit a model, run one MCI test, or run the full
// forward selection on a counts CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gllm/loglinear.hpp"
#include "gllm/mci.hpp"
#include "gllm/report.hpp"
#include "gllm/selection.hpp"
#include "gllm/tabular.hpp"

namespace {

enum class OutputFormat { kText, kJson };

struct RunConfig {
  std::string input_path;
  double alpha = gllm::kDefaultAlpha;
  double ipf_tol = 1e-10;
  int ipf_max_iter = 1000;
  OutputFormat output_format = OutputFormat::kText;
  std::optional<std::string> dot_path;
  bool trace = false;

  gllm::IpfSettings ipf() const { return {ipf_tol, ipf_max_iter}; }
};

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarning = 2;

void add_common_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("input", cfg.input_path, "Counts CSV (factor columns, then 'count')")->required();
  cmd.add_option("--alpha", cfg.alpha, "Significance cutoff")->capture_default_str();
  cmd.add_option("--ipf-tol", cfg.ipf_tol, "IPF tolerance on the largest margin discrepancy")->capture_default_str();
  cmd.add_option("--ipf-max-iter", cfg.ipf_max_iter, "IPF sweep limit")->capture_default_str();
  cmd.add_option("--format", cfg.output_format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"text", OutputFormat::kText},
                                                                             {"json", OutputFormat::kJson}}));
  cmd.add_option("--dot", cfg.dot_path, "Write the selected graph as DOT");
  cmd.add_flag("--trace", cfg.trace, "Show the work list and accepted sets after every step");
}

void validate(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("--alpha must lie in (0, 1)");
  if (!(cfg.ipf_tol > 0.0)) throw std::invalid_argument("--ipf-tol must be positive");
  if (cfg.ipf_max_iter < 1) throw std::invalid_argument("--ipf-max-iter must be positive");
}

int cmd_fit(const RunConfig& cfg, const std::string& model_text) {
  const auto table = gllm::read_counts_csv(cfg.input_path);
  const auto labels = gllm::factor_abbreviations(table.factors());
  const auto gc = gllm::parse_model(model_text, table.factors());
  const auto fit = gllm::ipf_fit(table, gc, cfg.ipf());
  if (cfg.output_format == OutputFormat::kJson)
    std::cout << gllm::fit_to_json(fit, labels).dump(2) << '\n';
  else
    std::cout << gllm::render_fit_text(fit, labels);
  if (!fit.converged) {
    std::cerr << "error: IPF did not converge within " << cfg.ipf_max_iter << " sweeps\n";
    return kExitWarning;
  }
  return kExitOk;
}

int cmd_mci(const RunConfig& cfg, const std::string& set_spec) {
  const auto table = gllm::read_counts_csv(cfg.input_path);
  const auto labels = gllm::factor_abbreviations(table.factors());
  const auto s = gllm::parse_factor_set(set_spec, table.factors());
  const auto rec = gllm::mci_test(table, s, cfg.alpha, cfg.ipf());
  if (cfg.output_format == OutputFormat::kJson)
    std::cout << gllm::mci_to_json(rec, labels).dump(2) << '\n';
  else
    std::cout << gllm::render_mci_text(rec, labels);
  return kExitOk;
}

int cmd_select(const RunConfig& cfg) {
  const auto table = gllm::read_counts_csv(cfg.input_path);
  const auto trace = gllm::forward_select(table, cfg.alpha, cfg.ipf());
  if (cfg.output_format == OutputFormat::kJson)
    std::cout << gllm::trace_to_json(trace).dump(2) << '\n';
  else
    std::cout << gllm::render_trace_text(trace, cfg.trace);

  if (cfg.dot_path) {
    const auto edges = trace.final_state.graph.edges();
    const gllm::UndirectedGraph shown(trace.labels, edges);
    std::ofstream out(*cfg.dot_path);
    if (!out) throw std::runtime_error("cannot write '" + *cfg.dot_path + "'");
    out << gllm::to_dot(shown);
  }
  return trace.warnings.empty() ? kExitOk : kExitWarning;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning for graphical log-linear models"};
  app.require_subcommand(1);

  RunConfig fit_cfg, mci_cfg, select_cfg;
  std::string model_text, set_spec;

  auto* fit = app.add_subcommand("fit", "Fit one hierarchical model by IPF");
  add_common_options(*fit, fit_cfg);
  fit->add_option("model", model_text, "Generating class, e.g. \"[AC][ADE][BC][BE][F]\"")->required();

  auto* mci = app.add_subcommand("mci", "Test mutual conditional independence of a factor set");
  add_common_options(*mci, mci_cfg);
  mci->add_option("set", set_spec, "Comma-separated factors, e.g. E,F")->required();

  auto* select = app.add_subcommand("select", "Run forward model selection");
  add_common_options(*select, select_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (fit->parsed()) {
      validate(fit_cfg);
      return cmd_fit(fit_cfg, model_text);
    }
    if (mci->parsed()) {
      validate(mci_cfg);
      return cmd_mci(mci_cfg, set_spec);
    }
    validate(select_cfg);
    return cmd_select(select_cfg);
  } catch (const gllm::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return select->parsed() ? kExitError : kExitWarning;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
