// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gllm/chisq.hpp"
#include "gllm/loglinear.hpp"
#include "gllm/mci.hpp"
#include "gllm/selection.hpp"
#include "golden.hpp"
#include "support.hpp"

namespace {

constexpr double kG2Tol = 0.01;
constexpr double kPTol = 0.001;
constexpr double kCdfTol = 1e-6;
constexpr double kMarginTol = 1e-10;
constexpr double kMaxSelectSeconds = 1.0;

static_assert(kG2Tol == golden::kG2Tol && kPTol == golden::kPTol);

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream msg;
    msg << what << ": got " << got << ", want " << want << " ± " << tol;
    expect(std::isfinite(got) && std::fabs(got - want) <= tol, msg.str());
  }

  void equal(std::size_t got, std::size_t want, const std::string& what) {
    expect(got == want, what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
  }

  bool report(int number) const {
    const bool ok = failures_.empty() && checks_ > 0;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << number << ": " << name_ << " (" << checks_ - failures_.size()
              << "/" << checks_ << " checks)\n";
    for (const auto& f : failures_) std::cout << "        " << f << '\n';
    return ok;
  }

 private:
  std::string name_;
  int checks_ = 0;
  std::vector<std::string> failures_;
};

gllm::FitResult fit(std::string_view text) {
  const auto& t = support::reinis();
  return gllm::ipf_fit(t, gllm::parse_model(text, t.factors()));
}

bool criterion1() {
  Criterion c("null model on Reinis");
  const auto null = fit("[A][B][C][D][E][F]");
  c.expect(null.converged, "null model converged");
  c.near(null.g2, golden::kNullG2, kG2Tol, "G2");
  c.equal(null.df, golden::kNullDf, "df");
  return c.report(1);
}

void check_table(Criterion& c, const golden::CandidateTable& table, bool oracle_rows) {
  const auto& t = support::reinis();
  const auto base = fit(table.base_model);
  c.near(base.g2, table.base_g2, kG2Tol, std::string(table.name) + " base G2");
  c.equal(base.df, table.base_df, std::string(table.name) + " base df");
  for (const auto& row : table.rows) {
    if ((row.source == golden::Source::kOracle) != oracle_rows) continue;
    const auto tag = std::string(table.name) + " " + std::string(row.edge);
    const auto pair = gllm::parse_factor_set(row.edge, t.factors());
    const auto cand = gllm::ipf_fit(t, base.model.with_term(pair));
    const auto test = gllm::deviance_difference(base, cand);
    c.equal(cand.df, row.df, tag + " df");
    c.near(cand.g2, row.g2, kG2Tol, tag + " G2");
    c.near(test.statistic, row.delta_g2, kG2Tol, tag + " dG2");
    c.equal(test.df, 1, tag + " ddf");
    c.near(test.p_value, row.p_value, kPTol, tag + " p");
  }
}

bool criterion2() {
  Criterion c("single-edge rows against the null model");
  const auto& first = golden::candidate_tables().front();
  c.equal(first.rows.size(), 15, "row count");
  check_table(c, first, false);
  return c.report(2);
}

bool criterion3() {
  Criterion c("MCI tests on Reinis");
  const auto& t = support::reinis();
  for (const auto& row : golden::mci_rows()) {
    const auto rec = gllm::mci_test(t, gllm::parse_factor_set(row.set, t.factors()));
    const auto tag = "{" + std::string(row.set) + "}";
    c.near(rec.outcome.statistic, row.g2, kG2Tol, tag + " G2");
    c.equal(rec.outcome.df, row.df, tag + " df");
    c.near(rec.outcome.p_value, row.p_value, kPTol, tag + " p");
  }
  return c.report(3);
}

bool criterion4() {
  Criterion c("candidate tables after each commit, with oracle rows for the known errata");
  const auto& tables = golden::candidate_tables();
  for (std::size_t i = 1; i < tables.size(); ++i) {
    check_table(c, tables[i], false);
    check_table(c, tables[i], true);
  }

  const auto& oracle = support::oracle();
  const auto& t = support::reinis();
  for (const auto& [text, row] : oracle["models"].items()) {
    const auto f = gllm::ipf_fit(t, gllm::parse_model(text, t.factors()), {1e-12, 5000});
    c.near(f.g2, row["g2"].get<double>(), 1e-4, "oracle " + text + " G2");
    c.equal(f.df, row["df"].get<std::size_t>(), "oracle " + text + " df");
  }

  const auto trace = gllm::forward_select(t, 0.05);
  std::size_t k = 0;
  for (const auto& step : trace.steps) {
    const auto* commit = std::get_if<gllm::CommitStep>(&step);
    if (!commit) continue;
    if (k >= golden::commit_rows().size()) {
      c.expect(false, "unexpected extra commit");
      break;
    }
    const auto& want = golden::commit_rows()[k++];
    const auto tag = "commit " + std::string(want.edge);
    c.near(commit->g2, want.g2, kG2Tol, tag + " G2");
    c.equal(commit->df, want.df, tag + " df");
    c.near(commit->delta_g2, want.delta_g2, kG2Tol, tag + " dG2");
  }
  c.equal(k, golden::commit_rows().size(), "commit count");
  return c.report(4);
}

bool criterion5() {
  Criterion c("end-to-end select on Reinis");
  const auto start = std::chrono::steady_clock::now();
  const auto r = support::run(support::cli("select \"" + support::data_path("reinis.csv") + "\" --alpha 0.05"));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  c.expect(r.output.find("\nmodel: " + std::string(golden::kFinalModel) + "\n") != std::string::npos, "final model line");
  c.expect(r.output.find("\namis: " + std::string(golden::kFinalAmis) + "\n") != std::string::npos, "final AMIS line");
  c.expect(seconds < kMaxSelectSeconds, "runtime " + std::to_string(seconds) + " s");
  return c.report(5);
}

bool criterion6() {
  Criterion c("property suites");

  bool bijection = true;
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * (n - 1) / 2)); ++code) {
      const auto g = support::graph_from_code(n, code);
      const auto mis = gllm::maximal_independent_sets(g);
      bijection = bijection && support::sorted_bits(mis) == support::brute_force_mis(g) &&
                  gllm::graph_from_amis(g.vertices(), mis) == g;
    }
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto g = support::random_graph(8, 0.5, rng);
    bijection = bijection && gllm::graph_from_amis(g.vertices(), gllm::maximal_independent_sets(g)) == g;
  }
  c.expect(bijection, "(a) AMIS/graph bijection");

  bool margins = true;
  double worst = 0.0;
  std::mt19937_64 rng2(1234);
  for (int i = 0; i < 200; ++i) {
    const std::size_t p = 3 + i % 3;
    std::vector<std::size_t> cards;
    for (std::size_t k = 0; k < p; ++k) cards.push_back(2 + (rng2() % 2));
    const auto t = support::random_table(cards, rng2);
    const auto f = gllm::ipf_fit(t, support::random_class(p, rng2));
    worst = std::max(worst, f.max_margin_error);
    margins = margins && f.converged && f.max_margin_error <= kMarginTol &&
              support::margin_discrepancy(t, f) <= 10 * kMarginTol;
  }
  c.expect(margins, "(b) IPF margins, worst " + std::to_string(worst));

  bool monotone = true;
  std::mt19937_64 rng3(99);
  for (int i = 0; i < 100; ++i) {
    const std::size_t p = 3 + i % 3;
    const auto t = support::random_table(std::vector<std::size_t>(p, 2 + i % 2), rng3);
    auto gc = support::random_class(p, rng3);
    double last = gllm::ipf_fit(t, gc).g2;
    for (int step = 0; step < 3; ++step) {
      gc = gc.with_term(support::random_class(p, rng3).terms().front() | gllm::VarSet::single(rng3() % p));
      const double g2 = gllm::ipf_fit(t, gc).g2;
      monotone = monotone && g2 <= last + 1e-8;
      last = g2;
    }
  }
  c.expect(monotone, "(c) deviance monotone under term addition");

  double cdf_err = 0.0;
  for (int df : {1, 2, 3, 5, 16, 32, 44, 52, 57})
    for (double frac : {0.05, 0.3, 0.8, 1.0, 1.4, 2.0, 3.5}) {
      const double x = frac * df + 0.05;
      cdf_err = std::max(cdf_err, std::fabs(gllm::chisq_sf(x, df) - support::integrated_sf(x, df)));
    }
  c.expect(cdf_err <= kCdfTol, "(d) chisq_sf vs integration, worst " + std::to_string(cdf_err));

  const auto& t = support::reinis();
  const auto a = gllm::forward_select(t, 0.05);
  const auto b = gllm::forward_select(t, 0.05);
  c.expect(a == b, "(e) determinism");
  c.expect(gllm::replay(a) == a.final_state, "(e) replay");
  return c.report(6);
}

bool criterion7() {
  Criterion c("degenerate inputs");
  const auto& t = support::reinis();
  for (std::size_t i = 0; i < t.num_factors(); ++i) {
    const auto rec = gllm::mci_test(t, gllm::VarSet::single(i));
    c.expect(rec.model == gllm::GeneratingClass::saturated(t.num_factors()) && rec.outcome.supported &&
                 rec.outcome.df == 0,
             "singleton MCI " + std::to_string(i));
  }
  const auto sat = fit("[ABCDEF]");
  c.near(sat.g2, 0.0, 1e-9, "saturated G2");
  c.equal(sat.df, 0, "saturated df");
  const bool has_zero = std::find(t.counts().begin(), t.counts().end(), 0.0) != t.counts().end();
  c.expect(has_zero, "Reinis has a zero cell");
  const auto final_fit = fit(golden::kFinalModel);
  c.expect(final_fit.converged && std::isfinite(final_fit.g2), "zero-cell table fits");
  return c.report(7);
}

}  // namespace

int main() {
  std::cout << "tolerances: G2 ±" << kG2Tol << ", p ±" << kPTol << ", df exact\n";
  bool ok = true;
  for (auto* criterion : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7}) {
    try {
      ok = criterion() && ok;
    } catch (const std::exception& e) {
      std::cout << "FAIL  exception: " << e.what() << '\n';
      ok = false;
    }
  }
  std::cout << (ok ? "all criteria passed\n" : "some criteria failed\n");
  return ok ? 0 : 1;
}
