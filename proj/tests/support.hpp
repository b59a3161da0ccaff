#pragma once

// Helpers shared by the unit suites and the acceptance binary. Everything here
// is written independently of the library internals it is used to check.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gllm/graphs.hpp"
#include "gllm/loglinear.hpp"
#include "gllm/tabular.hpp"

namespace support {

inline std::string data_path(const std::string& name) { return std::string(GLLM_TEST_DATA_DIR) + "/" + name; }

inline const gllm::ContingencyTable& reinis() {
  static const auto table = gllm::read_counts_csv(data_path("reinis.csv"));
  return table;
}

inline const nlohmann::json& oracle() {
  static const auto doc = [] {
    std::ifstream in(data_path("oracle_values.json"));
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('A' + i));
  return out;
}

inline std::vector<gllm::Factor> factors(const std::vector<std::size_t>& cards) {
  std::vector<gllm::Factor> out;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    gllm::Factor f{std::string(1, static_cast<char>('A' + i)), {}};
    for (std::size_t l = 0; l < cards[i]; ++l) f.levels.push_back("l" + std::to_string(l));
    out.push_back(std::move(f));
  }
  return out;
}

/// Graph on n vertices whose edge k (in (0,1),(0,2),...,(n-2,n-1) order) is
/// present iff bit k of `code` is set.
inline gllm::UndirectedGraph graph_from_code(std::size_t n, std::uint64_t code) {
  gllm::UndirectedGraph g(letters(n));
  std::size_t k = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v, ++k)
      if ((code >> k) & 1U) g.add_edge(u, v);
  return g;
}

inline gllm::UndirectedGraph random_graph(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  gllm::UndirectedGraph g(letters(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

/// Maximal independent sets by exhaustive subset enumeration, sorted by bitmask.
inline std::vector<std::uint64_t> brute_force_mis(const gllm::UndirectedGraph& g) {
  const auto n = g.num_vertices();
  auto independent = [&](std::uint64_t s) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (((s >> u) & 1U) && ((s >> v) & 1U) && g.adjacent(u, v)) return false;
    return true;
  };
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    if (!independent(s)) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v)
      if (!((s >> v) & 1U) && independent(s | (std::uint64_t{1} << v))) maximal = false;
    if (maximal) out.push_back(s);
  }
  return out;
}

inline std::vector<std::uint64_t> sorted_bits(const gllm::VarSetFamily& family) {
  std::vector<std::uint64_t> out;
  for (auto s : family) out.push_back(s.bits());
  std::sort(out.begin(), out.end());
  return out;
}

/// Chordality by repeated removal of simplicial vertices.
inline bool chordal_by_elimination(const gllm::UndirectedGraph& g) {
  const auto n = g.num_vertices();
  std::vector<bool> gone(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    bool removed = false;
    for (std::size_t v = 0; v < n && !removed; ++v) {
      if (gone[v]) continue;
      std::vector<std::size_t> nb;
      for (std::size_t u = 0; u < n; ++u)
        if (!gone[u] && u != v && g.adjacent(u, v)) nb.push_back(u);
      bool simplicial = true;
      for (std::size_t i = 0; i < nb.size() && simplicial; ++i)
        for (std::size_t j = i + 1; j < nb.size() && simplicial; ++j)
          if (!g.adjacent(nb[i], nb[j])) simplicial = false;
      if (simplicial) {
        gone[v] = true;
        removed = true;
      }
    }
    if (!removed) return false;
  }
  return true;
}

/// Random table with strictly positive counts.
inline gllm::ContingencyTable random_table(const std::vector<std::size_t>& cards, std::mt19937_64& rng) {
  std::size_t cells = 1;
  for (auto c : cards) cells *= c;
  std::uniform_real_distribution<double> u(1.0, 60.0);
  std::vector<double> counts(cells);
  for (auto& c : counts) c = std::round(u(rng));
  return {factors(cards), std::move(counts)};
}

/// Random generating class over p factors: a few random terms of size 1..3,
/// then every uncovered factor as a singleton.
inline gllm::GeneratingClass random_class(std::size_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> nterms(1, 4);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  std::uniform_int_distribution<std::size_t> tsize(1, std::min<std::size_t>(3, p));
  gllm::VarSetFamily terms;
  const auto k = nterms(rng);
  for (std::size_t t = 0; t < k; ++t) {
    gllm::VarSet term;
    const auto want = tsize(rng);
    while (term.size() < want) term = term.with(pick(rng));
    terms.push_back(term);
  }
  gllm::VarSet covered;
  for (auto t : terms) covered = covered | t;
  for (std::size_t i = 0; i < p; ++i)
    if (!covered.contains(i)) terms.push_back(gllm::VarSet::single(i));
  return gllm::GeneratingClass::from_terms(terms, p);
}

/// Largest |observed − fitted| over the margins of every generating term,
/// computed by explicit cell walks.
inline double margin_discrepancy(const gllm::ContingencyTable& observed, const gllm::FitResult& fit) {
  const auto cards = observed.cardinalities();
  double worst = 0.0;
  for (auto term : fit.model.terms()) {
    std::vector<double> o, e;
    std::size_t margin_cells = 1;
    for (auto i : term.indices()) margin_cells *= cards[i];
    o.assign(margin_cells, 0.0);
    e.assign(margin_cells, 0.0);
    for (std::size_t c = 0; c < observed.num_cells(); ++c) {
      const auto cell = gllm::linear_to_cell(observed, c);
      std::size_t key = 0;
      for (auto i : term.indices()) key = key * cards[i] + cell.levels[i];
      o[key] += observed.count(c);
      e[key] += fit.expected.count(c);
    }
    for (std::size_t k = 0; k < margin_cells; ++k) worst = std::max(worst, std::fabs(o[k] - e[k]));
  }
  return worst;
}

/// Free parameters counted by walking every subset of the factor set.
inline std::size_t brute_force_parameters(const gllm::GeneratingClass& gc, const std::vector<std::size_t>& cards) {
  const auto p = gc.num_factors();
  std::size_t total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << p); ++s) {
    bool inside = false;
    for (auto t : gc.terms())
      if ((s & ~t.bits()) == 0) inside = true;
    if (!inside) continue;
    std::size_t prod = 1;
    for (std::size_t i = 0; i < p; ++i)
      if ((s >> i) & 1U) prod *= cards[i] - 1;
    total += prod;
  }
  return total;
}

inline double chisq_density(double x, int df) {
  const double k = df / 2.0;
  if (x <= 0.0) return 0.0;
  return std::exp((k - 1.0) * std::log(x) - x / 2.0 - k * std::log(2.0) - std::lgamma(k));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double eps, int depth) {
  const double m = (a + b) / 2.0;
  const double lm = (a + m) / 2.0;
  const double rm = (m + b) / 2.0;
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

/// P(χ²_df > x) by adaptive Simpson integration of the density over unit
/// panels from x to x + 400 + 20 df.
inline double integrated_sf(double x, int df) {
  const auto f = [df](double t) { return chisq_density(t, df); };
  const double end = x + 400.0 + 20.0 * df;
  double total = 0.0;
  for (double a = x; a < end; a += 1.0) {
    const double b = a + 1.0;
    const double fa = f(a), fb = f(b), fm = f((a + b) / 2.0);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson(f, a, b, fa, fm, fb, whole, 1e-13, 50);
  }
  return total;
}

/// N draws from three independent binary factors with P(level 1) = 0.3, 0.6, 0.5.
inline gllm::ContingencyTable sample_independent3(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const std::uint64_t range = std::uint64_t{1} << 32;
  const std::uint64_t cut[3] = {range * 3 / 10, range * 6 / 10, range / 2};
  std::vector<double> counts(8, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t cell = 0;
    for (auto c : cut) cell = cell * 2 + (rng() < c ? 1 : 0);
    counts[cell] += 1.0;
  }
  return {factors({2, 2, 2}), std::move(counts)};
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout; stderr is discarded.
inline CommandResult run(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string cli(const std::string& args) { return std::string("\"") + GLLM_CLI_PATH + "\" " + args; }

}  // namespace support
