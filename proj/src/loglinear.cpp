#include "gllm/loglinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "gllm/chisq.hpp"

namespace gllm {

GeneratingClass GeneratingClass::from_terms(VarSetFamily terms, std::size_t num_factors) {
  if (num_factors == 0 || num_factors > kMaxVariables) throw std::invalid_argument("generating class: bad factor count");
  const auto all = VarSet::first(num_factors);
  VarSet covered;
  for (auto t : terms) {
    if (!all.contains_all(t)) throw std::invalid_argument("generating class: term refers to an unknown factor");
    covered = covered | t;
  }
  if (covered != all) throw std::invalid_argument("generating class does not cover every factor");
  std::erase_if(terms, [](VarSet t) { return t.empty(); });
  GeneratingClass gc;
  gc.terms_ = maximal_members(std::move(terms));
  gc.num_factors_ = num_factors;
  return gc;
}

GeneratingClass GeneratingClass::independence(std::size_t num_factors) {
  VarSetFamily terms;
  for (std::size_t i = 0; i < num_factors; ++i) terms.push_back(VarSet::single(i));
  return from_terms(std::move(terms), num_factors);
}

GeneratingClass GeneratingClass::saturated(std::size_t num_factors) {
  return from_terms({VarSet::first(num_factors)}, num_factors);
}

GeneratingClass GeneratingClass::with_term(VarSet term) const {
  auto terms = terms_;
  terms.push_back(term);
  return from_terms(std::move(terms), num_factors_);
}

bool GeneratingClass::contains(const GeneratingClass& other) const {
  return std::all_of(other.terms_.begin(), other.terms_.end(), [this](VarSet t) {
    return std::any_of(terms_.begin(), terms_.end(), [t](VarSet u) { return t.subset_of(u); });
  });
}

VarSetFamily downward_closure(const GeneratingClass& gc) {
  std::unordered_set<std::uint64_t> seen;
  VarSetFamily out;
  for (auto term : gc.terms()) {
    const auto t = term.bits();
    // Walk every submask of t, down to and including the empty set.
    for (std::uint64_t sub = t;; sub = (sub - 1) & t) {
      if (seen.insert(sub).second) out.emplace_back(sub);
      if (sub == 0) break;
    }
  }
  canonicalize(out);
  return out;
}

std::size_t num_parameters(const GeneratingClass& gc, std::span<const Factor> factors) {
  if (gc.num_factors() != factors.size()) throw std::invalid_argument("generating class and factor list disagree");
  std::size_t total = 0;
  for (auto s : downward_closure(gc)) {
    std::size_t prod = 1;
    for (auto i : s.indices()) prod *= factors[i].cardinality() - 1;
    total += prod;
  }
  return total;
}

std::size_t degrees_of_freedom(const GeneratingClass& gc, const ContingencyTable& table) {
  return table.num_cells() - num_parameters(gc, table.factors());
}

double deviance(std::span<const double> observed, std::span<const double> expected) {
  double sum = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double o = observed[c];
    if (o <= 0.0) continue;
    const double e = expected[c];
    if (e <= 0.0) return std::numeric_limits<double>::infinity();
    sum += o * std::log(o / e);
  }
  return std::max(0.0, 2.0 * sum);
}

double pearson_x2(std::span<const double> observed, std::span<const double> expected) {
  double sum = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = expected[c];
    if (e > 0.0) sum += (observed[c] - e) * (observed[c] - e) / e;
  }
  return sum;
}

namespace {

struct MarginPlan {
  std::vector<std::size_t> map;
  std::vector<double> observed;
  std::vector<double> fitted;
};

}  // namespace

FitResult ipf_fit(const ContingencyTable& observed, const GeneratingClass& gc, const IpfSettings& settings) {
  if (gc.num_factors() != observed.num_factors())
    throw std::invalid_argument("generating class has " + std::to_string(gc.num_factors()) +
                                " factors, table has " + std::to_string(observed.num_factors()));
  if (gc.terms().empty()) throw std::invalid_argument("empty generating class");
  if (!(settings.tol > 0.0)) throw std::invalid_argument("IPF tolerance must be positive");
  if (settings.max_iter < 1) throw std::invalid_argument("IPF max_iter must be positive");

  const auto obs = observed.counts();
  std::vector<MarginPlan> plans;
  for (auto term : gc.terms()) {
    MarginPlan plan;
    plan.map = margin_map(observed, term);
    plan.observed = margin_counts(observed, obs, term);
    plan.fitted.assign(plan.observed.size(), 0.0);
    plans.push_back(std::move(plan));
  }

  std::vector<double> fit(observed.num_cells(), observed.total() / static_cast<double>(observed.num_cells()));

  auto accumulate = [&fit](MarginPlan& plan) {
    std::fill(plan.fitted.begin(), plan.fitted.end(), 0.0);
    for (std::size_t c = 0; c < fit.size(); ++c) plan.fitted[plan.map[c]] += fit[c];
  };

  FitResult result;
  result.model = gc;
  for (int sweep = 1; sweep <= settings.max_iter; ++sweep) {
    for (auto& plan : plans) {
      accumulate(plan);
      for (std::size_t c = 0; c < fit.size(); ++c) {
        const double target = plan.observed[plan.map[c]];
        const double current = plan.fitted[plan.map[c]];
        fit[c] = current > 0.0 ? fit[c] * (target / current) : 0.0;
      }
    }
    double err = 0.0;
    for (auto& plan : plans) {
      accumulate(plan);
      for (std::size_t m = 0; m < plan.fitted.size(); ++m) err = std::max(err, std::abs(plan.fitted[m] - plan.observed[m]));
    }
    result.iterations = sweep;
    result.max_margin_error = err;
    if (err <= settings.tol) {
      result.converged = true;
      break;
    }
  }

  result.g2 = deviance(obs, fit);
  result.x2 = pearson_x2(obs, fit);
  if (std::isinf(result.g2)) result.converged = false;
  result.df = degrees_of_freedom(gc, observed);
  if (result.df == 0)
    result.p_value = 1.0;
  else
    result.p_value = std::isinf(result.g2) ? 0.0 : chisq_sf(result.g2, static_cast<int>(result.df));
  result.expected = observed.with_counts(std::move(fit));
  return result;
}

GeneratingClass graphical_model_of(const UndirectedGraph& g) {
  return GeneratingClass::from_terms(maximal_cliques(g), g.num_vertices());
}

std::vector<std::string> factor_abbreviations(std::span<const Factor> factors) {
  std::vector<std::string> out;
  const bool single = std::all_of(factors.begin(), factors.end(), [](const Factor& f) { return f.name.size() == 1; });
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (single || factors.size() > 26)
      out.push_back(factors[i].name);
    else
      out.emplace_back(1, static_cast<char>('A' + i));
  }
  return out;
}

std::string format_model(const GeneratingClass& gc, std::span<const std::string> labels) {
  std::string out;
  for (auto t : gc.terms()) out += "[" + join_labels(t, labels) + "]";
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::optional<std::size_t> resolve(std::string_view token, std::span<const Factor> factors,
                                   std::span<const std::string> abbrev) {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].name == token) return i;
  for (std::size_t i = 0; i < abbrev.size(); ++i)
    if (abbrev[i] == token) return i;
  return std::nullopt;
}

// A comma-free token that is not itself a label may be a run of one-character labels.
VarSet resolve_token(std::string_view token, std::span<const Factor> factors, std::span<const std::string> abbrev) {
  if (token.empty()) throw std::invalid_argument("empty factor name");
  if (auto i = resolve(token, factors, abbrev)) return VarSet::single(*i);
  VarSet s;
  for (char c : token) {
    auto i = resolve(std::string_view(&c, 1), factors, abbrev);
    if (!i) throw std::invalid_argument("unknown factor '" + std::string(token) + "'");
    if (s.contains(*i)) throw std::invalid_argument("factor repeated in '" + std::string(token) + "'");
    s = s.with(*i);
  }
  return s;
}

VarSet resolve_list(std::string_view text, std::span<const Factor> factors, std::span<const std::string> abbrev) {
  VarSet s;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    const auto token = trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    const auto part = resolve_token(token, factors, abbrev);
    if (s.intersects(part)) throw std::invalid_argument("factor repeated in '" + std::string(text) + "'");
    s = s | part;
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return s;
}

}  // namespace

GeneratingClass parse_model(std::string_view text, std::span<const Factor> factors) {
  const auto abbrev = factor_abbreviations(factors);
  VarSetFamily terms;
  auto rest = trim(text);
  if (rest.empty()) throw std::invalid_argument("empty model");
  while (!rest.empty()) {
    if (rest.front() != '[') throw std::invalid_argument("expected '[' in model '" + std::string(text) + "'");
    const auto close = rest.find(']');
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated '[' in model '" + std::string(text) + "'");
    const auto body = trim(rest.substr(1, close - 1));
    if (body.empty()) throw std::invalid_argument("empty term in model '" + std::string(text) + "'");
    if (body.find('[') != std::string_view::npos) throw std::invalid_argument("nested '[' in model");
    terms.push_back(resolve_list(body, factors, abbrev));
    rest = trim(rest.substr(close + 1));
  }
  return GeneratingClass::from_terms(std::move(terms), factors.size());
}

VarSet parse_factor_set(std::string_view text, std::span<const Factor> factors) {
  const auto body = trim(text);
  if (body.empty()) throw std::invalid_argument("empty factor set");
  return resolve_list(body, factors, factor_abbreviations(factors));
}

}  // namespace gllm
