#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gllm/graphs.hpp"
#include "gllm/tabular.hpp"
#include "gllm/varset.hpp"

namespace gllm {

/// Generating class of a hierarchical log-linear model: the maximal
/// interaction terms, as sets of factor positions.
///
/// Always an antichain in canonical order whose union is every factor.
class GeneratingClass {
 public:
  GeneratingClass() = default;

  /// Drops empty and non-maximal terms and sorts canonically. Throws
  /// std::invalid_argument if a term names a position ≥ num_factors or the
  /// terms do not cover every factor.
  static GeneratingClass from_terms(VarSetFamily terms, std::size_t num_factors);
  /// [X1][X2]...[Xp]
  static GeneratingClass independence(std::size_t num_factors);
  /// [X1 X2 ... Xp]
  static GeneratingClass saturated(std::size_t num_factors);

  const VarSetFamily& terms() const { return terms_; }
  std::size_t num_factors() const { return num_factors_; }

  /// This class plus one more term, re-canonicalized.
  GeneratingClass with_term(VarSet term) const;
  /// True if every term of `other` lies inside some term of this class.
  bool contains(const GeneratingClass& other) const;

  friend bool operator==(const GeneratingClass&, const GeneratingClass&) = default;

 private:
  VarSetFamily terms_;
  std::size_t num_factors_ = 0;
};

/// Every subset of every term, the empty set included, canonically sorted.
VarSetFamily downward_closure(const GeneratingClass& gc);

/// Σ over the downward closure of Π (levels − 1).
std::size_t num_parameters(const GeneratingClass& gc, std::span<const Factor> factors);

/// cells − num_parameters
std::size_t degrees_of_freedom(const GeneratingClass& gc, const ContingencyTable& table);

/// Raised by callers that cannot continue past an unconverged fit.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IpfSettings {
  double tol = 1e-10;
  int max_iter = 1000;
};

struct FitResult {
  GeneratingClass model;
  ContingencyTable expected;
  double g2 = 0.0;
  double x2 = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  int iterations = 0;
  bool converged = false;
  /// Largest |observed − fitted| over every margin in the model after the last sweep.
  double max_margin_error = 0.0;
};

/// Iterative proportional fitting from a uniform start. Non-convergence is
/// reported through FitResult::converged; an invalid model or settings throw.
FitResult ipf_fit(const ContingencyTable& observed, const GeneratingClass& gc, const IpfSettings& settings = {});

/// −2 Σ O log(E/O); O = 0 cells contribute 0, E = 0 with O > 0 gives +inf.
double deviance(std::span<const double> observed, std::span<const double> expected);
/// Σ (O − E)² / E over cells with E > 0.
double pearson_x2(std::span<const double> observed, std::span<const double> expected);

/// Maximal cliques of g as a generating class over its vertices.
GeneratingClass graphical_model_of(const UndirectedGraph& g);

/// Short labels used in bracket notation: the factor names when all are one
/// character long, otherwise A, B, C, ... by position (names beyond 26 factors).
std::vector<std::string> factor_abbreviations(std::span<const Factor> factors);

/// "[AC][ADE][BC][BE][F]" (long labels are comma-separated inside a term).
std::string format_model(const GeneratingClass& gc, std::span<const std::string> labels);

/// Inverse of format_model. Each bracket holds comma-separated factor names or
/// abbreviations, or a run of single-character abbreviations. Throws
/// std::invalid_argument on syntax errors and unknown factors.
GeneratingClass parse_model(std::string_view text, std::span<const Factor> factors);

/// Resolves "E,F", "EF" or "protein,family" to a factor set.
VarSet parse_factor_set(std::string_view text, std::span<const Factor> factors);

}  // namespace gllm
