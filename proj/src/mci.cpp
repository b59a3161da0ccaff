#include "gllm/mci.hpp"

#include <stdexcept>

namespace gllm {

GeneratingClass mci_generating_class(std::size_t num_factors, VarSet s) {
  const auto all = VarSet::first(num_factors);
  if (s.empty()) throw std::invalid_argument("MCI test needs a non-empty factor set");
  if (!all.contains_all(s)) throw std::invalid_argument("MCI set names an unknown factor");
  const auto rest = all - s;
  VarSetFamily terms;
  for (auto x : s.indices()) terms.push_back(rest.with(x));
  return GeneratingClass::from_terms(std::move(terms), num_factors);
}

MciTestRecord mci_test(const ContingencyTable& table, VarSet s, double alpha, const IpfSettings& ipf) {
  MciTestRecord rec;
  rec.tested = s;
  rec.conditioning = table.all_factors() - s;
  rec.model = mci_generating_class(table.num_factors(), s);
  const auto fit = ipf_fit(table, rec.model, ipf);
  if (!fit.converged) {
    const auto labels = factor_abbreviations(table.factors());
    throw ConvergenceError("IPF did not converge for MCI model " + format_model(rec.model, labels) + " after " +
                           std::to_string(fit.iterations) + " sweeps (margin error " +
                           std::to_string(fit.max_margin_error) + ")");
  }
  rec.outcome = goodness_of_fit(fit, alpha);
  rec.iterations = fit.iterations;
  return rec;
}

}  // namespace gllm
