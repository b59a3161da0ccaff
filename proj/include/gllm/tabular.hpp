#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gllm/varset.hpp"

namespace gllm {

/// A categorical factor with at least two named levels.
struct Factor {
  std::string name;
  std::vector<std::string> levels;

  std::size_t cardinality() const { return levels.size(); }
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// One level ordinal per factor.
struct CellIndex {
  std::vector<std::size_t> levels;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Dense multi-way table of non-negative real counts.
///
/// Cells are laid out in mixed-radix order with the last factor varying
/// fastest. The same type holds observed and fitted tables, so counts are
/// reals. Instances are immutable after construction.
class ContingencyTable {
 public:
  /// Empty placeholder with no factors; only useful as a value to assign over.
  ContingencyTable() = default;
  /// Throws std::invalid_argument when the factors or counts violate the
  /// table invariants (duplicate names or levels, fewer than two levels,
  /// wrong count length, negative or non-finite counts, zero total).
  ContingencyTable(std::vector<Factor> factors, std::vector<double> counts);

  const std::vector<Factor>& factors() const { return factors_; }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  std::span<const double> counts() const { return counts_; }
  double count(std::size_t linear) const { return counts_.at(linear); }

  std::size_t num_factors() const { return factors_.size(); }
  std::size_t num_cells() const { return counts_.size(); }
  double total() const { return total_; }

  /// Throws std::invalid_argument for unknown names.
  std::size_t factor_index(std::string_view name) const;
  std::vector<std::string> factor_names() const;
  std::vector<std::size_t> cardinalities() const;
  /// Stride of each factor in the linear layout.
  const std::vector<std::size_t>& strides() const { return strides_; }
  VarSet all_factors() const { return VarSet::first(factors_.size()); }

  /// Same factors, different counts.
  ContingencyTable with_counts(std::vector<double> counts) const;

  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.factors_ == b.factors_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<Factor> factors_;
  std::vector<double> counts_;
  std::vector<std::size_t> strides_;
  double total_ = 0.0;
};

std::size_t cell_to_linear(const ContingencyTable& table, const CellIndex& cell);
CellIndex linear_to_cell(const ContingencyTable& table, std::size_t linear);

/// Reads the counts CSV: a header naming the factor columns followed by a
/// final column named "count", then one row per cell. Missing cells are zero.
/// Level order is first appearance in the file.
ContingencyTable parse_counts_csv(std::istream& in);
ContingencyTable parse_counts_csv(std::string_view text);
ContingencyTable read_counts_csv(const std::string& path);

/// Writes every cell, including zeros, in linear order.
std::string to_counts_csv(const ContingencyTable& table);

/// Sums over the factors not named in `keep`. Result factors keep the table's
/// factor order.
ContingencyTable marginalize(const ContingencyTable& table, std::span<const std::string> keep);
ContingencyTable marginalize(const ContingencyTable& table, VarSet keep);

/// Maps each cell to its linear index in the margin over `keep`.
std::vector<std::size_t> margin_map(const ContingencyTable& table, VarSet keep);

/// Margin counts over `keep` for an arbitrary count vector laid out like `table`.
std::vector<double> margin_counts(const ContingencyTable& table, std::span<const double> counts,
                                  VarSet keep);

}  // namespace gllm
