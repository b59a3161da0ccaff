#include "gllm/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace gllm {

ContingencyTable::ContingencyTable(std::vector<Factor> factors, std::vector<double> counts)
    : factors_(std::move(factors)), counts_(std::move(counts)) {
  if (factors_.empty()) throw std::invalid_argument("table needs at least one factor");
  if (factors_.size() > kMaxVariables) throw std::invalid_argument("too many factors");
  std::unordered_set<std::string> names;
  std::size_t cells = 1;
  for (const auto& f : factors_) {
    if (f.name.empty()) throw std::invalid_argument("factor with empty name");
    if (!names.insert(f.name).second) throw std::invalid_argument("duplicate factor name '" + f.name + "'");
    if (f.levels.size() < 2)
      throw std::invalid_argument("factor '" + f.name + "' has fewer than 2 levels");
    std::unordered_set<std::string> lv(f.levels.begin(), f.levels.end());
    if (lv.size() != f.levels.size())
      throw std::invalid_argument("factor '" + f.name + "' has duplicate levels");
    cells *= f.levels.size();
  }
  if (counts_.size() != cells)
    throw std::invalid_argument("expected " + std::to_string(cells) + " counts, got " +
                                std::to_string(counts_.size()));
  for (double c : counts_) {
    if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("counts must be finite and non-negative");
    total_ += c;
  }
  if (!(total_ > 0.0)) throw std::invalid_argument("table total must be positive");

  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size() - 1; i > 0; --i)
    strides_[i - 1] = strides_[i] * factors_[i].levels.size();
}

std::size_t ContingencyTable::factor_index(std::string_view name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == name) return i;
  throw std::invalid_argument("unknown factor '" + std::string(name) + "'");
}

std::vector<std::string> ContingencyTable::factor_names() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) out.push_back(f.name);
  return out;
}

std::vector<std::size_t> ContingencyTable::cardinalities() const {
  std::vector<std::size_t> out;
  for (const auto& f : factors_) out.push_back(f.levels.size());
  return out;
}

ContingencyTable ContingencyTable::with_counts(std::vector<double> counts) const {
  return ContingencyTable(factors_, std::move(counts));
}

std::size_t cell_to_linear(const ContingencyTable& table, const CellIndex& cell) {
  if (cell.levels.size() != table.num_factors())
    throw std::invalid_argument("cell has " + std::to_string(cell.levels.size()) + " ordinals, table has " +
                                std::to_string(table.num_factors()) + " factors");
  std::size_t linear = 0;
  for (std::size_t i = 0; i < cell.levels.size(); ++i) {
    if (cell.levels[i] >= table.factor(i).cardinality())
      throw std::out_of_range("level ordinal out of range for factor '" + table.factor(i).name + "'");
    linear += cell.levels[i] * table.strides()[i];
  }
  return linear;
}

CellIndex linear_to_cell(const ContingencyTable& table, std::size_t linear) {
  if (linear >= table.num_cells()) throw std::out_of_range("linear index out of range");
  CellIndex cell;
  cell.levels.resize(table.num_factors());
  for (std::size_t i = 0; i < table.num_factors(); ++i) {
    cell.levels[i] = linear / table.strides()[i];
    linear %= table.strides()[i];
  }
  return cell;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_count(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw std::invalid_argument("line " + std::to_string(line_no) + ": non-numeric count '" +
                                std::string(field) + "'");
  if (value < 0.0) throw std::invalid_argument("line " + std::to_string(line_no) + ": negative count");
  return value;
}

}  // namespace

ContingencyTable parse_counts_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  while (names.empty() && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_row(line)) names.emplace_back(f);
  }
  if (names.empty()) throw std::invalid_argument("empty counts file");
  if (names.size() < 2 || names.back() != "count")
    throw std::invalid_argument("header must list factor columns followed by a 'count' column");
  names.pop_back();
  for (const auto& n : names)
    if (n.empty() || n.find('"') != std::string::npos)
      throw std::invalid_argument("invalid factor name in header: '" + n + "'");

  const std::size_t p = names.size();
  std::vector<std::vector<std::string>> levels(p);
  std::map<std::vector<std::size_t>, double> cells;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line);
    if (fields.size() != p + 1)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " + std::to_string(p + 1) +
                                  " fields, got " + std::to_string(fields.size()));
    std::vector<std::size_t> key(p);
    for (std::size_t i = 0; i < p; ++i) {
      const std::string label(fields[i]);
      if (label.empty() || label.find('"') != std::string::npos)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": invalid level label '" + label + "'");
      auto it = std::find(levels[i].begin(), levels[i].end(), label);
      key[i] = static_cast<std::size_t>(it - levels[i].begin());
      if (it == levels[i].end()) levels[i].push_back(label);
    }
    const double value = parse_count(fields[p], line_no);
    if (!cells.emplace(std::move(key), value).second)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate cell");
  }

  std::vector<Factor> factors;
  for (std::size_t i = 0; i < p; ++i) {
    if (levels[i].size() < 2)
      throw std::invalid_argument("factor '" + names[i] + "' has fewer than 2 observed levels");
    factors.push_back(Factor{names[i], std::move(levels[i])});
  }
  std::size_t num_cells = 1;
  for (const auto& f : factors) num_cells *= f.cardinality();
  std::vector<double> counts(num_cells, 0.0);
  for (const auto& [key, value] : cells) {
    std::size_t linear = 0;
    for (std::size_t i = 0; i < p; ++i) linear = linear * factors[i].cardinality() + key[i];
    counts[linear] = value;
  }
  return ContingencyTable(std::move(factors), std::move(counts));
}

ContingencyTable parse_counts_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_counts_csv(in);
}

ContingencyTable read_counts_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_counts_csv(in);
}

std::string to_counts_csv(const ContingencyTable& table) {
  std::ostringstream out;
  for (const auto& f : table.factors()) out << f.name << ',';
  out << "count\n";
  out << std::setprecision(17);
  for (std::size_t c = 0; c < table.num_cells(); ++c) {
    const auto cell = linear_to_cell(table, c);
    for (std::size_t i = 0; i < table.num_factors(); ++i) out << table.factor(i).levels[cell.levels[i]] << ',';
    out << table.count(c) << '\n';
  }
  return out.str();
}

std::vector<std::size_t> margin_map(const ContingencyTable& table, VarSet keep) {
  const auto kept = keep.indices();
  std::vector<std::size_t> mstride(kept.size(), 1);
  for (std::size_t k = kept.size(); k > 1; --k) mstride[k - 2] = mstride[k - 1] * table.factor(kept[k - 1]).cardinality();

  std::vector<std::size_t> out(table.num_cells());
  const auto& strides = table.strides();
  for (std::size_t c = 0; c < table.num_cells(); ++c) {
    std::size_t m = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const auto i = kept[k];
      m += ((c / strides[i]) % table.factor(i).cardinality()) * mstride[k];
    }
    out[c] = m;
  }
  return out;
}

std::vector<double> margin_counts(const ContingencyTable& table, std::span<const double> counts, VarSet keep) {
  if (counts.size() != table.num_cells()) throw std::invalid_argument("count vector does not match table layout");
  std::size_t size = 1;
  for (auto i : keep.indices()) size *= table.factor(i).cardinality();
  std::vector<double> out(size, 0.0);
  const auto map = margin_map(table, keep);
  for (std::size_t c = 0; c < counts.size(); ++c) out[map[c]] += counts[c];
  return out;
}

ContingencyTable marginalize(const ContingencyTable& table, VarSet keep) {
  if (keep.empty()) throw std::invalid_argument("marginalize: empty keep set");
  if (!table.all_factors().contains_all(keep)) throw std::invalid_argument("marginalize: unknown factor");
  std::vector<Factor> factors;
  for (auto i : keep.indices()) factors.push_back(table.factor(i));
  return ContingencyTable(std::move(factors), margin_counts(table, table.counts(), keep));
}

ContingencyTable marginalize(const ContingencyTable& table, std::span<const std::string> keep) {
  VarSet s;
  for (const auto& name : keep) s = s.with(table.factor_index(name));
  return marginalize(table, s);
}

}  // namespace gllm
