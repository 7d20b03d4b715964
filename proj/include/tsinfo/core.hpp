#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace tsinfo {

/// Input violates a documented precondition. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A size/enumeration guard would be exceeded. The CLI maps this to exit code 3.
class GuardError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Information quantities are measured in bits (log base 2) throughout.
using Bits = double;

/// Element of the finite representation alphabet, in [0, alphabet_size).
using Symbol = std::uint32_t;
using SymbolSequence = std::vector<Symbol>;

struct SeriesMeta {
  std::uint64_t seed = 0;
  std::string generator;
};

/// An ordered sequence of observations, either discrete state indices or
/// fixed-dimension real vectors, with an optional aligned action column.
/// Immutable after construction.
class ObservationSeries {
 public:
  using DiscreteData = std::vector<std::uint32_t>;
  using ContinuousData = std::vector<std::vector<double>>;

  static ObservationSeries discrete(DiscreteData states, SeriesMeta meta = {});
  static ObservationSeries continuous(ContinuousData points, SeriesMeta meta = {});

  std::size_t size() const;
  bool is_discrete() const { return std::holds_alternative<DiscreteData>(data_); }
  const DiscreteData& discrete_states() const;
  const ContinuousData& continuous_points() const;
  std::size_t dimension() const;  // continuous series only

  bool has_actions() const { return !actions_.empty(); }
  const std::vector<std::uint32_t>& actions() const { return actions_; }
  void set_actions(std::vector<std::uint32_t> actions);

  const SeriesMeta& meta() const { return meta_; }

 private:
  ObservationSeries() = default;

  std::variant<DiscreteData, ContinuousData> data_;
  std::vector<std::uint32_t> actions_;
  SeriesMeta meta_;
};

/// Total map from a finite state space: table[x] is the symbol of state x.
struct LookupTable {
  std::vector<Symbol> table;
};

/// Axis-aligned quantizer for real vectors. Each dimension carries strictly
/// increasing thresholds; a coordinate equal to a threshold falls in the
/// upper cell. `cells` maps the row-major flat cell index to a symbol and
/// covers every cell, so the map is total.
struct GridQuantizer {
  std::vector<std::vector<double>> thresholds;
  std::vector<Symbol> cells;
};

/// A deterministic representation f: X -> Y with Y = {0..alphabet_size-1}.
class RepresentationFunction {
 public:
  RepresentationFunction(LookupTable table, std::uint32_t alphabet_size);
  RepresentationFunction(GridQuantizer quantizer, std::uint32_t alphabet_size);

  static RepresentationFunction identity(std::uint32_t n_states);
  static RepresentationFunction constant(std::uint32_t n_states, Symbol value,
                                         std::uint32_t alphabet_size);

  std::uint32_t alphabet_size() const { return alphabet_size_; }
  bool is_lookup() const { return std::holds_alternative<LookupTable>(impl_); }
  const LookupTable& lookup() const;
  const GridQuantizer& quantizer() const;

  /// Domain size of a lookup-table map.
  std::size_t domain_size() const;
  /// Input dimension of a quantizer map.
  std::size_t input_dimension() const;

  Symbol operator()(std::uint32_t state) const;
  Symbol operator()(std::span<const double> point) const;

 private:
  std::uint32_t alphabet_size_;
  std::variant<LookupTable, GridQuantizer> impl_;
};

/// Counts of overlapping length-(k+1) blocks of a symbol sequence, keyed by
/// the base-|Y| integer code of the block (first symbol most significant).
struct EmpiricalBlockDistribution {
  std::uint32_t block_len = 0;  // k + 1
  std::uint32_t alphabet_size = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n_blocks = 0;

  double probability(std::uint64_t code) const;
};

std::uint64_t encode_block(std::span<const Symbol> block, std::uint32_t alphabet_size);
std::vector<Symbol> decode_block(std::uint64_t code, std::uint32_t alphabet_size,
                                 std::uint32_t block_len);

/// Materializes f(X_0),...,f(X_n). The series variant must match the
/// function variant (discrete <-> lookup table, continuous <-> quantizer).
SymbolSequence apply_representation(const RepresentationFunction& f,
                                    const ObservationSeries& series);

/// Counts all overlapping blocks of length k+1 (stride 1). Requires
/// symbols.size() > k; n_blocks = symbols.size() - k.
EmpiricalBlockDistribution collect_blocks(std::span<const Symbol> symbols, std::uint32_t k,
                                          std::uint32_t alphabet_size);

/// Projects block counts onto the first `prefix_len` coordinates.
EmpiricalBlockDistribution marginalize_first(const EmpiricalBlockDistribution& dist,
                                             std::uint32_t prefix_len);

}  // namespace tsinfo
