#include "tsinfo/core.hpp"

#include <algorithm>
#include <cmath>

namespace tsinfo {

namespace {

std::string at(const std::string& where, const std::string& what) {
  return where + ": " + what;
}

}  // namespace

ObservationSeries ObservationSeries::discrete(DiscreteData states, SeriesMeta meta) {
  if (states.empty()) {
    throw ValidationError(at("core.ObservationSeries", "series must contain at least one observation"));
  }
  ObservationSeries s;
  s.data_ = std::move(states);
  s.meta_ = std::move(meta);
  return s;
}

ObservationSeries ObservationSeries::continuous(ContinuousData points, SeriesMeta meta) {
  if (points.empty()) {
    throw ValidationError(at("core.ObservationSeries", "series must contain at least one observation"));
  }
  const std::size_t dim = points.front().size();
  if (dim == 0) {
    throw ValidationError(at("core.ObservationSeries", "continuous observations need dimension >= 1"));
  }
  for (const auto& row : points) {
    if (row.size() != dim) {
      throw ValidationError(at("core.ObservationSeries", "all observations must share one dimension"));
    }
  }
  ObservationSeries s;
  s.data_ = std::move(points);
  s.meta_ = std::move(meta);
  return s;
}

std::size_t ObservationSeries::size() const {
  if (is_discrete()) return std::get<DiscreteData>(data_).size();
  return std::get<ContinuousData>(data_).size();
}

const ObservationSeries::DiscreteData& ObservationSeries::discrete_states() const {
  if (!is_discrete()) {
    throw ValidationError(at("core.ObservationSeries", "series is continuous, not discrete"));
  }
  return std::get<DiscreteData>(data_);
}

const ObservationSeries::ContinuousData& ObservationSeries::continuous_points() const {
  if (is_discrete()) {
    throw ValidationError(at("core.ObservationSeries", "series is discrete, not continuous"));
  }
  return std::get<ContinuousData>(data_);
}

std::size_t ObservationSeries::dimension() const {
  return continuous_points().front().size();
}

void ObservationSeries::set_actions(std::vector<std::uint32_t> actions) {
  if (!actions.empty() && actions.size() != size()) {
    throw ValidationError(at("core.ObservationSeries", "action column length must equal series length"));
  }
  actions_ = std::move(actions);
}

RepresentationFunction::RepresentationFunction(LookupTable table, std::uint32_t alphabet_size)
    : alphabet_size_(alphabet_size), impl_(std::move(table)) {
  const auto& t = std::get<LookupTable>(impl_).table;
  if (alphabet_size_ == 0) {
    throw ValidationError(at("core.RepresentationFunction", "alphabet size must be >= 1"));
  }
  if (t.empty()) {
    throw ValidationError(at("core.RepresentationFunction", "lookup table must not be empty"));
  }
  for (Symbol s : t) {
    if (s >= alphabet_size_) {
      throw ValidationError(at("core.RepresentationFunction",
                               "table entry " + std::to_string(s) + " outside alphabet of size " +
                                   std::to_string(alphabet_size_)));
    }
  }
}

RepresentationFunction::RepresentationFunction(GridQuantizer quantizer, std::uint32_t alphabet_size)
    : alphabet_size_(alphabet_size), impl_(std::move(quantizer)) {
  const auto& q = std::get<GridQuantizer>(impl_);
  if (alphabet_size_ == 0) {
    throw ValidationError(at("core.RepresentationFunction", "alphabet size must be >= 1"));
  }
  if (q.thresholds.empty()) {
    throw ValidationError(at("core.RepresentationFunction", "quantizer needs dimension >= 1"));
  }
  std::size_t n_cells = 1;
  for (const auto& axis : q.thresholds) {
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i - 1] < axis[i])) {
        throw ValidationError(at("core.RepresentationFunction",
                                 "quantizer thresholds must be strictly increasing per dimension"));
      }
    }
    n_cells *= axis.size() + 1;
    if (n_cells > 100000000ull) {
      throw GuardError(at("core.RepresentationFunction", "quantizer cell count exceeds 1e8"));
    }
  }
  if (q.cells.size() != n_cells) {
    throw ValidationError(at("core.RepresentationFunction",
                             "cell assignment size " + std::to_string(q.cells.size()) +
                                 " does not cover the " + std::to_string(n_cells) + " grid cells"));
  }
  for (Symbol s : q.cells) {
    if (s >= alphabet_size_) {
      throw ValidationError(at("core.RepresentationFunction", "cell symbol outside alphabet"));
    }
  }
}

RepresentationFunction RepresentationFunction::identity(std::uint32_t n_states) {
  LookupTable t;
  t.table.resize(n_states);
  for (std::uint32_t i = 0; i < n_states; ++i) t.table[i] = i;
  return RepresentationFunction(std::move(t), n_states);
}

RepresentationFunction RepresentationFunction::constant(std::uint32_t n_states, Symbol value,
                                                        std::uint32_t alphabet_size) {
  LookupTable t;
  t.table.assign(n_states, value);
  return RepresentationFunction(std::move(t), alphabet_size);
}

const LookupTable& RepresentationFunction::lookup() const {
  if (!is_lookup()) {
    throw ValidationError(at("core.RepresentationFunction", "not a lookup-table representation"));
  }
  return std::get<LookupTable>(impl_);
}

const GridQuantizer& RepresentationFunction::quantizer() const {
  if (is_lookup()) {
    throw ValidationError(at("core.RepresentationFunction", "not a quantizer representation"));
  }
  return std::get<GridQuantizer>(impl_);
}

std::size_t RepresentationFunction::domain_size() const { return lookup().table.size(); }

std::size_t RepresentationFunction::input_dimension() const { return quantizer().thresholds.size(); }

Symbol RepresentationFunction::operator()(std::uint32_t state) const {
  const auto& t = lookup().table;
  if (state >= t.size()) {
    throw ValidationError(at("core.apply_representation",
                             "state index " + std::to_string(state) +
                                 " outside lookup table domain of size " + std::to_string(t.size())));
  }
  return t[state];
}

Symbol RepresentationFunction::operator()(std::span<const double> point) const {
  const auto& q = quantizer();
  if (point.size() != q.thresholds.size()) {
    throw ValidationError(at("core.apply_representation",
                             "observation dimension " + std::to_string(point.size()) +
                                 " does not match quantizer dimension " +
                                 std::to_string(q.thresholds.size())));
  }
  // Row-major flat cell index; a coordinate equal to a threshold goes up.
  std::size_t flat = 0;
  for (std::size_t d = 0; d < point.size(); ++d) {
    const auto& axis = q.thresholds[d];
    const std::size_t cell =
        static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), point[d]) - axis.begin());
    flat = flat * (axis.size() + 1) + cell;
  }
  return q.cells[flat];
}

double EmpiricalBlockDistribution::probability(std::uint64_t code) const {
  auto it = counts.find(code);
  if (it == counts.end() || n_blocks == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(n_blocks);
}

std::uint64_t encode_block(std::span<const Symbol> block, std::uint32_t alphabet_size) {
  std::uint64_t code = 0;
  for (Symbol s : block) code = code * alphabet_size + s;
  return code;
}

std::vector<Symbol> decode_block(std::uint64_t code, std::uint32_t alphabet_size,
                                 std::uint32_t block_len) {
  std::vector<Symbol> out(block_len, 0);
  for (std::uint32_t i = block_len; i-- > 0;) {
    out[i] = static_cast<Symbol>(code % alphabet_size);
    code /= alphabet_size;
  }
  return out;
}

SymbolSequence apply_representation(const RepresentationFunction& f,
                                    const ObservationSeries& series) {
  SymbolSequence out;
  out.reserve(series.size());
  if (series.is_discrete()) {
    if (!f.is_lookup()) {
      throw ValidationError("core.apply_representation: discrete series requires a lookup-table map");
    }
    for (std::uint32_t x : series.discrete_states()) out.push_back(f(x));
  } else {
    if (f.is_lookup()) {
      throw ValidationError("core.apply_representation: continuous series requires a quantizer map");
    }
    for (const auto& p : series.continuous_points()) out.push_back(f(std::span<const double>(p)));
  }
  return out;
}

EmpiricalBlockDistribution collect_blocks(std::span<const Symbol> symbols, std::uint32_t k,
                                          std::uint32_t alphabet_size) {
  if (symbols.size() <= k) {
    throw ValidationError("core.collect_blocks: sequence of length " +
                          std::to_string(symbols.size()) + " too short for block memory k=" +
                          std::to_string(k));
  }
  if (alphabet_size == 0) {
    throw ValidationError("core.collect_blocks: alphabet size must be >= 1");
  }
  // Block codes live in a u64; |Y|^(k+1) must stay below 2^63.
  if ((k + 1.0) * std::log2(static_cast<double>(std::max(alphabet_size, 2u))) > 63.0) {
    throw GuardError("core.collect_blocks: |Y|^(k+1) exceeds the 64-bit block code range");
  }
  for (Symbol s : symbols) {
    if (s >= alphabet_size) {
      throw ValidationError("core.collect_blocks: symbol " + std::to_string(s) +
                            " outside alphabet of size " + std::to_string(alphabet_size));
    }
  }

  EmpiricalBlockDistribution dist;
  dist.block_len = k + 1;
  dist.alphabet_size = alphabet_size;
  dist.n_blocks = symbols.size() - k;

  // Rolling code over the window of length k+1.
  std::uint64_t modulus = 1;
  for (std::uint32_t i = 0; i < k; ++i) modulus *= alphabet_size;
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < k; ++i) code = code * alphabet_size + symbols[i];
  for (std::size_t i = k; i < symbols.size(); ++i) {
    code = (code % modulus) * alphabet_size + symbols[i];
    ++dist.counts[code];
  }
  return dist;
}

EmpiricalBlockDistribution marginalize_first(const EmpiricalBlockDistribution& dist,
                                             std::uint32_t prefix_len) {
  if (prefix_len == 0 || prefix_len > dist.block_len) {
    throw ValidationError("core.marginalize_first: prefix length must be in [1, block_len]");
  }
  std::uint64_t divisor = 1;
  for (std::uint32_t i = prefix_len; i < dist.block_len; ++i) divisor *= dist.alphabet_size;

  EmpiricalBlockDistribution out;
  out.block_len = prefix_len;
  out.alphabet_size = dist.alphabet_size;
  out.n_blocks = dist.n_blocks;
  for (const auto& [code, count] : dist.counts) out.counts[code / divisor] += count;
  return out;
}

}  // namespace tsinfo
