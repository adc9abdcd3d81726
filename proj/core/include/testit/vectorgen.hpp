#pragma once

#include "testit/config.hpp"
#include "testit/datatype.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace testit {

/// Concrete parameter values for one test run, in declaration order.
class ParameterBinding {
 public:
  ParameterBinding() = default;
  ParameterBinding(std::initializer_list<std::pair<std::string, std::int64_t>> init)
      : entries_(init) {}

  void set(std::string name, std::int64_t value);
  std::optional<std::int64_t> get(std::string_view name) const;

  const std::vector<std::pair<std::string, std::int64_t>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// "SIZE=4,K=1"; "-" when empty.
  std::string to_string() const;

  bool operator==(const ParameterBinding&) const = default;

 private:
  std::vector<std::pair<std::string, std::int64_t>> entries_;
};

struct MaterializedDataset {
  std::string name;
  DataType dataType = DataType::kUint8;
  std::vector<std::size_t> shape;
  std::vector<double> values;  // row-major

  std::size_t element_count() const;
  bool operator==(const MaterializedDataset&) const = default;
};

/// Number of elements implied by `shape` (1 for an empty shape).
std::size_t shape_product(const std::vector<std::size_t>& shape);

/// {min, min+step, ...} not exceeding max, or the scalar value.
std::vector<std::int64_t> admissible_values(const ParameterSpec& p);
std::uint64_t admissible_count(const ParameterSpec& p);

/// Random-mode bindings, indexed [iteration][test]. Each value is drawn
/// uniformly from admissible_values() using a stream keyed by
/// (seed, iteration, test index, parameter name).
std::vector<std::vector<ParameterBinding>> plan_random(const TestConfig& config,
                                                       std::uint64_t seed);

/// Cartesian product of one test's admissible values; the last declared
/// parameter varies fastest. A test without parameters yields one empty
/// binding.
std::vector<ParameterBinding> plan_sweep(const TestSpec& test);

/// plan_sweep() for every test, indexed [test][combination].
std::vector<std::vector<ParameterBinding>> plan_sweep(const TestConfig& config);

/// Replaces symbolic dimensions by their bound values.
/// Throws Error(kUnboundDimension) for a dimension missing from `binding`.
std::vector<std::size_t> resolve_shape(const InputDatasetSpec& spec,
                                       const ParameterBinding& binding);

/// One dataset per InputDatasetSpec, each drawn from a stream keyed by
/// (seed, iteration, test index, dataset name).
std::vector<MaterializedDataset> generate_inputs(const TestSpec& test,
                                                 const ParameterBinding& binding,
                                                 std::uint64_t seed, std::uint64_t iteration,
                                                 std::uint64_t test_index = 0);

}  // namespace testit
