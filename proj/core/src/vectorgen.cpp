#include "testit/vectorgen.hpp"

#include "testit/error.hpp"
#include "testit/rng.hpp"

#include <cmath>

namespace testit {

void ParameterBinding::set(std::string name, std::int64_t value) {
  for (auto& [k, v] : entries_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::move(name), value);
}

std::optional<std::int64_t> ParameterBinding::get(std::string_view name) const {
  for (const auto& [k, v] : entries_) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::string ParameterBinding::to_string() const {
  if (entries_.empty()) return "-";
  std::string out;
  for (const auto& [k, v] : entries_) {
    if (!out.empty()) out += ',';
    out += k + "=" + std::to_string(v);
  }
  return out;
}

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::size_t MaterializedDataset::element_count() const { return shape_product(shape); }

std::uint64_t admissible_count(const ParameterSpec& p) {
  if (!p.is_range()) return 1;
  const auto& r = std::get<IntRange>(p.value);
  const std::uint64_t span = static_cast<std::uint64_t>(r.max) - static_cast<std::uint64_t>(r.min);
  return span / static_cast<std::uint64_t>(p.step) + 1;
}

namespace {

std::int64_t admissible_at(const ParameterSpec& p, std::uint64_t i) {
  if (!p.is_range()) return std::get<std::int64_t>(p.value);
  const auto& r = std::get<IntRange>(p.value);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(r.min) +
                                   i * static_cast<std::uint64_t>(p.step));
}

}  // namespace

std::vector<std::int64_t> admissible_values(const ParameterSpec& p) {
  const std::uint64_t n = admissible_count(p);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(admissible_at(p, i));
  return out;
}

std::vector<std::vector<ParameterBinding>> plan_random(const TestConfig& config,
                                                       std::uint64_t seed) {
  std::vector<std::vector<ParameterBinding>> plan;
  plan.reserve(static_cast<std::size_t>(config.target.iterations));
  for (std::int64_t it = 0; it < config.target.iterations; ++it) {
    std::vector<ParameterBinding> per_test;
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      ParameterBinding b;
      for (const ParameterSpec& p : config.tests[t].parameters) {
        RandomStream rs(stream_key(seed, StreamDomain::kParameter,
                                   static_cast<std::uint64_t>(it), t, p.name));
        b.set(p.name, admissible_at(p, rs.index(admissible_count(p))));
      }
      per_test.push_back(std::move(b));
    }
    plan.push_back(std::move(per_test));
  }
  return plan;
}

std::vector<ParameterBinding> plan_sweep(const TestSpec& test) {
  std::vector<std::vector<std::int64_t>> axes;
  for (const ParameterSpec& p : test.parameters) axes.push_back(admissible_values(p));

  std::vector<ParameterBinding> out;
  std::vector<std::size_t> odometer(axes.size(), 0);
  while (true) {
    ParameterBinding b;
    for (std::size_t i = 0; i < axes.size(); ++i) b.set(test.parameters[i].name, axes[i][odometer[i]]);
    out.push_back(std::move(b));

    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < axes[i].size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

std::vector<std::vector<ParameterBinding>> plan_sweep(const TestConfig& config) {
  std::vector<std::vector<ParameterBinding>> out;
  for (const TestSpec& t : config.tests) out.push_back(plan_sweep(t));
  return out;
}

std::vector<std::size_t> resolve_shape(const InputDatasetSpec& spec,
                                       const ParameterBinding& binding) {
  std::vector<std::size_t> shape;
  for (const Dimension& d : spec.dimensions) {
    if (const auto* n = std::get_if<std::int64_t>(&d)) {
      shape.push_back(static_cast<std::size_t>(*n));
      continue;
    }
    const auto& name = std::get<std::string>(d);
    auto v = binding.get(name);
    if (!v) throw Error(ErrorCode::kUnboundDimension, "'" + name + "' is not bound", spec.name);
    if (*v < 1) {
      throw Error(ErrorCode::kUnboundDimension,
                  "'" + name + "' = " + std::to_string(*v) + " is not a valid extent", spec.name);
    }
    shape.push_back(static_cast<std::size_t>(*v));
  }
  return shape;
}

std::vector<MaterializedDataset> generate_inputs(const TestSpec& test,
                                                 const ParameterBinding& binding,
                                                 std::uint64_t seed, std::uint64_t iteration,
                                                 std::uint64_t test_index) {
  std::vector<MaterializedDataset> out;
  for (const InputDatasetSpec& spec : test.inputDataset) {
    MaterializedDataset d;
    d.name = spec.name;
    d.dataType = spec.dataType;
    d.shape = resolve_shape(spec, binding);
    const std::size_t n = d.element_count();
    d.values.reserve(n);

    RandomStream rs(stream_key(seed, StreamDomain::kDataset, iteration, test_index, spec.name));
    if (is_integer(spec.dataType)) {
      const auto lo = static_cast<std::int64_t>(spec.lo);
      const auto hi = static_cast<std::int64_t>(spec.hi);
      for (std::size_t i = 0; i < n; ++i) d.values.push_back(static_cast<double>(rs.integer(lo, hi)));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        // Round to float, then nudge back inside the range if rounding
        // stepped over a non-representable bound.
        float f = static_cast<float>(rs.real(spec.lo, spec.hi));
        if (f > spec.hi) f = std::nextafter(f, -INFINITY);
        if (f < spec.lo) f = std::nextafter(f, INFINITY);
        d.values.push_back(static_cast<double>(f));
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace testit
