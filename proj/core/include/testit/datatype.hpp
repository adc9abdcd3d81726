#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace testit {

/// Element types a dataset may carry in the generated C files.
enum class DataType { kUint8, kInt8, kUint16, kInt16, kUint32, kInt32, kFloat };

inline constexpr DataType kAllDataTypes[] = {
    DataType::kUint8,  DataType::kInt8,   DataType::kUint16, DataType::kInt16,
    DataType::kUint32, DataType::kInt32,  DataType::kFloat};

/// C spelling, e.g. "uint8_t" or "float".
std::string_view c_name(DataType type);
std::optional<DataType> parse_data_type(std::string_view name);

std::size_t byte_size(DataType type);
bool is_integer(DataType type);

/// Inclusive representable bounds. For float this is [-FLT_MAX, FLT_MAX].
double min_value(DataType type);
double max_value(DataType type);

/// True when `v` fits the type: finite, within bounds, and integral for
/// integer types.
bool representable(DataType type, double v);

}  // namespace testit
