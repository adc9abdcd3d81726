#include "testit/datatype.hpp"

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>

namespace testit {

std::string_view c_name(DataType type) {
  switch (type) {
    case DataType::kUint8: return "uint8_t";
    case DataType::kInt8: return "int8_t";
    case DataType::kUint16: return "uint16_t";
    case DataType::kInt16: return "int16_t";
    case DataType::kUint32: return "uint32_t";
    case DataType::kInt32: return "int32_t";
    case DataType::kFloat: return "float";
  }
  return "?";
}

std::optional<DataType> parse_data_type(std::string_view name) {
  for (DataType t : kAllDataTypes) {
    if (c_name(t) == name) return t;
  }
  return std::nullopt;
}

std::size_t byte_size(DataType type) {
  switch (type) {
    case DataType::kUint8:
    case DataType::kInt8: return 1;
    case DataType::kUint16:
    case DataType::kInt16: return 2;
    case DataType::kUint32:
    case DataType::kInt32:
    case DataType::kFloat: return 4;
  }
  return 0;
}

bool is_integer(DataType type) { return type != DataType::kFloat; }

double min_value(DataType type) {
  switch (type) {
    case DataType::kUint8:
    case DataType::kUint16:
    case DataType::kUint32: return 0.0;
    case DataType::kInt8: return std::numeric_limits<int8_t>::min();
    case DataType::kInt16: return std::numeric_limits<int16_t>::min();
    case DataType::kInt32: return std::numeric_limits<int32_t>::min();
    case DataType::kFloat: return -FLT_MAX;
  }
  return 0.0;
}

double max_value(DataType type) {
  switch (type) {
    case DataType::kUint8: return std::numeric_limits<uint8_t>::max();
    case DataType::kInt8: return std::numeric_limits<int8_t>::max();
    case DataType::kUint16: return std::numeric_limits<uint16_t>::max();
    case DataType::kInt16: return std::numeric_limits<int16_t>::max();
    case DataType::kUint32: return std::numeric_limits<uint32_t>::max();
    case DataType::kInt32: return std::numeric_limits<int32_t>::max();
    case DataType::kFloat: return FLT_MAX;
  }
  return 0.0;
}

bool representable(DataType type, double v) {
  if (!std::isfinite(v)) return false;
  if (v < min_value(type) || v > max_value(type)) return false;
  if (is_integer(type) && std::trunc(v) != v) return false;
  return true;
}

}  // namespace testit
