#include "testit/config.hpp"

#include "testit/error.hpp"
#include "testit/hjson.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace testit {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchema, what, path);
}

const char* kind_of(const Json& j) {
  if (j.is_object()) return "object";
  if (j.is_array()) return "array";
  if (j.is_string()) return "string";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  return "null";
}

bool is_c_identifier(std::string_view s) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(s.begin(), s.end(), ident);
}

/// Walks one JSON object, tracking which keys were consumed so that any
/// leftover key can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, std::string("expected object, got ") + kind_of(j_));
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json* optional(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& required(std::string_view key) {
    const Json* v = optional(key);
    if (v == nullptr) schema_error(field(key), "missing required field");
    return *v;
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) schema_error(field(it.key()), "unknown field");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, std::string("expected string, got ") + kind_of(j));
  return j.get<std::string>();
}

std::string as_nonempty_string(const Json& j, const std::string& path) {
  std::string s = as_string(j, path);
  if (s.empty()) schema_error(path, "must not be empty");
  return s;
}

std::int64_t as_integer(const Json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > INT64_MAX) {
      schema_error(path, "integer out of range");
    }
    return j.get<std::int64_t>();
  }
  if (j.is_number_float()) {
    double d = j.get<double>();
    if (std::trunc(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  schema_error(path, std::string("expected integer, got ") + kind_of(j));
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, std::string("expected number, got ") + kind_of(j));
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, std::string("expected array, got ") + kind_of(j));
  return j;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

DataType as_data_type(const Json& j, const std::string& path) {
  std::string s = as_string(j, path);
  auto t = parse_data_type(s);
  if (!t) schema_error(path, "unsupported dataType '" + s + "'");
  return *t;
}

std::string as_identifier(const Json& j, const std::string& path) {
  std::string s = as_string(j, path);
  if (!is_c_identifier(s)) schema_error(path, "'" + s + "' is not a C identifier");
  return s;
}

TargetSpec parse_target(const Json& j) {
  ObjectReader r(j, "target");
  TargetSpec t;
  t.name = as_nonempty_string(r.required("name"), r.field("name"));

  std::string type = as_string(r.required("type"), r.field("type"));
  if (type == "sim") {
    t.type = TargetType::kSim;
  } else if (type == "fpga") {
    t.type = TargetType::kFpga;
  } else {
    schema_error(r.field("type"), "expected \"sim\" or \"fpga\", got \"" + type + "\"");
  }

  if (const Json* v = r.optional("usbPort")) {
    t.usbPort = as_integer(*v, r.field("usbPort"));
    if (*t.usbPort < 0) schema_error(r.field("usbPort"), "must be non-negative");
  }
  if (const Json* v = r.optional("portPath")) t.portPath = as_nonempty_string(*v, r.field("portPath"));
  if (const Json* v = r.optional("baudrate")) {
    t.baudrate = as_integer(*v, r.field("baudrate"));
    if (*t.baudrate <= 0) schema_error(r.field("baudrate"), "must be positive");
  }
  t.iterations = as_integer(r.required("iterations"), r.field("iterations"));
  if (t.iterations < 1) schema_error(r.field("iterations"), "must be at least 1");
  if (const Json* v = r.optional("outputFile")) t.outputFile = as_nonempty_string(*v, r.field("outputFile"));

  if (const Json* v = r.optional("goldenPlugin")) {
    const Json& arr = as_array(*v, r.field("goldenPlugin"));
    if (arr.empty()) schema_error(r.field("goldenPlugin"), "must name a command");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.goldenPlugin.push_back(as_nonempty_string(arr[i], index_path(r.field("goldenPlugin"), i)));
    }
  } else {
    t.goldenPlugin = {"python3", std::string(kGoldenTemplateName)};
  }
  if (const Json* v = r.optional("serialTimeout")) {
    t.serialTimeout = as_number(*v, r.field("serialTimeout"));
    if (!(t.serialTimeout > 0)) schema_error(r.field("serialTimeout"), "must be positive");
  }
  r.reject_unknown();

  if (t.type == TargetType::kFpga) {
    if (!t.baudrate) schema_error("target.baudrate", "required when type is \"fpga\"");
    if (!t.usbPort && !t.portPath) schema_error("target.usbPort", "fpga targets need usbPort or portPath");
  } else if (!t.outputFile) {
    schema_error("target.outputFile", "required when type is \"sim\"");
  }
  return t;
}

ReportSpec parse_report(const Json& j) {
  ObjectReader r(j, "report");
  ReportSpec rep;
  rep.dir = as_nonempty_string(r.required("dir"), r.field("dir"));
  r.reject_unknown();
  return rep;
}

ParameterSpec parse_parameter(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ParameterSpec p;
  p.name = as_identifier(r.required("name"), r.field("name"));
  const Json& value = r.required("value");
  if (value.is_array()) {
    if (value.size() != 2) schema_error(r.field("value"), "range must be [min, max]");
    IntRange range{as_integer(value[0], index_path(r.field("value"), 0)),
                   as_integer(value[1], index_path(r.field("value"), 1))};
    if (range.min > range.max) schema_error(r.field("value"), "min exceeds max");
    p.value = range;
  } else {
    p.value = as_integer(value, r.field("value"));
  }
  if (const Json* v = r.optional("step")) {
    p.step = as_integer(*v, r.field("step"));
    if (p.step < 1) schema_error(r.field("step"), "must be at least 1");
  }
  r.reject_unknown();
  return p;
}

InputDatasetSpec parse_input(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  InputDatasetSpec d;
  d.name = as_identifier(r.required("name"), r.field("name"));
  d.dataType = as_data_type(r.required("dataType"), r.field("dataType"));

  const std::string range_path = r.field("valueRange");
  const Json& range = as_array(r.required("valueRange"), range_path);
  if (range.size() != 2) schema_error(range_path, "must be [lo, hi]");
  d.lo = as_number(range[0], index_path(range_path, 0));
  d.hi = as_number(range[1], index_path(range_path, 1));
  if (d.lo > d.hi) schema_error(range_path, "lo exceeds hi");
  if (!representable(d.dataType, d.lo) || !representable(d.dataType, d.hi)) {
    schema_error(range_path, "bounds not representable in " + std::string(c_name(d.dataType)));
  }

  const std::string dims_path = r.field("dimensions");
  const Json& dims = as_array(r.required("dimensions"), dims_path);
  if (dims.empty()) schema_error(dims_path, "must not be empty");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string p = index_path(dims_path, i);
    if (dims[i].is_string()) {
      d.dimensions.emplace_back(as_identifier(dims[i], p));
    } else {
      std::int64_t n = as_integer(dims[i], p);
      if (n < 1) schema_error(p, "dimension must be at least 1");
      d.dimensions.emplace_back(n);
    }
  }
  r.reject_unknown();
  return d;
}

OutputDatasetSpec parse_output(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  OutputDatasetSpec d;
  d.name = as_identifier(r.required("name"), r.field("name"));
  d.dataType = as_data_type(r.required("dataType"), r.field("dataType"));
  r.reject_unknown();
  return d;
}

std::string as_pass_value(const Json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(as_integer(j, path));
  schema_error(path, std::string("expected string or integer, got ") + kind_of(j));
}

TestSpec parse_test(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  TestSpec t;
  t.appName = as_nonempty_string(r.required("appName"), r.field("appName"));
  t.dir = as_nonempty_string(r.required("dir"), r.field("dir"));
  t.genFilesName = as_nonempty_string(r.required("genFilesName"), r.field("genFilesName"));
  if (t.genFilesName.find('/') != std::string::npos) {
    schema_error(r.field("genFilesName"), "must be a bare file name");
  }

  const std::string fmt_path = r.field("outputFormat");
  t.outputFormat = as_nonempty_string(r.required("outputFormat"), fmt_path);

  const std::string tags_path = r.field("outputTags");
  const Json& tags = as_array(r.required("outputTags"), tags_path);
  std::set<std::string> unique_tags;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    std::string tag = as_nonempty_string(tags[i], index_path(tags_path, i));
    if (!unique_tags.insert(tag).second) {
      schema_error(index_path(tags_path, i), "duplicate tag '" + tag + "'");
    }
    t.outputTags.push_back(std::move(tag));
  }

  std::size_t groups = 0;
  try {
    groups = capture_group_count(t.outputFormat);
  } catch (const Error& e) {
    throw Error(ErrorCode::kRegex, e.message(), fmt_path);
  }
  if (groups != t.outputTags.size()) {
    throw Error(ErrorCode::kArity,
                std::to_string(groups) + " capture groups but " +
                    std::to_string(t.outputTags.size()) + " outputTags",
                fmt_path);
  }

  if (const Json* v = r.optional("parameters")) {
    const Json& arr = as_array(*v, r.field("parameters"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.parameters.push_back(parse_parameter(arr[i], index_path(r.field("parameters"), i)));
    }
  }
  if (const Json* v = r.optional("inputDataset")) {
    const Json& arr = as_array(*v, r.field("inputDataset"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.inputDataset.push_back(parse_input(arr[i], index_path(r.field("inputDataset"), i)));
    }
  }
  if (const Json* v = r.optional("outputDataset")) {
    const Json& arr = as_array(*v, r.field("outputDataset"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      t.outputDataset.push_back(parse_output(arr[i], index_path(r.field("outputDataset"), i)));
    }
  }

  const std::string golden_path = r.field("goldenResultFunction");
  const Json& golden = r.required("goldenResultFunction");
  if (golden.is_string()) {
    t.goldenResultFunction = as_nonempty_string(golden, golden_path);
  } else {
    ObjectReader g(golden, golden_path);
    t.goldenResultFunction = as_nonempty_string(g.required("name"), g.field("name"));
    g.reject_unknown();
  }

  if (const Json* v = r.optional("passTag")) t.passTag = as_nonempty_string(*v, r.field("passTag"));
  if (const Json* v = r.optional("passValue")) t.passValue = as_pass_value(*v, r.field("passValue"));
  r.reject_unknown();

  // Cross-field checks.
  std::set<std::string> params;
  for (std::size_t i = 0; i < t.parameters.size(); ++i) {
    if (!params.insert(t.parameters[i].name).second) {
      schema_error(index_path(r.field("parameters"), i) + ".name",
                   "duplicate parameter '" + t.parameters[i].name + "'");
    }
  }
  std::set<std::string> datasets;
  for (std::size_t i = 0; i < t.inputDataset.size(); ++i) {
    if (!datasets.insert(t.inputDataset[i].name).second) {
      schema_error(index_path(r.field("inputDataset"), i) + ".name",
                   "duplicate dataset '" + t.inputDataset[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < t.outputDataset.size(); ++i) {
    if (!datasets.insert(t.outputDataset[i].name).second) {
      schema_error(index_path(r.field("outputDataset"), i) + ".name",
                   "duplicate dataset '" + t.outputDataset[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < t.inputDataset.size(); ++i) {
    const auto& dims = t.inputDataset[i].dimensions;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const auto* sym = std::get_if<std::string>(&dims[k]);
      if (sym == nullptr) continue;
      const std::string p = index_path(index_path(r.field("inputDataset"), i) + ".dimensions", k);
      const ParameterSpec* param = t.find_parameter(*sym);
      if (param == nullptr) {
        throw Error(ErrorCode::kUnboundDimension, "'" + *sym + "' is not a parameter of this test", p);
      }
      std::int64_t smallest = param->is_range() ? std::get<IntRange>(param->value).min
                                                : std::get<std::int64_t>(param->value);
      if (smallest < 1) schema_error(p, "parameter '" + *sym + "' can be < 1");
    }
  }
  if (!unique_tags.count(t.passTag)) {
    schema_error(r.field("passTag"), "'" + t.passTag + "' is not one of outputTags");
  }
  return t;
}

std::string render_number(double v) {
  if (std::trunc(v) == v && std::abs(v) < 9.0e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  return Json(v).dump();
}

}  // namespace

std::string_view to_string(TargetType type) {
  return type == TargetType::kFpga ? "fpga" : "sim";
}

const ParameterSpec* TestSpec::find_parameter(std::string_view name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t capture_group_count(const std::string& pattern) {
  try {
    return std::regex(pattern, std::regex::ECMAScript).mark_count();
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kRegex, std::string("does not compile: ") + e.what());
  }
}

TestConfig parse_config(std::string_view text) {
  Json doc = hjson::parse(text);
  ObjectReader r(doc, "");
  TestConfig cfg;
  cfg.target = parse_target(r.required("target"));
  cfg.report = parse_report(r.required("report"));
  const Json& tests = as_array(r.required("test"), "test");
  if (tests.empty()) schema_error("test", "at least one test is required");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    cfg.tests.push_back(parse_test(tests[i], index_path("test", i)));
  }
  r.reject_unknown();
  return cfg;
}

TestConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const TestConfig& cfg) {
  std::ostringstream out;
  const auto q = [](std::string_view s) { return hjson::quote(s); };

  const TargetSpec& t = cfg.target;
  out << "target: {\n";
  out << "  name: " << q(t.name) << "\n";
  out << "  type: " << q(to_string(t.type)) << "\n";
  if (t.usbPort) out << "  usbPort: " << *t.usbPort << "\n";
  if (t.portPath) out << "  portPath: " << q(*t.portPath) << "\n";
  if (t.baudrate) out << "  baudrate: " << *t.baudrate << "\n";
  out << "  iterations: " << t.iterations << "\n";
  if (t.outputFile) out << "  outputFile: " << q(*t.outputFile) << "\n";
  out << "  goldenPlugin: [";
  for (std::size_t i = 0; i < t.goldenPlugin.size(); ++i) {
    out << (i ? ", " : "") << q(t.goldenPlugin[i]);
  }
  out << "]\n";
  out << "  serialTimeout: " << render_number(t.serialTimeout) << "\n";
  out << "}\n";
  out << "report: {\n  dir: " << q(cfg.report.dir) << "\n}\n";

  out << "test: [\n";
  for (const TestSpec& test : cfg.tests) {
    out << "  {\n";
    out << "    appName: " << q(test.appName) << "\n";
    out << "    dir: " << q(test.dir) << "\n";
    out << "    genFilesName: " << q(test.genFilesName) << "\n";
    out << "    outputFormat: " << q(test.outputFormat) << "\n";
    out << "    outputTags: [";
    for (std::size_t i = 0; i < test.outputTags.size(); ++i) {
      out << (i ? ", " : "") << q(test.outputTags[i]);
    }
    out << "]\n";
    out << "    passTag: " << q(test.passTag) << "\n";
    out << "    passValue: " << q(test.passValue) << "\n";
    out << "    parameters: [\n";
    for (const ParameterSpec& p : test.parameters) {
      out << "      { name: " << q(p.name) << ", value: ";
      if (p.is_range()) {
        const auto& range = std::get<IntRange>(p.value);
        out << "[" << range.min << ", " << range.max << "]";
      } else {
        out << std::get<std::int64_t>(p.value);
      }
      out << ", step: " << p.step << " }\n";
    }
    out << "    ]\n";
    out << "    inputDataset: [\n";
    for (const InputDatasetSpec& d : test.inputDataset) {
      out << "      { name: " << q(d.name) << ", dataType: " << q(c_name(d.dataType))
          << ", valueRange: [" << render_number(d.lo) << ", " << render_number(d.hi)
          << "], dimensions: [";
      for (std::size_t i = 0; i < d.dimensions.size(); ++i) {
        out << (i ? ", " : "");
        if (const auto* n = std::get_if<std::int64_t>(&d.dimensions[i])) {
          out << *n;
        } else {
          out << q(std::get<std::string>(d.dimensions[i]));
        }
      }
      out << "] }\n";
    }
    out << "    ]\n";
    out << "    outputDataset: [\n";
    for (const OutputDatasetSpec& d : test.outputDataset) {
      out << "      { name: " << q(d.name) << ", dataType: " << q(c_name(d.dataType)) << " }\n";
    }
    out << "    ]\n";
    out << "    goldenResultFunction: { name: " << q(test.goldenResultFunction) << " }\n";
    out << "  }\n";
  }
  out << "]\n";
  return out.str();
}

}  // namespace testit
