#include "testit/codegen.hpp"

#include "testit/error.hpp"
#include "testit/golden_bridge.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace testit {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kValuesPerLine = 16;

void claim(std::set<std::string>& names, const std::string& name, const std::string& what) {
  if (!names.insert(name).second) {
    throw Error(ErrorCode::kNameCollision, "C identifier '" + name + "' is emitted twice", what);
  }
}

void emit_declarations(std::ostream& h, const MaterializedDataset& d, const std::string& cname) {
  for (std::size_t i = 0; i < d.shape.size(); ++i) {
    h << "#define " << cname << "_DIM" << i << ' ' << d.shape[i] << '\n';
  }
  h << "extern const " << c_name(d.dataType) << ' ' << cname << '[' << d.values.size() << "];\n";
}

void emit_definition(std::ostream& c, const MaterializedDataset& d, const std::string& cname) {
  c << "const " << c_name(d.dataType) << ' ' << cname << '[' << d.values.size() << "] = {";
  if (d.values.size() <= kValuesPerLine) {
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      c << (i ? ", " : " ") << c_literal(d.dataType, d.values[i]);
    }
    c << " };\n";
    return;
  }
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (i % kValuesPerLine == 0) c << (i ? ",\n  " : "\n  ");
    else c << ", ";
    c << c_literal(d.dataType, d.values[i]);
  }
  c << "\n};\n";
}

MaterializedDataset dataset_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kProtocol, "dataset is not an object", "sidecar");
  MaterializedDataset d;
  d.name = j.at("name").get<std::string>();
  auto type = parse_data_type(j.at("dataType").get<std::string>());
  if (!type) throw Error(ErrorCode::kProtocol, "unknown dataType", "sidecar");
  d.dataType = *type;
  d.shape = j.at("shape").get<std::vector<std::size_t>>();
  for (const Json& v : j.at("values")) {
    if (v.is_number_unsigned()) d.values.push_back(static_cast<double>(v.get<std::uint64_t>()));
    else if (v.is_number_integer()) d.values.push_back(static_cast<double>(v.get<std::int64_t>()));
    else d.values.push_back(v.get<double>());
  }
  if (d.values.size() != shape_product(d.shape)) {
    throw Error(ErrorCode::kShape, "dataset '" + d.name + "' size mismatch", "sidecar");
  }
  return d;
}

}  // namespace

std::string c_literal(DataType type, double value) {
  if (is_integer(type)) return std::to_string(static_cast<std::int64_t>(value));
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<float>(value));
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s + "f";
}

std::string include_guard(const std::string& baseName) {
  std::string g;
  for (unsigned char ch : baseName) {
    g += std::isalnum(ch) ? static_cast<char>(std::toupper(ch)) : '_';
  }
  return g + "_H_";
}

GeneratedPair render_pair(const TestSpec& test, const ParameterBinding& binding,
                          const std::vector<MaterializedDataset>& inputs,
                          const std::vector<MaterializedDataset>& goldens) {
  GeneratedPair pair;
  pair.baseName = test.genFilesName;
  const std::string guard = include_guard(test.genFilesName);

  std::set<std::string> names;
  claim(names, guard, "include guard");
  for (const auto& [name, _] : binding.entries()) claim(names, name, "parameter " + name);

  // Bare dataset names must be unique too, so that `x` and `x_golden`
  // never both stand for one config entry.
  std::set<std::string> dataset_names;
  std::vector<std::pair<const MaterializedDataset*, std::string>> emitted;
  for (const auto& d : inputs) {
    claim(dataset_names, d.name, "dataset " + d.name);
    emitted.emplace_back(&d, d.name);
  }
  for (const auto& d : goldens) {
    claim(dataset_names, d.name, "dataset " + d.name);
    emitted.emplace_back(&d, d.name + std::string(kGoldenSuffix));
  }
  for (const auto& [d, cname] : emitted) {
    claim(names, cname, "dataset " + d->name);
    for (std::size_t i = 0; i < d->shape.size(); ++i) {
      claim(names, cname + "_DIM" + std::to_string(i), "dataset " + d->name);
    }
  }

  std::ostringstream h;
  h << "/* Generated by testit for " << test.appName << ". Do not edit. */\n";
  h << "#ifndef " << guard << "\n#define " << guard << "\n\n";
  h << "#include <stdint.h>\n";
  if (!binding.empty()) {
    h << "\n/* Parameters */\n";
    for (const auto& [name, value] : binding.entries()) h << "#define " << name << ' ' << value << '\n';
  }
  if (!inputs.empty()) {
    h << "\n/* Input datasets */\n";
    for (std::size_t i = 0; i < inputs.size(); ++i) emit_declarations(h, inputs[i], emitted[i].second);
  }
  if (!goldens.empty()) {
    h << "\n/* Golden datasets */\n";
    for (std::size_t i = 0; i < goldens.size(); ++i) {
      emit_declarations(h, goldens[i], emitted[inputs.size() + i].second);
    }
  }
  h << "\n#endif /* " << guard << " */\n";
  pair.headerText = h.str();

  std::ostringstream c;
  c << "/* Generated by testit for " << test.appName << ". Do not edit. */\n";
  c << "#include \"" << test.genFilesName << ".h\"\n";
  for (const auto& [d, cname] : emitted) {
    c << '\n';
    emit_definition(c, *d, cname);
  }
  pair.sourceText = c.str();

  Json params = Json::object();
  for (const auto& [k, v] : binding.entries()) params[k] = v;
  Json in = Json::array();
  for (const auto& d : inputs) in.push_back(dataset_to_json(d));
  Json gold = Json::array();
  for (const auto& d : goldens) {
    Json j = dataset_to_json(d);
    j["name"] = d.name + std::string(kGoldenSuffix);
    gold.push_back(std::move(j));
  }
  Json sidecar{{"parameters", std::move(params)}, {"inputs", std::move(in)}, {"goldens", std::move(gold)}};
  pair.sidecarText = sidecar.dump(2) + "\n";
  return pair;
}

std::vector<std::filesystem::path> write_pair(const GeneratedPair& pair,
                                              const std::filesystem::path& appDir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(appDir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + appDir.string());

  const std::pair<std::string, const std::string*> files[] = {
      {".h", &pair.headerText}, {".c", &pair.sourceText}, {".json", &pair.sidecarText}};
  std::vector<fs::path> written;
  for (const auto& [ext, text] : files) {
    fs::path path = appDir / (pair.baseName + ext);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << *text;
    out.close();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    written.push_back(std::move(path));
  }
  return written;
}

Sidecar parse_sidecar(std::string_view text) {
  try {
    Json j = Json::parse(text);
    Sidecar s;
    for (const auto& [k, v] : j.at("parameters").items()) s.parameters.set(k, v.get<std::int64_t>());
    for (const Json& d : j.at("inputs")) s.inputs.push_back(dataset_from_json(d));
    for (const Json& d : j.at("goldens")) s.goldens.push_back(dataset_from_json(d));
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed sidecar: ") + e.what(), "sidecar");
  }
}

}  // namespace testit
