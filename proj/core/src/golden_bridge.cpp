#include "testit/golden_bridge.hpp"

#include "testit/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>

namespace testit {
namespace {

using Json = nlohmann::ordered_json;

Json number_json(DataType type, double v) {
  if (is_integer(type)) return Json(static_cast<std::int64_t>(v));
  return Json(v);
}

[[noreturn]] void protocol_error(const std::string& what) {
  throw Error(ErrorCode::kProtocol, what, "golden plugin");
}

bool mentions_unknown_function(std::string message) {
  std::transform(message.begin(), message.end(), message.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return message.find("unknown function") != std::string::npos;
}

}  // namespace

Json dataset_to_json(const MaterializedDataset& d) {
  Json values = Json::array();
  for (double v : d.values) values.push_back(number_json(d.dataType, v));
  return Json{{"name", d.name},
              {"dataType", std::string(c_name(d.dataType))},
              {"shape", d.shape},
              {"values", std::move(values)}};
}

std::string encode_request(const GoldenRequest& request) {
  Json params = Json::object();
  for (const auto& [k, v] : request.parameters.entries()) params[k] = v;
  Json inputs = Json::array();
  for (const auto& d : request.inputs) inputs.push_back(dataset_to_json(d));
  Json j{{"function", request.function}, {"parameters", std::move(params)},
         {"inputs", std::move(inputs)}};
  return j.dump();
}

GoldenResponse decode_response(std::string_view line, const std::vector<OutputDatasetSpec>& specs,
                               std::string_view function) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    protocol_error(std::string("malformed response: ") + e.what());
  }
  if (!j.is_object()) protocol_error("response is not a JSON object");

  if (auto err = j.find("error"); err != j.end()) {
    std::string message = err->is_string() ? err->get<std::string>() : err->dump();
    if (mentions_unknown_function(message)) {
      throw Error(ErrorCode::kUnknownFunction,
                  "plugin does not provide '" + std::string(function) + "': " + message,
                  "golden plugin");
    }
    protocol_error("plugin reported: " + message);
  }

  auto outputs = j.find("outputs");
  if (outputs == j.end() || !outputs->is_array()) protocol_error("response lacks an 'outputs' array");
  if (outputs->size() != specs.size()) {
    protocol_error("expected " + std::to_string(specs.size()) + " outputs, got " +
                   std::to_string(outputs->size()));
  }

  GoldenResponse resp;
  resp.outputs.resize(specs.size());
  std::vector<bool> filled(specs.size(), false);

  for (std::size_t i = 0; i < outputs->size(); ++i) {
    const Json& o = (*outputs)[i];
    if (!o.is_object()) protocol_error("outputs[" + std::to_string(i) + "] is not an object");

    std::size_t slot = i;
    if (auto n = o.find("name"); n != o.end()) {
      if (!n->is_string()) protocol_error("outputs[" + std::to_string(i) + "].name is not a string");
      auto it = std::find_if(specs.begin(), specs.end(),
                             [&](const OutputDatasetSpec& s) { return s.name == n->get<std::string>(); });
      if (it == specs.end()) protocol_error("unexpected output '" + n->get<std::string>() + "'");
      slot = static_cast<std::size_t>(it - specs.begin());
    }
    if (filled[slot]) protocol_error("output '" + specs[slot].name + "' returned twice");
    filled[slot] = true;

    const OutputDatasetSpec& spec = specs[slot];
    if (auto t = o.find("dataType"); t != o.end()) {
      if (!t->is_string() || parse_data_type(t->get<std::string>()) != spec.dataType) {
        protocol_error("output '" + spec.name + "' dataType does not match " +
                       std::string(c_name(spec.dataType)));
      }
    }

    MaterializedDataset d;
    d.name = spec.name;
    d.dataType = spec.dataType;
    auto shape = o.find("shape");
    auto values = o.find("values");
    if (values == o.end() || !values->is_array()) protocol_error("output '" + spec.name + "' lacks values");
    if (shape == o.end()) {
      d.shape = {values->size()};
    } else {
      if (!shape->is_array() || shape->empty()) protocol_error("output '" + spec.name + "' has a bad shape");
      for (const Json& e : *shape) {
        const bool positive = e.is_number_unsigned() ? e.get<std::uint64_t>() > 0
                                                     : e.is_number_integer() && e.get<std::int64_t>() > 0;
        if (!positive) protocol_error("output '" + spec.name + "' has a non-positive extent");
        d.shape.push_back(e.get<std::size_t>());
      }
    }
    if (values->size() != shape_product(d.shape)) {
      throw Error(ErrorCode::kShape,
                  "output '" + spec.name + "' declares " + std::to_string(shape_product(d.shape)) +
                      " elements but carries " + std::to_string(values->size()),
                  "golden plugin");
    }
    d.values.reserve(values->size());
    for (const Json& v : *values) {
      if (!v.is_number()) protocol_error("output '" + spec.name + "' has a non-numeric value");
      double x = v.get<double>();
      if (v.is_number_unsigned()) x = static_cast<double>(v.get<std::uint64_t>());
      else if (v.is_number_integer()) x = static_cast<double>(v.get<std::int64_t>());
      if (!representable(spec.dataType, x)) {
        protocol_error("output '" + spec.name + "' value " + v.dump() + " is not a valid " +
                       std::string(c_name(spec.dataType)));
      }
      if (spec.dataType == DataType::kFloat) x = static_cast<double>(static_cast<float>(x));
      d.values.push_back(x);
    }
    resp.outputs[slot] = std::move(d);
  }
  return resp;
}

PluginSession PluginSession::spawn(const std::vector<std::string>& command,
                                   const std::filesystem::path& cwd, Timeouts timeouts) {
  Subprocess::Options opts;
  opts.cwd = cwd;
  opts.pipe_stdin = true;
  opts.pipe_stdout = true;
  Subprocess proc = Subprocess::spawn(command, opts);

  std::string banner;
  auto status = proc.read_line(banner, Clock::now() + timeouts.handshake);
  if (status == LineReader::Status::kTimeout) {
    throw Error(ErrorCode::kHandshake, "no banner within " +
                                           std::to_string(timeouts.handshake.count()) + " ms",
                command.front());
  }
  if (status == LineReader::Status::kEof) {
    throw Error(ErrorCode::kHandshake, "plugin exited before the banner", command.front());
  }
  if (banner != kGoldenBanner) {
    throw Error(ErrorCode::kHandshake,
                "expected '" + std::string(kGoldenBanner) + "', got '" + banner + "'",
                command.front());
  }
  return PluginSession(std::move(proc), timeouts);
}

void PluginSession::crashed(const std::string& what) {
  proc_.kill();
  throw Error(ErrorCode::kPluginCrashed, what, "golden plugin");
}

GoldenResponse PluginSession::compute(const GoldenRequest& request,
                                      const std::vector<OutputDatasetSpec>& specs) {
  if (auto st = proc_.poll()) crashed("plugin exited with status " + std::to_string(*st));
  if (!proc_.write_all(encode_request(request) + "\n")) crashed("plugin closed its input");

  std::string line;
  switch (proc_.read_line(line, Clock::now() + timeouts_.request)) {
    case LineReader::Status::kLine: break;
    case LineReader::Status::kEof: {
      int st = proc_.wait();
      crashed("plugin exited with status " + std::to_string(st));
    }
    case LineReader::Status::kTimeout:
      crashed("no response within " + std::to_string(timeouts_.request.count()) + " ms");
  }
  ++served_;
  return decode_response(line, specs, request.function);
}

}  // namespace testit
