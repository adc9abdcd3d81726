// Reference golden-model plugin used by the test suites.
//
// Functions: identity (outputs mirror inputs) and softmax (over the first
// input). Fault hooks for protocol tests, all counted in requests (1-based):
//   MOCK_GOLDEN_BANNER=<text>   send this banner instead of the real one
//   MOCK_GOLDEN_KILL_AT=<n>     SIGKILL itself when request n arrives
//   MOCK_GOLDEN_HANG_AT=<n>     never answer request n

#include "testit/golden_bridge.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

namespace {

using Json = nlohmann::ordered_json;

long env_number(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::strtol(v, nullptr, 10) : 0;
}

Json identity(const Json& inputs) {
  Json outputs = Json::array();
  for (const Json& d : inputs) outputs.push_back(Json{{"shape", d.at("shape")}, {"values", d.at("values")}});
  return outputs;
}

Json softmax(const Json& inputs) {
  const Json& first = inputs.at(0);
  std::vector<double> v = first.at("values").get<std::vector<double>>();
  double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  double total = 0;
  for (double& x : v) total += (x = std::exp(x - peak));
  for (double& x : v) x /= total;
  return Json::array({Json{{"shape", first.at("shape")}, {"values", v}}});
}

}  // namespace

int main() {
  const char* banner = std::getenv("MOCK_GOLDEN_BANNER");
  std::cout << (banner ? banner : std::string(testit::kGoldenBanner)) << std::endl;

  const long kill_at = env_number("MOCK_GOLDEN_KILL_AT");
  const long hang_at = env_number("MOCK_GOLDEN_HANG_AT");
  long served = 0;

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    ++served;
    if (served == kill_at) std::raise(SIGKILL);
    if (served == hang_at) std::this_thread::sleep_for(std::chrono::hours(1));

    Json reply;
    try {
      Json req = Json::parse(line);
      const std::string fn = req.at("function").get<std::string>();
      if (fn == "identity") {
        reply = Json{{"outputs", identity(req.at("inputs"))}};
      } else if (fn == "softmax") {
        reply = Json{{"outputs", softmax(req.at("inputs"))}};
      } else {
        reply = Json{{"error", "unknown function: " + fn}};
      }
    } catch (const std::exception& e) {
      reply = Json{{"error", std::string("bad request: ") + e.what()}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
