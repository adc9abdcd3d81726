#include "testit/config.hpp"
#include "testit/error.hpp"

#include <fstream>
#include <system_error>

namespace testit {

std::string config_template() {
  return R"hjson(# testit campaign description (Hjson: comments, unquoted keys and
# optional commas are allowed). Paths are relative to this directory,
# which must also hold the project's Makefile.
{
  target: {
    # Forwarded verbatim to the Makefile as tool=<name> (sim) or
    # target=<name> (fpga).
    name: "pynq-z2"
    # "sim" runs `make sim-run` and reads outputFile; "fpga" loads the
    # board and reads results from the serial port.
    type: "fpga"
    # Index into the sorted list of host serial devices (/dev/ttyUSB*,
    # /dev/ttyACM*). Use portPath instead to name the device directly;
    # "loopback://<fifo>" selects the in-host loopback transport.
    usbPort: 2
    # portPath: "/dev/ttyUSB0"
    baudrate: 9600
    # Random iterations per campaign (ignored by `testit run --sweep`).
    iterations: 10
    # Simulation result dump, truncated before every sim-run.
    outputFile: "path/to/sim/dump"
    # Golden-model plugin command, started once per campaign.
    goldenPlugin: ["python3", "testit_golden.py"]
    # Seconds to wait for each test's result line on the serial port.
    serialTimeout: 120
  }

  report: {
    # Receives testit_results.json.
    dir: "path/to/report/folder"
  }

  # Every entry runs once per iteration.
  test: [
    {
      appName: "application_name"
      # Application directory; the generated files are written here.
      dir: "path/to/app"
      # Produces test_data.h, test_data.c and the test_data.json sidecar.
      genFilesName: "test_data"
      # One capture group per entry of outputTags.
      outputFormat: "(\\d+):(\\d+):(\\d+)"
      outputTags: ["TestID", "Cycles", "Outcome"]
      # A result line passes when tag passTag equals passValue.
      passTag: "Outcome"
      passValue: "1"
      # Fixed values (value: 8) or inclusive ranges stepped by `step`.
      # Each parameter is emitted as a #define in the header.
      parameters: [
        {
          name: "SIZE"
          value: [4, 10]
          step: 2
        }
      ]
      # Randomized inputs. Dimensions may name parameters.
      inputDataset: [
        {
          name: "input_matrix"
          dataType: "uint8_t"
          valueRange: [0, 255]
          dimensions: ["SIZE", "SIZE"]
        }
      ]
      # Golden outputs, emitted as <name>_golden. softmax yields values
      # in (0, 1), hence float.
      outputDataset: [
        {
          name: "output_matrix"
          dataType: "float"
        }
      ]
      # Function looked up in the golden plugin.
      goldenResultFunction: {
        name: "softmax"
      }
    }
  ]
}
)hjson";
}

std::string golden_template() {
  return R"py(#!/usr/bin/env python3
"""Golden-model plugin for testit.

testit starts this script once per campaign and talks to it over
stdin/stdout, one JSON document per line:

  banner   : testit-golden-protocol 1
  request  : {"function": "softmax", "parameters": {"SIZE": 4},
              "inputs": [{"name": ..., "dataType": ..., "shape": [...],
                          "values": [...]}]}
  response : {"outputs": [{"name": ..., "dataType": ..., "shape": [...],
                           "values": [...]}]}
         or  {"error": "unknown function: <name>"}

Outputs are matched to the test's outputDataset entries by name, or by
position when "name" is omitted. "dataType" defaults to the configured
one. Values are flat, row-major lists.

Add a function below and reference it from goldenResultFunction.name.
Each function receives the parameter dict and the list of input datasets
and returns a list of output datasets.
"""

import json
import math
import sys


def identity(parameters, inputs):
    return [{"shape": d["shape"], "values": d["values"]} for d in inputs]


def softmax(parameters, inputs):
    values = inputs[0]["values"]
    peak = max(values) if values else 0.0
    exps = [math.exp(v - peak) for v in values]
    total = sum(exps)
    return [{"shape": inputs[0]["shape"], "values": [e / total for e in exps]}]


FUNCTIONS = {
    "identity": identity,
    "softmax": softmax,
}


def main():
    sys.stdout.write("testit-golden-protocol 1\n")
    sys.stdout.flush()
    for line in sys.stdin:
        if not line.strip():
            continue
        request = json.loads(line)
        name = request.get("function")
        fn = FUNCTIONS.get(name)
        if fn is None:
            reply = {"error": "unknown function: %s" % name}
        else:
            try:
                reply = {"outputs": fn(request.get("parameters", {}), request.get("inputs", []))}
            except Exception as exc:  # reported to the harness, not fatal
                reply = {"error": "%s: %s" % (type(exc).__name__, exc)}
        sys.stdout.write(json.dumps(reply) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
)py";
}

std::vector<std::filesystem::path> write_templates(const std::filesystem::path& dir,
                                                   bool overwrite) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }

  const std::pair<fs::path, std::string> files[] = {
      {dir / kConfigFileName, config_template()},
      {dir / kGoldenTemplateName, golden_template()},
  };

  std::vector<fs::path> written;
  for (const auto& [path, content] : files) {
    if (!overwrite && fs::exists(path, ec)) continue;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace testit
