#include "test_support.hpp"
#include "testit/codegen.hpp"
#include "testit/error.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sys/stat.h>
#include <unistd.h>

using namespace testit;
using testit::testing::read_file;
using testit::testing::TempDir;

namespace {

TestSpec spec() {
  TestSpec t;
  t.appName = "application_name";
  t.genFilesName = "test_data";
  t.parameters = {ParameterSpec{"SIZE", IntRange{2, 8}, 2}};
  t.inputDataset = {InputDatasetSpec{"input_matrix", DataType::kUint8, 0, 255, {"SIZE", "SIZE"}}};
  t.outputDataset = {{"output_matrix", DataType::kUint8}};
  return t;
}

MaterializedDataset ds(std::string name, DataType t, std::vector<std::size_t> shape,
                       std::vector<double> values) {
  return {std::move(name), t, std::move(shape), std::move(values)};
}

GeneratedPair small_pair() {
  return render_pair(spec(), {{"SIZE", 2}}, {ds("input_matrix", DataType::kUint8, {2, 2}, {1, 2, 3, 4})},
                     {ds("output_matrix", DataType::kUint8, {2, 2}, {1, 2, 3, 4})});
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

/// Values of `const <type> <name>[N] = { ... };` in a generated source.
std::vector<double> c_array(const std::string& source, const std::string& name, std::string* type,
                            std::size_t* n) {
  std::regex re("const (\\w+) " + name + "\\[(\\d+)\\] = \\{([^}]*)\\};");
  std::smatch m;
  if (!std::regex_search(source, m, re)) throw std::runtime_error("no array " + name);
  *type = m[1];
  *n = std::stoul(m[2]);
  std::vector<double> out;
  std::string body = m[3];
  std::regex num("-?[0-9][0-9.eE+-]*");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), num); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stod(it->str()));
  }
  return out;
}

}  // namespace

TEST(RenderPair, HeaderLayout) {
  GeneratedPair p = small_pair();
  EXPECT_EQ(p.baseName, "test_data");
  EXPECT_TRUE(contains(p.headerText, "#ifndef TEST_DATA_H_\n#define TEST_DATA_H_\n"));
  EXPECT_TRUE(contains(p.headerText, "#include <stdint.h>"));
  EXPECT_TRUE(contains(p.headerText, "#define SIZE 2\n"));
  EXPECT_TRUE(contains(p.headerText, "#define input_matrix_DIM0 2\n#define input_matrix_DIM1 2\n"));
  EXPECT_TRUE(contains(p.headerText, "extern const uint8_t input_matrix[4];"));
  EXPECT_TRUE(contains(p.headerText, "extern const uint8_t output_matrix_golden[4];"));
  EXPECT_TRUE(contains(p.headerText, "#endif"));
}

TEST(RenderPair, ParameterDefine) {
  auto p = render_pair(spec(), {{"SIZE", 4}},
                       {ds("input_matrix", DataType::kUint8, {4, 4}, std::vector<double>(16, 0))},
                       {ds("output_matrix", DataType::kUint8, {4, 4}, std::vector<double>(16, 0))});
  EXPECT_TRUE(contains(p.headerText, "#define SIZE 4\n"));
}

TEST(RenderPair, ShortArrayOnOneLine) {
  GeneratedPair p = small_pair();
  EXPECT_TRUE(contains(p.sourceText, "const uint8_t input_matrix[4] = { 1, 2, 3, 4 };"));
  EXPECT_TRUE(contains(p.sourceText, "const uint8_t output_matrix_golden[4] = { 1, 2, 3, 4 };"));
  EXPECT_TRUE(contains(p.sourceText, "#include \"test_data.h\""));
}

TEST(RenderPair, LongArraysWrapAtSixteen) {
  std::vector<double> v(40);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(i);
  auto p = render_pair(spec(), {{"SIZE", 2}}, {ds("input_matrix", DataType::kUint8, {40}, v)},
                       {ds("output_matrix", DataType::kUint8, {40}, v)});
  EXPECT_TRUE(contains(p.sourceText,
                       "const uint8_t input_matrix[40] = {\n"
                       "  0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,\n"
                       "  16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31,\n"
                       "  32, 33, 34, 35, 36, 37, 38, 39\n"
                       "};"));
  EXPECT_FALSE(contains(p.sourceText, ",\n};"));
}

TEST(RenderPair, NameCollisions) {
  TestSpec t = spec();
  t.inputDataset.push_back(t.inputDataset[0]);
  auto x = ds("input_matrix", DataType::kUint8, {1}, {1});
  try {
    render_pair(t, {{"SIZE", 1}}, {x, x}, {ds("output_matrix", DataType::kUint8, {1}, {1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNameCollision);
  }
  // A parameter named like a dataset, and a golden clashing with an input.
  EXPECT_THROW(render_pair(spec(), {{"input_matrix", 1}}, {x}, {ds("output_matrix", DataType::kUint8, {1}, {1})}),
               Error);
  EXPECT_THROW(render_pair(spec(), {{"SIZE", 1}}, {ds("y_golden", DataType::kUint8, {1}, {1})},
                           {ds("y", DataType::kUint8, {1}, {1})}),
               Error);
  // A DIM macro clashing with a parameter.
  EXPECT_THROW(render_pair(spec(), {{"input_matrix_DIM0", 1}}, {x},
                           {ds("output_matrix", DataType::kUint8, {1}, {1})}),
               Error);
}

TEST(RenderPair, Deterministic) {
  GeneratedPair a = small_pair(), b = small_pair();
  EXPECT_EQ(a.headerText, b.headerText);
  EXPECT_EQ(a.sourceText, b.sourceText);
  EXPECT_EQ(a.sidecarText, b.sidecarText);
}

TEST(CLiteral, Types) {
  EXPECT_EQ(c_literal(DataType::kUint8, 200), "200");
  EXPECT_EQ(c_literal(DataType::kInt16, -3), "-3");
  EXPECT_EQ(c_literal(DataType::kUint32, 4294967295.0), "4294967295");
  EXPECT_EQ(c_literal(DataType::kInt32, -2147483648.0), "-2147483648");
  EXPECT_EQ(c_literal(DataType::kFloat, 0.5), "0.5f");
  EXPECT_EQ(c_literal(DataType::kFloat, 3), "3.0f");
  EXPECT_EQ(c_literal(DataType::kFloat, double(0.1f)), "0.1f");
  EXPECT_EQ(c_literal(DataType::kFloat, -1e-10), "-1e-10f");
}

TEST(IncludeGuard, Mapping) {
  EXPECT_EQ(include_guard("test_data"), "TEST_DATA_H_");
  EXPECT_EQ(include_guard("foo-bar.data"), "FOO_BAR_DATA_H_");
}

TEST(Sidecar, MatchesCSource) {
  TestSpec t = spec();
  t.inputDataset.push_back({"weights", DataType::kFloat, -1, 1, {std::int64_t{3}}});
  t.outputDataset = {{"output_matrix", DataType::kInt16}};
  std::vector<double> m(36);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = double(i * 7 % 256);
  auto inputs = std::vector{ds("input_matrix", DataType::kUint8, {6, 6}, m),
                            ds("weights", DataType::kFloat, {3}, {double(0.1f), -1.0, double(1e-7f)})};
  auto goldens = std::vector{ds("output_matrix", DataType::kInt16, {2, 3}, {-32768, -1, 0, 1, 2, 32767})};
  auto p = render_pair(t, {{"SIZE", 6}}, inputs, goldens);

  Sidecar s = parse_sidecar(p.sidecarText);
  EXPECT_EQ(s.parameters, (ParameterBinding{{"SIZE", 6}}));
  ASSERT_EQ(s.inputs.size(), 2u);
  ASSERT_EQ(s.goldens.size(), 1u);
  EXPECT_EQ(s.inputs[0], inputs[0]);
  EXPECT_EQ(s.inputs[1], inputs[1]);
  EXPECT_EQ(s.goldens[0].name, "output_matrix_golden");
  EXPECT_EQ(s.goldens[0].values, goldens[0].values);

  std::vector<MaterializedDataset> all = s.inputs;
  all.insert(all.end(), s.goldens.begin(), s.goldens.end());
  for (const auto& d : all) {
    SCOPED_TRACE(d.name);
    std::string type;
    std::size_t n = 0;
    auto values = c_array(p.sourceText, d.name, &type, &n);
    EXPECT_EQ(type, c_name(d.dataType));
    EXPECT_EQ(n, d.element_count());
    ASSERT_EQ(values.size(), d.values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (d.dataType == DataType::kFloat) {
        EXPECT_EQ(static_cast<float>(values[i]), static_cast<float>(d.values[i]));
      } else {
        EXPECT_EQ(values[i], d.values[i]);
      }
    }
    for (std::size_t i = 0; i < d.shape.size(); ++i) {
      EXPECT_TRUE(contains(p.headerText, "#define " + d.name + "_DIM" + std::to_string(i) + " " +
                                             std::to_string(d.shape[i]) + "\n"));
    }
  }
}

TEST(Sidecar, RejectsMalformed) {
  EXPECT_THROW(parse_sidecar("{"), Error);
  EXPECT_THROW(parse_sidecar(R"({"parameters":{},"inputs":[{"name":"x"}],"goldens":[]})"), Error);
}

TEST(WritePair, Paths) {
  TempDir d;
  auto paths = write_pair(small_pair(), d.path());
  EXPECT_EQ(paths, (std::vector<std::filesystem::path>{d / "test_data.h", d / "test_data.c",
                                                       d / "test_data.json"}));
  EXPECT_EQ(read_file(d / "test_data.c"), small_pair().sourceText);
}

TEST(WritePair, IdempotentAndOverwrites) {
  TempDir d;
  write_pair(small_pair(), d.path());
  std::string first = read_file(d / "test_data.h") + read_file(d / "test_data.c");
  write_pair(small_pair(), d.path());
  EXPECT_EQ(read_file(d / "test_data.h") + read_file(d / "test_data.c"), first);

  auto other = render_pair(spec(), {{"SIZE", 1}}, {ds("input_matrix", DataType::kUint8, {1, 1}, {9})},
                           {ds("output_matrix", DataType::kUint8, {1, 1}, {9})});
  write_pair(other, d.path());
  EXPECT_EQ(read_file(d / "test_data.c"), other.sourceText);
}

TEST(WritePair, UnwritableDirIsIoError) {
  TempDir d;
  try {
    write_pair(small_pair(), d / "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  if (geteuid() != 0) {
    std::filesystem::create_directory(d / "ro");
    chmod((d / "ro").c_str(), 0500);
    EXPECT_THROW(write_pair(small_pair(), d / "ro"), Error);
  }
}
