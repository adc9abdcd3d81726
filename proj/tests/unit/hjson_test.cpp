#include "testit/error.hpp"
#include "testit/hjson.hpp"

#include <gtest/gtest.h>

using testit::Error;
using testit::ErrorCode;
namespace hjson = testit::hjson;

TEST(Hjson, BracelessRootWithComments) {
  auto v = hjson::parse(R"(
# hash comment
// line comment
/* block
   comment */
target: {
  name: "pynq-z2"
  usbPort: 2
}
)");
  EXPECT_EQ(v["target"]["name"], "pynq-z2");
  EXPECT_EQ(v["target"]["usbPort"], 2);
}

TEST(Hjson, QuotelessValuesAndLiterals) {
  auto v = hjson::parse(R"({
  a: hello world
  b: 12
  c: -3.5
  d: true
  e: null
  f: 12 apples
})");
  EXPECT_EQ(v["a"], "hello world");
  EXPECT_EQ(v["b"], 12);
  EXPECT_DOUBLE_EQ(v["c"].get<double>(), -3.5);
  EXPECT_EQ(v["d"], true);
  EXPECT_TRUE(v["e"].is_null());
  EXPECT_EQ(v["f"], "12 apples");
}

TEST(Hjson, QuotedStringsKeepEscapes) {
  auto v = hjson::parse(R"x(re: "(\\d+):(\\d+)"
single: 'say "hi"'
)x");
  EXPECT_EQ(v["re"], "(\\d+):(\\d+)");
  EXPECT_EQ(v["single"], "say \"hi\"");
}

TEST(Hjson, MultilineString) {
  auto v = hjson::parse("text: '''\n  line one\n  line two\n  '''\n");
  EXPECT_EQ(v["text"], "line one\nline two");
}

TEST(Hjson, ArraysWithAndWithoutCommas) {
  auto v = hjson::parse("a: [1, 2, 3]\nb: [\n  4\n  5\n]\nc: [\"x\", \"y\",]\n");
  EXPECT_EQ(v["a"], (nlohmann::ordered_json{1, 2, 3}));
  EXPECT_EQ(v["b"], (nlohmann::ordered_json{4, 5}));
  EXPECT_EQ(v["c"], (nlohmann::ordered_json{"x", "y"}));
}

TEST(Hjson, KeepsInsertionOrder) {
  auto v = hjson::parse("z: 1\na: 2\nm: 3\n");
  std::vector<std::string> keys;
  for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"z", "a", "m"}));
}

TEST(Hjson, DuplicateKeyIsSyntaxError) {
  try {
    hjson::parse("a: 1\na: 2\n");
    FAIL() << "expected SyntaxError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntax);
  }
}

TEST(Hjson, ErrorsCarryLocation) {
  try {
    hjson::parse("a: {\n  b: [1, 2\n");
    FAIL() << "expected SyntaxError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntax);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
  EXPECT_THROW(hjson::parse("{ a: 1 } trailing"), Error);
  EXPECT_THROW(hjson::parse("a: \"unterminated\n"), Error);
}

TEST(Hjson, QuoteRoundTrips) {
  const std::string s = "tab\there \"quoted\" back\\slash";
  auto v = hjson::parse("k: " + hjson::quote(s) + "\n");
  EXPECT_EQ(v["k"], s);
}
