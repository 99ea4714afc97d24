#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/common/rng.hpp"
#include "auav/common/text.hpp"

using namespace auav;

TEST(Rng, SameSeedSameSequence) {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMomentsAreClose) {
  Rng r(5);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(2.0, 3.0);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 2.0, 0.03);
  EXPECT_NEAR(std::sqrt(var), 3.0, 0.03);
}

TEST(Rng, BelowIsUnbiasedOverSmallRange) {
  Rng r(11);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[r.below(7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 400);
}

TEST(RngStreams, NamedStreamsAreIndependentOfEachOther) {
  const RngStreams s(42);
  Rng a1 = s.stream("detector");
  Rng a2 = s.stream("detector");
  Rng b = s.stream("network");
  EXPECT_EQ(a1.next_u64(), a2.next_u64());
  EXPECT_NE(s.derive("detector"), s.derive("network"));
  (void)b;
}

TEST(Text, Utf8LengthCountsCodePoints) {
  EXPECT_EQ(text::utf8_length(""), 0u);
  EXPECT_EQ(text::utf8_length("abc"), 3u);
  EXPECT_EQ(text::utf8_length("\xC3\xA9t\xC3\xA9"), 3u);       // été
  EXPECT_EQ(text::utf8_length("\xF0\x9F\x9A\x81"), 1u);         // one 4-byte sequence
}

TEST(Text, TruncateNeverSplitsSequences) {
  const std::string s = "\xC3\xA9\xC3\xA9\xC3\xA9";
  EXPECT_EQ(text::truncate_utf8(s, 2), "\xC3\xA9\xC3\xA9");
  EXPECT_EQ(text::truncate_utf8(s, 10), s);
}

TEST(Text, TokenizeFoldsCase) {
  const auto t = text::tokenize("  Deploy  RESCUE kit ");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], "deploy");
  EXPECT_EQ(t[1], "rescue");
  EXPECT_EQ(t[2], "kit");
}

TEST(Text, FingerprintIsStableAndSensitive) {
  EXPECT_EQ(text::fingerprint("abc"), text::fingerprint("abc"));
  EXPECT_NE(text::fingerprint("abc"), text::fingerprint("abd"));
  EXPECT_EQ(text::fingerprint("abc").size(), 16u);
}

TEST(JsonIo, CanonicalDumpSortsKeys) {
  const json j = json::parse(R"({"b":1,"a":{"d":2,"c":3}})");
  EXPECT_EQ(canonical_dump(j), R"({"a":{"c":3,"d":2},"b":1})");
}

TEST(JsonIo, FieldErrorsCarryPath) {
  const json j = json::parse(R"({"x":{"y":"text"}})");
  try {
    field::get<int>(j["x"], "y", "x");
    FAIL() << "expected a type error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("x.y"), std::string::npos);
  }
  EXPECT_THROW(field::require(j, "missing", ""), Error);
}

TEST(JsonIo, JsonlRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "auav_jsonl_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.jsonl";
  {
    JsonlWriter w(path);
    w.write(json{{"a", 1}});
    w.write(json{{"b", "two"}});
  }
  const auto rows = read_jsonl(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["b"], "two");
  std::filesystem::remove_all(dir);
}

TEST(ErrorCode, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::tool_failure); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    EXPECT_EQ(error_code_from_string(to_string(code)), code);
  }
  EXPECT_THROW(error_code_from_string("nope"), Error);
}
