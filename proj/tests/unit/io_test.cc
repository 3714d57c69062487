// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsk/io.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "lsk/error.h"
#include "lsk/fraction.h"
#include "lsk/rng.h"

namespace lsk {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lsk_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(IoTest, Sha256KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(IoTest, Fnv1aKnownVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(IoTest, AtomicWriteThenRead) {
  const fs::path dir = TempDir("atomic");
  const fs::path file = dir / "sub" / "out.txt";
  WriteFileAtomic(file, "first");
  WriteFileAtomic(file, "second\n");
  EXPECT_EQ(ReadFile(file), "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++entries;
  EXPECT_EQ(entries, 1u);  // no temp file left behind
}

TEST(IoTest, ReadMissingFileIsNotFound) {
  try {
    ReadFile("/nonexistent/lsk/file");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFound);
  }
}

TEST(IoTest, ForEachLineSkipsBlankLinesAndNumbersFromOne) {
  const fs::path dir = TempDir("lines");
  WriteFileAtomic(dir / "f.jsonl", "a\n\n  \nb\r\nc");
  std::vector<std::pair<std::size_t, std::string>> seen;
  ForEachLine(dir / "f.jsonl",
              [&](std::size_t n, std::string_view line) { seen.emplace_back(n, std::string(line)); });
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0], (std::pair<std::size_t, std::string>{1, "a"}));
  EXPECT_EQ(seen[1].first, 4u);
  EXPECT_EQ(seen[1].second.substr(0, 1), "b");
  EXPECT_EQ(seen[2], (std::pair<std::size_t, std::string>{5, "c"}));
}

TEST(IoTest, InterpolatesEnvironment) {
  setenv("LSK_IO_TEST_VAR", "value", 1);
  unsetenv("LSK_IO_TEST_UNSET");
  EXPECT_EQ(InterpolateEnv("a ${LSK_IO_TEST_VAR} b ${LSK_IO_TEST_UNSET}c"), "a value b c");
  EXPECT_EQ(InterpolateEnv("no vars $ here"), "no vars $ here");
}

TEST(FractionTest, ReducesComparesAndFormats) {
  EXPECT_EQ(Fraction::Of(2, 4), (Fraction{1, 2}));
  EXPECT_EQ(Fraction::Of(3, 0), (Fraction{0, 0}));
  EXPECT_EQ(Fraction::Of(0, 0).value(), 0.0);
  EXPECT_TRUE(Fraction::Of(1, 3) < Fraction::Of(1, 2));
  EXPECT_FALSE(Fraction::Of(2, 4) < Fraction::Of(1, 2));
  EXPECT_EQ(Fraction::Of(2, 3).Format(), "0.6667");
  EXPECT_EQ(Fraction::Of(1, 1).Format(2), "1.00");
}

TEST(RngTest, DeterministicAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.UniformIndex(7);
    EXPECT_EQ(x, b.UniformIndex(7));
    EXPECT_LT(x, 7u);
    const double u = a.Uniform01();
    EXPECT_EQ(u, b.Uniform01());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngTest, NormalHasUnitMoments) {
  Rng rng(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.Normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  rng.Shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}

}  // namespace
}  // namespace lsk
