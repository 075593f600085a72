// Copyright 2026 The SUSS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "suss/error.hpp"
#include "suss/image_io.hpp"
#include "test_support.hpp"

namespace suss {
namespace {

namespace fs = std::filesystem;

class ImageIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("suss_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }

  fs::path dir_;
};

TEST_F(ImageIoTest, HandBuiltPpm) {
  std::string bytes = "P6\n# comment\n3 3\n255\n";
  for (int i = 0; i < 27; ++i) bytes.push_back(static_cast<char>(i * 9));
  write_bytes(dir_ / "a.ppm", bytes);
  const ImageRgb img = load_image(dir_ / "a.ppm");
  ASSERT_EQ(img.width, 3);
  ASSERT_EQ(img.height, 3);
  for (int i = 0; i < 27; ++i) EXPECT_DOUBLE_EQ(img.data[i], (i * 9) / 255.0);
}

TEST_F(ImageIoTest, TruncatedPpmFails) {
  std::string bytes = "P6\n3 3\n255\n";
  bytes += std::string(20, '\x10');
  write_bytes(dir_ / "t.ppm", bytes);
  EXPECT_THROW(load_image(dir_ / "t.ppm"), Error);
}

TEST_F(ImageIoTest, SixteenBitPpmRejected) {
  write_bytes(dir_ / "w.ppm", "P6\n1 1\n65535\n\x01\x02\x03\x04\x05\x06");
  try {
    load_image(dir_ / "w.ppm");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bit depth"), std::string::npos);
  }
}

TEST_F(ImageIoTest, PngRoundTripIsBitIdentical) {
  std::mt19937_64 rng(1);
  const ImageRgb src = testing::random_image(rng, 13, 9);
  save_image(src, dir_ / "a.png");
  const ImageRgb a = load_image(dir_ / "a.png");
  save_image(a, dir_ / "b.png");
  const ImageRgb b = load_image(dir_ / "b.png");
  ASSERT_EQ(a.data.size(), b.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    EXPECT_EQ(a.data[i], b.data[i]);
    EXPECT_EQ(to_byte(a.data[i]), to_byte(src.data[i]));
  }
}

TEST_F(ImageIoTest, PpmRoundTrip) {
  std::mt19937_64 rng(2);
  const ImageRgb src = testing::random_image(rng, 5, 4);
  save_image(src, dir_ / "a.ppm");
  const ImageRgb a = load_image(dir_ / "a.ppm");
  save_image(a, dir_ / "b.ppm");
  EXPECT_EQ(load_image(dir_ / "b.ppm").data, a.data);
}

TEST_F(ImageIoTest, TruncatedPngFails) {
  std::mt19937_64 rng(3);
  save_image(testing::random_image(rng, 32, 32), dir_ / "full.png");
  std::ifstream in(dir_ / "full.png", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  write_bytes(dir_ / "cut.png", bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_image(dir_ / "cut.png"), Error);
}

TEST_F(ImageIoTest, MissingFileIsIoError) {
  try {
    load_image(dir_ / "nope.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(ToByte, RoundHalfUpAndClip) {
  EXPECT_EQ(to_byte(-0.3), 0);
  EXPECT_EQ(to_byte(1.7), 255);
  EXPECT_EQ(to_byte(0.5), 128);  // 127.5 rounds up
  EXPECT_EQ(to_byte(10.0 / 255.0), 10);
}

}  // namespace
}  // namespace suss
