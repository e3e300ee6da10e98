// Copyright 2026 The VWR2A-Sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <numeric>
#include <random>

#include "vwr2a/shuffle.hpp"

using namespace vwr2a;

namespace {

VwrData ramp(Word start) {
  VwrData v;
  std::iota(v.begin(), v.end(), start);
  return v;
}

VwrData random_vwr(std::mt19937& rng) {
  VwrData v;
  std::uniform_int_distribution<uint32_t> dist;
  for (auto& w : v) w = dist(rng);
  return v;
}

// Brute-force 8-bit index reversal, independent of reverse8.
int rev8_oracle(int i) {
  int out = 0;
  for (int bit = 0; bit < 8; ++bit)
    if (i & (1 << bit)) out |= 1 << (7 - bit);
  return out;
}

}  // namespace

TEST_CASE("interleave lower on ramps") {
  auto out = shuffle({ShuffleKind::kInterleave, ShuffleHalf::kLower, {}}, ramp(0), ramp(128));
  // [0,128,1,129,...,63,191]
  for (int i = 0; i < 64; ++i) {
    REQUIRE(out[2 * i] == static_cast<Word>(i));
    REQUIRE(out[2 * i + 1] == static_cast<Word>(128 + i));
  }
}

TEST_CASE("bitrev against brute-force index oracle") {
  auto a = ramp(0), b = ramp(128);
  auto full = shuffle_full(ShuffleKind::kBitrev, a, b);
  for (int i = 0; i < 256; ++i) REQUIRE(full[i] == static_cast<Word>(rev8_oracle(i)));
  auto lower = shuffle({ShuffleKind::kBitrev, ShuffleHalf::kLower, {}}, a, b);
  CHECK(lower[1] == 128u);  // rev8(1) = 0b10000000
}

TEST_CASE("cshift moves the upper 32 words down") {
  auto lower = shuffle({ShuffleKind::kCshift, ShuffleHalf::kLower, {}}, ramp(0), ramp(128));
  // Modular index oracle: output[(i+32) mod 256] = concat[i].
  for (int i = 0; i < 32; ++i) REQUIRE(lower[i] == static_cast<Word>(224 + i));
  for (int i = 32; i < 128; ++i) REQUIRE(lower[i] == static_cast<Word>(i - 32));
}

TEST_CASE("prune keeps the selected parity of both inputs") {
  auto out = shuffle({ShuffleKind::kPrune, {}, PruneParity::kKeepEven}, ramp(0), ramp(128));
  for (int j = 0; j < 64; ++j) REQUIRE(out[j] == static_cast<Word>(2 * j));
  for (int j = 0; j < 64; ++j) REQUIRE(out[64 + j] == static_cast<Word>(128 + 2 * j));
  auto odd = shuffle({ShuffleKind::kPrune, {}, PruneParity::kKeepOdd}, ramp(0), ramp(128));
  for (int j = 0; j < 64; ++j) REQUIRE(odd[j] == static_cast<Word>(2 * j + 1));
}

TEST_CASE("interleave, bitrev and cshift are permutations of the concatenation") {
  for (ShuffleKind kind :
       {ShuffleKind::kInterleave, ShuffleKind::kBitrev, ShuffleKind::kCshift}) {
    auto full = shuffle_full(kind, ramp(0), ramp(128));
    std::array<Word, 256> sorted = full;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 256; ++i) REQUIRE(sorted[i] == static_cast<Word>(i));
  }
}

TEST_CASE("bitrev full map is an involution") {
  std::mt19937 rng(42);
  auto a = random_vwr(rng), b = random_vwr(rng);
  auto once = shuffle_full(ShuffleKind::kBitrev, a, b);
  VwrData lo, hi;
  std::copy(once.begin(), once.begin() + 128, lo.begin());
  std::copy(once.begin() + 128, once.end(), hi.begin());
  auto twice = shuffle_full(ShuffleKind::kBitrev, lo, hi);
  for (int i = 0; i < 128; ++i) {
    REQUIRE(twice[i] == a[i]);
    REQUIRE(twice[128 + i] == b[i]);
  }
}

TEST_CASE("cshift applied eight times is the identity") {
  std::mt19937 rng(43);
  auto a = random_vwr(rng), b = random_vwr(rng);
  VwrData x = a, y = b;
  for (int n = 0; n < 8; ++n) {
    auto full = shuffle_full(ShuffleKind::kCshift, x, y);
    std::copy(full.begin(), full.begin() + 128, x.begin());
    std::copy(full.begin() + 128, full.end(), y.begin());
  }
  REQUIRE(x == a);
  REQUIRE(y == b);
}

TEST_CASE("prune of the interleave halves reconstructs the inputs") {
  std::mt19937 rng(44);
  auto a = random_vwr(rng), b = random_vwr(rng);
  auto il_lo = shuffle({ShuffleKind::kInterleave, ShuffleHalf::kLower, {}}, a, b);
  auto il_hi = shuffle({ShuffleKind::kInterleave, ShuffleHalf::kUpper, {}}, a, b);
  auto even = shuffle({ShuffleKind::kPrune, {}, PruneParity::kKeepEven}, il_lo, il_hi);
  auto odd = shuffle({ShuffleKind::kPrune, {}, PruneParity::kKeepOdd}, il_lo, il_hi);
  REQUIRE(even == a);
  REQUIRE(odd == b);
}
