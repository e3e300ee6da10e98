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

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "vwr2a/alu.hpp"

using namespace vwr2a;

namespace {

// Independent reference for the fixed-point multiply: exact wide product,
// floor-divided by 2^16, reduced to 32 bits. Written against __int128 so it
// shares no code path with fxp_mul.
Word fxp_reference(Word a, Word b) {
  __int128 p = static_cast<__int128>(as_signed(a)) * static_cast<__int128>(as_signed(b));
  __int128 shifted = p >> 16;  // arithmetic: floor for negatives
  return static_cast<Word>(static_cast<uint64_t>(shifted));
}

std::vector<Word> boundary_values() {
  return {0u,          1u,          2u,          0x7FFFFFFFu, 0x80000000u, 0x80000001u,
          0xFFFFFFFFu, 0xFFFF0000u, 0x0000FFFFu, 0x00010000u, 0xFFFE0000u, 0x40000000u,
          0xC0000000u, 0x00008000u, 0x00018000u};
}

}  // namespace

TEST_CASE("alu wrapping add and sub") {
  CHECK(alu_exec(AluOp::kSadd, 0x7FFFFFFF, 1) == 0x80000000u);
  CHECK(alu_exec(AluOp::kSsub, 0, 1) == 0xFFFFFFFFu);
  CHECK(alu_exec(AluOp::kSadd, 0xFFFFFFFF, 1) == 0u);
}

TEST_CASE("smul keeps the low 32 bits") {
  // 2^16 * 2^16 = 2^32: low half is zero.
  CHECK(alu_exec(AluOp::kSmul, 0x00010000, 0x00010000) == 0u);
  CHECK(alu_exec(AluOp::kSmul, 7, 6) == 42u);
  CHECK(alu_exec(AluOp::kSmul, as_word(-3), 5) == as_word(-15));
}

TEST_CASE("shifts use low 5 bits of b, sra preserves sign") {
  CHECK(alu_exec(AluOp::kSra, 0x80000000, 1) == 0xC0000000u);
  CHECK(alu_exec(AluOp::kSll, 1, 33) == 2u);   // 33 & 31 == 1
  CHECK(alu_exec(AluOp::kSrl, 0x80000000, 31) == 1u);
  CHECK(alu_exec(AluOp::kSra, 0xFFFFFFFF, 31) == 0xFFFFFFFFu);
}

TEST_CASE("logic ops and nop") {
  CHECK(alu_exec(AluOp::kLand, 0xF0F0F0F0, 0xFF00FF00) == 0xF000F000u);
  CHECK(alu_exec(AluOp::kLor, 0xF0F0F0F0, 0x0F0F0F0F) == 0xFFFFFFFFu);
  CHECK(alu_exec(AluOp::kLxor, 0xAAAAAAAA, 0xFFFFFFFF) == 0x55555555u);
  CHECK(alu_exec(AluOp::kLnot, 0, 0xDEAD) == 0xFFFFFFFFu);  // b ignored
  CHECK(alu_exec(AluOp::kNop, 1234, 999) == 1234u);
}

TEST_CASE("fxp_mul unit cases") {
  // 1.0 * 1.0 = 1.0 at 16 fractional bits.
  CHECK(fxp_mul(1u << 16, 1u << 16) == (1u << 16));
  // 0.75 * 0.5 = 0.375.
  CHECK(fxp_mul(0x0000C000, 0x00008000) == 0x00006000u);
  // -1.0 * 1.5 = -1.5.
  CHECK(fxp_mul(as_word(-(1 << 16)), 3u << 15) == as_word(-(3 << 15)));
  // 64-bit oracle example: product 2^32 >> 16 = 2^16.
  CHECK(fxp_mul(0x00010000, 0x00010000) == 0x00010000u);
}

TEST_CASE("fxp_mul identity with 1.0 over boundaries and random sample") {
  for (Word v : boundary_values()) CHECK(fxp_mul(v, 1u << 16) == v);
  std::mt19937 rng(12345);
  std::uniform_int_distribution<uint32_t> dist;
  for (int i = 0; i < 1000000; ++i) {
    Word v = dist(rng);
    REQUIRE(fxp_mul(v, 1u << 16) == v);
  }
}

TEST_CASE("fxp_mul equals the wide-product reference") {
  auto bv = boundary_values();
  for (Word a : bv)
    for (Word b : bv) REQUIRE(fxp_mul(a, b) == fxp_reference(a, b));
  std::mt19937 rng(99);
  std::uniform_int_distribution<uint32_t> dist;
  for (int i = 0; i < 200000; ++i) {
    Word a = dist(rng), b = dist(rng);
    REQUIRE(fxp_mul(a, b) == fxp_reference(a, b));
  }
}

TEST_CASE("multiplies are commutative, add is associative mod 2^32") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<uint32_t> dist;
  for (int i = 0; i < 100000; ++i) {
    Word a = dist(rng), b = dist(rng), c = dist(rng);
    REQUIRE(fxp_mul(a, b) == fxp_mul(b, a));
    REQUIRE(alu_exec(AluOp::kSmul, a, b) == alu_exec(AluOp::kSmul, b, a));
    REQUIRE(alu_exec(AluOp::kSadd, alu_exec(AluOp::kSadd, a, b), c) ==
            alu_exec(AluOp::kSadd, a, alu_exec(AluOp::kSadd, b, c)));
  }
}
