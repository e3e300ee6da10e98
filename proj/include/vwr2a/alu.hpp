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

#pragma once

#include <cstdint>

#include "vwr2a/common.hpp"

namespace vwr2a {

// RC ALU operations. Every op completes in one cycle.
enum class AluOp : uint8_t {
  kNop = 0,
  kSadd,
  kSsub,
  kSmul,     // signed multiply, low 32 bits of the product
  kFxpMul,   // signed multiply, bits [47:16] of the product
  kSll,
  kSrl,
  kSra,
  kLand,
  kLor,
  kLxor,
  kLnot,
};

inline constexpr int kAluOpCount = 12;

// Fixed-point multiply: the exact signed 64-bit product arithmetically
// shifted right by kFxpShift, truncated to 32 bits. With a unit value of
// 2^16 this keeps 16 fractional bits; truncation is toward negative
// infinity.
inline Word fxp_mul(Word a, Word b) {
  int64_t p = static_cast<int64_t>(as_signed(a)) * static_cast<int64_t>(as_signed(b));
  return as_word(static_cast<int64_t>(p >> kFxpShift));
}

// Shifts use only the low 5 bits of b; LNOT ignores b; NOP returns a.
inline Word alu_exec(AluOp op, Word a, Word b) {
  switch (op) {
    case AluOp::kNop:
      return a;
    case AluOp::kSadd:
      return a + b;
    case AluOp::kSsub:
      return a - b;
    case AluOp::kSmul:
      return as_word(static_cast<int64_t>(as_signed(a)) * static_cast<int64_t>(as_signed(b)));
    case AluOp::kFxpMul:
      return fxp_mul(a, b);
    case AluOp::kSll:
      return a << (b & 31u);
    case AluOp::kSrl:
      return a >> (b & 31u);
    case AluOp::kSra:
      return as_word(as_signed(a) >> (b & 31u));
    case AluOp::kLand:
      return a & b;
    case AluOp::kLor:
      return a | b;
    case AluOp::kLxor:
      return a ^ b;
    case AluOp::kLnot:
      return ~a;
  }
  return a;
}

}  // namespace vwr2a
