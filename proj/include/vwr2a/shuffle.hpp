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

#include <array>
#include <cstdint>

#include "vwr2a/common.hpp"

namespace vwr2a {

using VwrData = std::array<Word, kVwrWords>;

// The four hardcoded permutations of the shuffle unit. Inputs are always
// VWRs A and B viewed as a 256-word concatenation; the result is one VWR
// worth of data (a half of the full 256-word map, except PRUNE which
// already produces 128 words).
enum class ShuffleKind : uint8_t {
  kInterleave = 0,
  kPrune,
  kBitrev,
  kCshift,
};

enum class ShuffleHalf : uint8_t { kLower = 0, kUpper = 1 };
enum class PruneParity : uint8_t { kKeepEven = 0, kKeepOdd = 1 };

struct ShuffleOp {
  ShuffleKind kind = ShuffleKind::kInterleave;
  ShuffleHalf half = ShuffleHalf::kLower;   // ignored by kPrune
  PruneParity parity = PruneParity::kKeepEven;  // kPrune only

  friend bool operator==(const ShuffleOp&, const ShuffleOp&) = default;
};

inline uint8_t reverse8(uint8_t v) {
  v = static_cast<uint8_t>((v & 0xF0u) >> 4 | (v & 0x0Fu) << 4);
  v = static_cast<uint8_t>((v & 0xCCu) >> 2 | (v & 0x33u) << 2);
  v = static_cast<uint8_t>((v & 0xAAu) >> 1 | (v & 0x55u) << 1);
  return v;
}

// Full 256-word maps, exposed for the permutation property tests.
// concat[i] = a[i] for i < 128, b[i-128] otherwise.
inline std::array<Word, 2 * kVwrWords> shuffle_full(ShuffleKind kind, const VwrData& a,
                                                    const VwrData& b) {
  auto concat = [&](int i) -> Word { return i < kVwrWords ? a[i] : b[i - kVwrWords]; };
  std::array<Word, 2 * kVwrWords> f{};
  switch (kind) {
    case ShuffleKind::kInterleave:
      for (int i = 0; i < kVwrWords; ++i) {
        f[2 * i] = a[i];
        f[2 * i + 1] = b[i];
      }
      break;
    case ShuffleKind::kBitrev:
      for (int i = 0; i < 2 * kVwrWords; ++i) {
        f[i] = concat(reverse8(static_cast<uint8_t>(i)));
      }
      break;
    case ShuffleKind::kCshift:
      // Shift "up" by 32 words: the upper 32 wrap around to the bottom.
      for (int i = 0; i < 2 * kVwrWords; ++i) {
        f[(i + kSliceWords) % (2 * kVwrWords)] = concat(i);
      }
      break;
    case ShuffleKind::kPrune:
      break;  // prune has no 256-word form
  }
  return f;
}

inline VwrData shuffle(const ShuffleOp& op, const VwrData& a, const VwrData& b) {
  VwrData out{};
  if (op.kind == ShuffleKind::kPrune) {
    int p = op.parity == PruneParity::kKeepEven ? 0 : 1;
    for (int j = 0; j < kVwrWords / 2; ++j) {
      out[j] = a[2 * j + p];
      out[kVwrWords / 2 + j] = b[2 * j + p];
    }
    return out;
  }
  auto f = shuffle_full(op.kind, a, b);
  int base = op.half == ShuffleHalf::kLower ? 0 : kVwrWords;
  for (int i = 0; i < kVwrWords; ++i) out[i] = f[base + i];
  return out;
}

}  // namespace vwr2a
