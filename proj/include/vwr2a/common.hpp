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
#include <stdexcept>
#include <string>

namespace vwr2a {

// Datapath word. All architectural arithmetic is 32-bit two's complement
// and wraps modulo 2^32; uint32_t carries the bit pattern.
using Word = uint32_t;

inline int32_t as_signed(Word w) { return static_cast<int32_t>(w); }
inline Word as_word(int32_t v) { return static_cast<Word>(v); }
inline Word as_word(int64_t v) { return static_cast<Word>(static_cast<uint64_t>(v)); }

// Geometry of one VWR2A instance.
inline constexpr int kVwrWords = 128;       // words per very-wide register
inline constexpr int kSliceWords = 32;      // words of a VWR visible to one RC
inline constexpr int kRcsPerColumn = 4;
inline constexpr int kColumns = 2;
inline constexpr int kSpmLines = 64;        // 64 x 128 x 4 B = 32 KiB
inline constexpr int kSrfEntries = 8;
inline constexpr int kProgramWords = 64;    // per-column program memory
inline constexpr int kLcuRegs = 4;
inline constexpr int kVwrsPerColumn = 3;    // A, B, C

inline constexpr int kDefaultSysMemBytes = 192 * 1024;

// Fixed-point multiply discards this many low product bits.
inline constexpr int kFxpShift = 16;

// Thrown on malformed requests against architectural state (bad indices,
// out-of-range addresses). Runtime hazards inside a kernel do not throw;
// they surface as Fault terminations in the executor.
struct IndexFault : std::runtime_error {
  explicit IndexFault(const std::string& what) : std::runtime_error(what) {}
};

struct RangeFault : std::runtime_error {
  explicit RangeFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vwr2a
