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
#include <string>
#include <vector>

#include "vwr2a/alu.hpp"
#include "vwr2a/common.hpp"
#include "vwr2a/shuffle.hpp"

namespace vwr2a {

// ---------------------------------------------------------------------------
// LCU: loop control. Owns the column PC; branches resolve in one cycle with
// no delay slots.
// ---------------------------------------------------------------------------

enum class LcuOpcode : uint8_t {
  kNop = 0,
  kSeti,   // rd = sext(imm16)
  kAddi,   // rd += sext(imm16)
  kSub,    // rd -= rs
  kBlt,    // if (rd < rhs) pc = target   (signed)
  kBge,
  kBeq,
  kBne,
  kJump,   // pc = target
  kExit,   // deactivate column
};

inline constexpr int kLcuOpcodeCount = 10;

struct LcuInstr {
  LcuOpcode op = LcuOpcode::kNop;
  uint8_t rd = 0;          // 0..3
  bool rhs_is_srf = false; // branch rhs comes from the SRF (one SRF read)
  uint8_t rhs = 0;         // reg 0..3 or SRF entry 0..7
  uint8_t target = 0;      // 0..63
  uint16_t imm = 0;

  friend bool operator==(const LcuInstr&, const LcuInstr&) = default;
};

// ---------------------------------------------------------------------------
// LSU: SPM <-> VWR line transfers, SPM <-> SRF scalar transfers, shuffles.
// ---------------------------------------------------------------------------

enum class LsuOpcode : uint8_t {
  kNop = 0,
  kLoadVwr,   // VWR <- SPM line (line immediate or SRF-indirect)
  kStoreVwr,  // SPM line <- VWR
  kLoadSrf,   // SRF entry <- SPM word
  kStoreSrf,  // SPM word <- SRF entry
  kShuffle,   // C <- shuffle(A, B)
};

inline constexpr int kLsuOpcodeCount = 6;

struct LsuInstr {
  LsuOpcode op = LsuOpcode::kNop;
  uint8_t vwr = 0;        // 0..2 (A, B, C) for load/store VWR
  bool indirect = false;  // line number read from SRF entry `srf`
  uint8_t srf = 0;        // SRF entry for scalar ops or indirect addressing
  uint8_t line = 0;       // 0..63
  uint8_t word = 0;       // 0..127, scalar ops only
  bool plus_k = false;    // effective word = (word + k) mod 128
  ShuffleOp shuf;

  friend bool operator==(const LsuInstr&, const LsuInstr&) = default;
};

// ---------------------------------------------------------------------------
// MXCU: owns the shared intra-slice index k and the write-back routing.
// SELECT is sticky: the routing persists until the next SELECT.
// ---------------------------------------------------------------------------

enum class MxcuOpcode : uint8_t {
  kNop = 0,
  kSetk,     // k = imm5
  kInck,     // k = (k + 1) mod 32
  kDeck,     // k = (k - 1) mod 32
  kLoadkSrf, // k = SRF[srf] mod 32 (one SRF read)
  kSelect,   // configure write-back dest + mask
};

inline constexpr int kMxcuOpcodeCount = 6;

struct MxcuInstr {
  MxcuOpcode op = MxcuOpcode::kNop;
  uint8_t k_imm = 0;     // 0..31
  uint8_t srf = 0;       // 0..7
  bool wb_none = false;  // SELECT with no destination (write-back disabled)
  uint8_t wb_dest = 0;   // 0..2
  uint8_t wb_mask = 0;   // bit r enables RC r's write-back

  friend bool operator==(const MxcuInstr&, const MxcuInstr&) = default;
};

// ---------------------------------------------------------------------------
// RC: one ALU op per cycle. Operands come from the VWRs (own slice, shared
// k), the SRF, the two local registers, the neighbours' previous-cycle
// results, or a small immediate.
// ---------------------------------------------------------------------------

enum class RcSrcType : uint8_t {
  kVwr = 0,    // arg = VWR 0..2
  kSrf,        // arg = entry 0..7
  kReg,        // arg = 0..1
  kNeighUp,    // previous-cycle result of RC r+1 (wraps)
  kNeighDown,  // previous-cycle result of RC r-1 (wraps)
  kImm,        // sign-extended 8-bit immediate (shared imm field)
};

inline constexpr int kRcSrcTypeCount = 6;

struct RcOperand {
  RcSrcType type = RcSrcType::kVwr;
  uint8_t arg = 0;

  friend bool operator==(const RcOperand&, const RcOperand&) = default;
};

enum class RcDest : uint8_t {
  kNone = 0,  // result discarded (pure NOP when op is NOP)
  kReg0,
  kReg1,
  kWb,  // routed to the MXCU write-back port at the current k
};

struct RcInstr {
  AluOp op = AluOp::kNop;
  RcOperand a, b;
  int8_t imm = 0;
  RcDest dest = RcDest::kNone;

  // An RC is busy (latches operands, produces a result) unless it is a pure
  // NOP with no destination.
  bool busy() const { return op != AluOp::kNop || dest != RcDest::kNone; }

  friend bool operator==(const RcInstr&, const RcInstr&) = default;
};

// One PC step's instructions for every slot of a column.
struct Bundle {
  LcuInstr lcu;
  LsuInstr lsu;
  MxcuInstr mxcu;
  std::array<RcInstr, kRcsPerColumn> rc{};

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

enum class ColumnsUsed : uint8_t { kCol0 = 0, kCol1 = 1, kBoth = 2 };

struct KernelImage {
  std::array<std::vector<Bundle>, kColumns> col_programs;
  std::array<Word, kSrfEntries> srf_init{};
  ColumnsUsed columns_used = ColumnsUsed::kCol0;
  std::string name;

  bool uses_column(int c) const {
    if (columns_used == ColumnsUsed::kBoth) return true;
    return static_cast<int>(columns_used) == c;
  }

  friend bool operator==(const KernelImage&, const KernelImage&) = default;
};

}  // namespace vwr2a
