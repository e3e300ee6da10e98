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
//
// Fixed-width bundle encoding: seven 32-bit slot words (LCU, LSU, MXCU,
// RC0..RC3), little-endian. An all-NOP bundle encodes as 28 zero bytes.
// The field layout is documented in docs/isa.md and is stable; encodings
// are used as test vectors.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwr2a/isa.hpp"

namespace vwr2a {

struct DecodeError : std::runtime_error {
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kBundleBytes = 28;
using EncodedBundle = std::array<uint8_t, kBundleBytes>;

namespace enc {

inline void check(bool ok, const char* what) {
  if (!ok) throw DecodeError(what);
}

// field(v, pos, width): bits [pos, pos+width) of the slot word.
inline uint32_t get(uint32_t w, int pos, int width) {
  return (w >> pos) & ((1u << width) - 1u);
}

inline uint32_t lcu_word(const LcuInstr& i) {
  return static_cast<uint32_t>(i.op) | static_cast<uint32_t>(i.rd) << 4 |
         static_cast<uint32_t>(i.rhs_is_srf) << 6 | static_cast<uint32_t>(i.rhs) << 7 |
         static_cast<uint32_t>(i.target) << 10 | static_cast<uint32_t>(i.imm) << 16;
}

inline LcuInstr lcu_decode(uint32_t w) {
  LcuInstr i;
  uint32_t op = get(w, 0, 4);
  check(op < kLcuOpcodeCount, "reserved LCU opcode");
  i.op = static_cast<LcuOpcode>(op);
  i.rd = static_cast<uint8_t>(get(w, 4, 2));
  i.rhs_is_srf = get(w, 6, 1) != 0;
  i.rhs = static_cast<uint8_t>(get(w, 7, 3));
  i.target = static_cast<uint8_t>(get(w, 10, 6));
  i.imm = static_cast<uint16_t>(get(w, 16, 16));
  check(i.rhs_is_srf || i.rhs < 4, "LCU reg operand out of range");
  return i;
}

inline uint32_t lsu_word(const LsuInstr& i) {
  return static_cast<uint32_t>(i.op) | static_cast<uint32_t>(i.vwr) << 4 |
         static_cast<uint32_t>(i.indirect) << 6 | static_cast<uint32_t>(i.srf) << 7 |
         static_cast<uint32_t>(i.line) << 10 | static_cast<uint32_t>(i.word) << 16 |
         static_cast<uint32_t>(i.plus_k) << 23 |
         static_cast<uint32_t>(i.shuf.kind) << 24 |
         static_cast<uint32_t>(i.shuf.half) << 26 |
         static_cast<uint32_t>(i.shuf.parity) << 27;
}

inline LsuInstr lsu_decode(uint32_t w) {
  LsuInstr i;
  uint32_t op = get(w, 0, 4);
  check(op < kLsuOpcodeCount, "reserved LSU opcode");
  i.op = static_cast<LsuOpcode>(op);
  i.vwr = static_cast<uint8_t>(get(w, 4, 2));
  check(i.vwr < 3, "LSU VWR selector out of range");
  i.indirect = get(w, 6, 1) != 0;
  i.srf = static_cast<uint8_t>(get(w, 7, 3));
  i.line = static_cast<uint8_t>(get(w, 10, 6));
  i.word = static_cast<uint8_t>(get(w, 16, 7));
  i.plus_k = get(w, 23, 1) != 0;
  i.shuf.kind = static_cast<ShuffleKind>(get(w, 24, 2));
  i.shuf.half = static_cast<ShuffleHalf>(get(w, 26, 1));
  i.shuf.parity = static_cast<PruneParity>(get(w, 27, 1));
  check(get(w, 28, 4) == 0, "reserved LSU bits set");
  return i;
}

inline uint32_t mxcu_word(const MxcuInstr& i) {
  return static_cast<uint32_t>(i.op) | static_cast<uint32_t>(i.k_imm) << 3 |
         static_cast<uint32_t>(i.srf) << 8 | static_cast<uint32_t>(i.wb_none) << 11 |
         static_cast<uint32_t>(i.wb_dest) << 12 | static_cast<uint32_t>(i.wb_mask) << 14;
}

inline MxcuInstr mxcu_decode(uint32_t w) {
  MxcuInstr i;
  uint32_t op = get(w, 0, 3);
  check(op < kMxcuOpcodeCount, "reserved MXCU opcode");
  i.op = static_cast<MxcuOpcode>(op);
  i.k_imm = static_cast<uint8_t>(get(w, 3, 5));
  i.srf = static_cast<uint8_t>(get(w, 8, 3));
  i.wb_none = get(w, 11, 1) != 0;
  i.wb_dest = static_cast<uint8_t>(get(w, 12, 2));
  check(i.wb_dest < 3, "MXCU write dest out of range");
  i.wb_mask = static_cast<uint8_t>(get(w, 14, 4));
  check(get(w, 18, 14) == 0, "reserved MXCU bits set");
  return i;
}

inline uint32_t rc_word(const RcInstr& i) {
  return static_cast<uint32_t>(i.op) | static_cast<uint32_t>(i.a.type) << 4 |
         static_cast<uint32_t>(i.a.arg) << 7 | static_cast<uint32_t>(i.b.type) << 10 |
         static_cast<uint32_t>(i.b.arg) << 13 |
         (static_cast<uint32_t>(static_cast<uint8_t>(i.imm))) << 16 |
         static_cast<uint32_t>(i.dest) << 24;
}

inline RcInstr rc_decode(uint32_t w) {
  RcInstr i;
  uint32_t op = get(w, 0, 4);
  check(op < kAluOpCount, "reserved RC opcode");
  i.op = static_cast<AluOp>(op);
  uint32_t at = get(w, 4, 3), bt = get(w, 10, 3);
  check(at < kRcSrcTypeCount && bt < kRcSrcTypeCount, "reserved RC operand type");
  i.a.type = static_cast<RcSrcType>(at);
  i.a.arg = static_cast<uint8_t>(get(w, 7, 3));
  i.b.type = static_cast<RcSrcType>(bt);
  i.b.arg = static_cast<uint8_t>(get(w, 13, 3));
  i.imm = static_cast<int8_t>(static_cast<uint8_t>(get(w, 16, 8)));
  uint32_t dest = get(w, 24, 2);
  i.dest = static_cast<RcDest>(dest);
  check(get(w, 26, 6) == 0, "reserved RC bits set");
  auto check_operand = [](const RcOperand& o) {
    if (o.type == RcSrcType::kVwr) check(o.arg < 3, "RC VWR operand out of range");
    if (o.type == RcSrcType::kReg) check(o.arg < 2, "RC reg operand out of range");
  };
  check_operand(i.a);
  check_operand(i.b);
  return i;
}

inline void put_word(EncodedBundle& out, int slot, uint32_t w) {
  out[4 * slot + 0] = static_cast<uint8_t>(w);
  out[4 * slot + 1] = static_cast<uint8_t>(w >> 8);
  out[4 * slot + 2] = static_cast<uint8_t>(w >> 16);
  out[4 * slot + 3] = static_cast<uint8_t>(w >> 24);
}

inline uint32_t get_word(const EncodedBundle& in, int slot) {
  return static_cast<uint32_t>(in[4 * slot]) | static_cast<uint32_t>(in[4 * slot + 1]) << 8 |
         static_cast<uint32_t>(in[4 * slot + 2]) << 16 |
         static_cast<uint32_t>(in[4 * slot + 3]) << 24;
}

}  // namespace enc

inline EncodedBundle encode(const Bundle& b) {
  EncodedBundle out{};
  enc::put_word(out, 0, enc::lcu_word(b.lcu));
  enc::put_word(out, 1, enc::lsu_word(b.lsu));
  enc::put_word(out, 2, enc::mxcu_word(b.mxcu));
  for (int r = 0; r < kRcsPerColumn; ++r) enc::put_word(out, 3 + r, enc::rc_word(b.rc[r]));
  return out;
}

inline Bundle decode(const EncodedBundle& bits) {
  Bundle b;
  b.lcu = enc::lcu_decode(enc::get_word(bits, 0));
  b.lsu = enc::lsu_decode(enc::get_word(bits, 1));
  b.mxcu = enc::mxcu_decode(enc::get_word(bits, 2));
  for (int r = 0; r < kRcsPerColumn; ++r) b.rc[r] = enc::rc_decode(enc::get_word(bits, 3 + r));
  return b;
}

// ---------------------------------------------------------------------------
// Kernel image container format (the `asm` subcommand's binary output):
//   "VWRAIMG1" | name len + bytes | columns_used | srf_init[8] |
//   per column: bundle count + encoded bundles.
// ---------------------------------------------------------------------------

inline std::vector<uint8_t> encode_image(const KernelImage& img) {
  std::vector<uint8_t> out;
  const char magic[8] = {'V', 'W', 'R', 'A', 'I', 'M', 'G', '1'};
  out.insert(out.end(), magic, magic + 8);
  auto put_u32 = [&out](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  };
  put_u32(static_cast<uint32_t>(img.name.size()));
  out.insert(out.end(), img.name.begin(), img.name.end());
  out.push_back(static_cast<uint8_t>(img.columns_used));
  for (Word w : img.srf_init) put_u32(w);
  for (const auto& prog : img.col_programs) {
    put_u32(static_cast<uint32_t>(prog.size()));
    for (const Bundle& b : prog) {
      auto bits = encode(b);
      out.insert(out.end(), bits.begin(), bits.end());
    }
  }
  return out;
}

inline KernelImage decode_image(const std::vector<uint8_t>& buf) {
  size_t pos = 0;
  auto need = [&](size_t n) {
    if (pos + n > buf.size()) throw DecodeError("truncated kernel image");
  };
  need(8);
  if (std::string(buf.begin(), buf.begin() + 8) != "VWRAIMG1")
    throw DecodeError("bad kernel image magic");
  pos = 8;
  auto get_u32 = [&]() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  };
  KernelImage img;
  uint32_t name_len = get_u32();
  need(name_len);
  img.name.assign(buf.begin() + pos, buf.begin() + pos + name_len);
  pos += name_len;
  need(1);
  uint8_t cu = buf[pos++];
  if (cu > 2) throw DecodeError("bad columns_used");
  img.columns_used = static_cast<ColumnsUsed>(cu);
  for (Word& w : img.srf_init) w = get_u32();
  for (auto& prog : img.col_programs) {
    uint32_t n = get_u32();
    if (n > kProgramWords) throw DecodeError("program exceeds 64 bundles");
    prog.resize(n);
    for (Bundle& b : prog) {
      need(kBundleBytes);
      EncodedBundle bits{};
      std::copy(buf.begin() + pos, buf.begin() + pos + kBundleBytes, bits.begin());
      pos += kBundleBytes;
      b = decode(bits);
    }
  }
  return img;
}

}  // namespace vwr2a
