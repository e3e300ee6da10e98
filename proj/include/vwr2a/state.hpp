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
#include <cstring>
#include <string>
#include <vector>

#include "vwr2a/common.hpp"
#include "vwr2a/encoding.hpp"
#include "vwr2a/shuffle.hpp"

namespace vwr2a {

enum class VwrName : uint8_t { kA = 0, kB = 1, kC = 2 };

inline char vwr_letter(VwrName v) { return "ABC"[static_cast<int>(v)]; }

struct Vwr {
  VwrData words{};

  Word read_slice(int rc, int k) const {
    if (rc < 0 || rc >= kRcsPerColumn) throw IndexFault("rc index out of range");
    if (k < 0 || k >= kSliceWords) throw IndexFault("slice index k out of range");
    return words[kSliceWords * rc + k];
  }
  void write_slice(int rc, int k, Word w) {
    if (rc < 0 || rc >= kRcsPerColumn) throw IndexFault("rc index out of range");
    if (k < 0 || k >= kSliceWords) throw IndexFault("slice index k out of range");
    words[kSliceWords * rc + k] = w;
  }
};

struct Spm {
  std::array<std::array<Word, kVwrWords>, kSpmLines> lines{};
};

struct Srf {
  std::array<Word, kSrfEntries> entries{};
};

struct RcState {
  std::array<Word, 2> regfile{};
  // ALU output of the previous cycle, visible to the neighbouring RCs.
  Word last_result = 0;
};

struct ColumnState {
  uint32_t pc = 0;
  std::array<Word, kLcuRegs> lcu_regs{};
  uint32_t mxcu_k = 0;  // shared intra-slice index, 0..31
  // Sticky write-back routing configured by MXCU SELECT.
  bool wb_enabled = false;
  VwrName wb_dest = VwrName::kA;
  uint8_t wb_mask = 0;
  std::array<RcState, kRcsPerColumn> rcs{};
  std::array<Vwr, kVwrsPerColumn> vwrs{};
  std::vector<Bundle> program;
  bool active = false;

  Vwr& vwr(VwrName v) { return vwrs[static_cast<int>(v)]; }
  const Vwr& vwr(VwrName v) const { return vwrs[static_cast<int>(v)]; }
};

enum class Status : uint8_t { kIdle = 0, kRunning, kDone, kFault };

struct Machine {
  std::array<ColumnState, kColumns> columns{};
  Spm spm;
  Srf srf;
  std::vector<uint8_t> sys_mem;
  uint64_t cycle = 0;
  Status status = Status::kIdle;
  std::string fault_reason;
  // True when both columns execute one cooperative kernel in PC lockstep.
  bool lockstep = false;

  Machine() : sys_mem(kDefaultSysMemBytes, 0) {}
  explicit Machine(size_t sys_mem_bytes) : sys_mem(sys_mem_bytes, 0) {}
};

inline void reset(Machine& m) {
  size_t sys_bytes = m.sys_mem.size();
  m = Machine(sys_bytes);
}

inline Word read_slice(const ColumnState& col, VwrName v, int rc, int k) {
  return col.vwr(v).read_slice(rc, k);
}

// ---------------------------------------------------------------------------
// Snapshot serialization: versioned, little-endian, bit-exact roundtrip.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

struct Reader {
  const std::vector<uint8_t>& buf;
  size_t pos = 0;

  uint32_t u32() {
    if (pos + 4 > buf.size()) throw RangeFault("snapshot truncated");
    uint32_t v = static_cast<uint32_t>(buf[pos]) | static_cast<uint32_t>(buf[pos + 1]) << 8 |
                 static_cast<uint32_t>(buf[pos + 2]) << 16 |
                 static_cast<uint32_t>(buf[pos + 3]) << 24;
    pos += 4;
    return v;
  }
  uint64_t u64() {
    uint64_t lo = u32();
    return lo | static_cast<uint64_t>(u32()) << 32;
  }
  uint8_t u8() {
    if (pos >= buf.size()) throw RangeFault("snapshot truncated");
    return buf[pos++];
  }
};

}  // namespace detail

inline constexpr uint32_t kSnapshotMagic = 0x41325756;  // "VWR2" little-endian-ish
inline constexpr uint32_t kSnapshotVersion = 1;

inline std::vector<uint8_t> snapshot(const Machine& m) {
  std::vector<uint8_t> out;
  detail::put_u32(out, kSnapshotMagic);
  detail::put_u32(out, kSnapshotVersion);
  detail::put_u64(out, m.cycle);
  out.push_back(static_cast<uint8_t>(m.status));
  out.push_back(m.lockstep ? 1 : 0);
  for (const auto& col : m.columns) {
    detail::put_u32(out, col.pc);
    for (Word w : col.lcu_regs) detail::put_u32(out, w);
    detail::put_u32(out, col.mxcu_k);
    out.push_back(col.wb_enabled ? 1 : 0);
    out.push_back(static_cast<uint8_t>(col.wb_dest));
    out.push_back(col.wb_mask);
    out.push_back(col.active ? 1 : 0);
    for (const auto& rc : col.rcs) {
      detail::put_u32(out, rc.regfile[0]);
      detail::put_u32(out, rc.regfile[1]);
      detail::put_u32(out, rc.last_result);
    }
    for (const auto& v : col.vwrs)
      for (Word w : v.words) detail::put_u32(out, w);
    detail::put_u32(out, static_cast<uint32_t>(col.program.size()));
    for (const Bundle& b : col.program) {
      auto bits = encode(b);
      out.insert(out.end(), bits.begin(), bits.end());
    }
  }
  for (const auto& line : m.spm.lines)
    for (Word w : line) detail::put_u32(out, w);
  for (Word w : m.srf.entries) detail::put_u32(out, w);
  detail::put_u64(out, m.sys_mem.size());
  out.insert(out.end(), m.sys_mem.begin(), m.sys_mem.end());
  return out;
}

inline Machine restore(const std::vector<uint8_t>& buf) {
  detail::Reader r{buf};
  if (r.u32() != kSnapshotMagic) throw RangeFault("bad snapshot magic");
  if (r.u32() != kSnapshotVersion) throw RangeFault("unsupported snapshot version");
  Machine m(0);
  m.cycle = r.u64();
  m.status = static_cast<Status>(r.u8());
  m.lockstep = r.u8() != 0;
  for (auto& col : m.columns) {
    col.pc = r.u32();
    for (Word& w : col.lcu_regs) w = r.u32();
    col.mxcu_k = r.u32();
    col.wb_enabled = r.u8() != 0;
    col.wb_dest = static_cast<VwrName>(r.u8());
    col.wb_mask = r.u8();
    col.active = r.u8() != 0;
    for (auto& rc : col.rcs) {
      rc.regfile[0] = r.u32();
      rc.regfile[1] = r.u32();
      rc.last_result = r.u32();
    }
    for (auto& v : col.vwrs)
      for (Word& w : v.words) w = r.u32();
    col.program.resize(r.u32());
    for (Bundle& b : col.program) {
      EncodedBundle bits{};
      for (auto& byte : bits) byte = r.u8();
      b = decode(bits);
    }
  }
  for (auto& line : m.spm.lines)
    for (Word& w : line) w = r.u32();
  for (Word& w : m.srf.entries) w = r.u32();
  m.sys_mem.resize(r.u64());
  for (auto& byte : m.sys_mem) byte = r.u8();
  return m;
}

// FNV-1a over the snapshot; used by the state-isolation tests.
inline uint64_t state_hash(const Machine& m) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint8_t b : snapshot(m)) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t column_hash(const ColumnState& col) {
  Machine scratch(0);
  scratch.columns[0] = col;
  return state_hash(scratch);
}

}  // namespace vwr2a
