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
// Cycle-stepped execution. Every slot of every active column evaluates
// against the pre-cycle state; all writes commit at the cycle boundary. A
// detected hazard faults the machine before anything commits, so the
// faulting cycle has no architectural effect.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vwr2a/assembler.hpp"
#include "vwr2a/isa.hpp"
#include "vwr2a/state.hpp"

namespace vwr2a {

struct StepEvents {
  uint64_t rc_ops_executed = 0;
  uint64_t vwr_reads = 0;
  uint64_t vwr_writes = 0;
  uint64_t spm_line_reads = 0;
  uint64_t spm_line_writes = 0;
  uint64_t srf_accesses = 0;
  uint64_t shuffles = 0;
  uint64_t branches_taken = 0;

  StepEvents& operator+=(const StepEvents& o) {
    rc_ops_executed += o.rc_ops_executed;
    vwr_reads += o.vwr_reads;
    vwr_writes += o.vwr_writes;
    spm_line_reads += o.spm_line_reads;
    spm_line_writes += o.spm_line_writes;
    srf_accesses += o.srf_accesses;
    shuffles += o.shuffles;
    branches_taken += o.branches_taken;
    return *this;
  }
};

enum class Termination : uint8_t { kExit = 0, kTimeout, kFault };

struct SlotHistogram {
  std::array<uint64_t, kLcuOpcodeCount> lcu{};
  std::array<uint64_t, kLsuOpcodeCount> lsu{};
  std::array<uint64_t, kMxcuOpcodeCount> mxcu{};
  std::array<uint64_t, kAluOpCount> rc{};  // busy RCs only; NOP bucket = moves
};

struct RunReport {
  std::string kernel_name;
  uint64_t total_cycles = 0;
  uint64_t dma_cycles = 0;
  StepEvents events;
  SlotHistogram slots;
  Termination termination = Termination::kExit;
  std::string fault_reason;
};

inline constexpr uint64_t kDefaultMaxCycles = 100000000ull;

// Host-side misuse of the machine (loading while busy, bad image) throws;
// hazards during execution fault the machine instead.
struct LoadFault : std::runtime_error {
  explicit LoadFault(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Kernel loading
// ---------------------------------------------------------------------------

inline void load_kernel(Machine& m, const KernelImage& img) {
  bool armed_unstarted = m.status == Status::kRunning && m.cycle == 0;
  if (m.status != Status::kIdle && m.status != Status::kDone && !armed_unstarted)
    throw LoadFault("busy");
  for (int c = 0; c < kColumns; ++c) {
    if (!img.uses_column(c)) continue;
    if (img.col_programs[c].size() > kProgramWords)
      throw LoadFault("program for column " + std::to_string(c) + " exceeds 64 bundles");
    if (img.col_programs[c].empty())
      throw LoadFault("empty program for column " + std::to_string(c));
    auto& col = m.columns[c];
    col.program = img.col_programs[c];
    col.pc = 0;
    col.active = true;
    col.wb_enabled = false;
    col.wb_mask = 0;
    col.wb_dest = VwrName::kA;
  }
  m.srf.entries = img.srf_init;
  m.lockstep = img.columns_used == ColumnsUsed::kBoth;
  m.status = Status::kRunning;
  m.fault_reason.clear();
}

// ---------------------------------------------------------------------------
// One cycle
// ---------------------------------------------------------------------------

namespace execdetail {

struct SrfTracker {
  // Broadcast rule: any number of same-entry reads in one cycle is a single
  // port access; anything else on top (another entry, or any write) is a
  // conflict on the single-ported SRF.
  std::optional<uint8_t> read_entry;
  bool multiple_reads_conflict = false;
  std::optional<uint8_t> write_entry;
  int accesses = 0;

  void read(uint8_t e) {
    if (write_entry) { multiple_reads_conflict = true; return; }
    if (!read_entry) {
      read_entry = e;
      accesses = 1;
    } else if (*read_entry != e) {
      multiple_reads_conflict = true;
    }
  }
  void write(uint8_t e) {
    if (read_entry || write_entry) { multiple_reads_conflict = true; return; }
    write_entry = e;
    accesses = 1;
  }
  bool conflict() const { return multiple_reads_conflict; }
};

struct VwrUse {
  bool lsu_side = false;  // line-wide access by LSU or shuffle unit
  bool rc_side = false;   // word accesses at the shared k
};

struct PendingColumn {
  uint32_t next_pc = 0;
  bool exit = false;
  bool branch_taken = false;
  std::array<Word, kLcuRegs> lcu_regs{};
  uint32_t next_k = 0;
  uint32_t k_pre = 0;            // k the bundle evaluated with
  VwrName wb_dest_pre = VwrName::kA;  // routing the write-backs land with
  bool wb_enabled = false;
  VwrName wb_dest = VwrName::kA;
  uint8_t wb_mask = 0;
  // RC results and destinations.
  std::array<std::optional<Word>, kRcsPerColumn> reg_write;  // value for reg file
  std::array<uint8_t, kRcsPerColumn> reg_idx{};
  std::array<std::optional<Word>, kRcsPerColumn> wb_write;
  std::array<std::optional<Word>, kRcsPerColumn> new_last;
  // LSU effects.
  std::optional<std::pair<int, VwrData>> vwr_line_write;    // vwr idx <- data
  std::optional<std::pair<int, VwrData>> spm_line_write;    // spm line <- data
  std::optional<std::pair<uint8_t, Word>> srf_write;        // entry <- value
  std::optional<std::pair<int, std::pair<int, Word>>> spm_word_write;  // line, word, value
};

}  // namespace execdetail

inline StepEvents step(Machine& m) {
  using namespace execdetail;
  StepEvents ev;
  if (m.status != Status::kRunning) return ev;

  SrfTracker srf;
  std::array<PendingColumn, kColumns> pend;
  std::array<std::array<VwrUse, kVwrsPerColumn>, kColumns> vwr_use{};
  std::string fault;

  auto fail = [&](const std::string& why) {
    if (fault.empty()) fault = why;
  };

  for (int c = 0; c < kColumns && fault.empty(); ++c) {
    auto& col = m.columns[c];
    auto& p = pend[c];
    if (!col.active) continue;
    if (col.pc >= col.program.size()) {
      fail("pc-overrun");
      break;
    }
    const Bundle& b = col.program[col.pc];
    const uint32_t k = col.mxcu_k;
    p.lcu_regs = col.lcu_regs;
    p.next_k = col.mxcu_k;
    p.k_pre = col.mxcu_k;
    p.wb_dest_pre = col.wb_dest;
    p.wb_enabled = col.wb_enabled;
    p.wb_dest = col.wb_dest;
    p.wb_mask = col.wb_mask;
    p.next_pc = col.pc + 1;

    // ---- LCU ----
    {
      const LcuInstr& i = b.lcu;
      auto rhs_value = [&]() -> Word {
        if (i.rhs_is_srf) {
          srf.read(i.rhs);
          return m.srf.entries[i.rhs];
        }
        return col.lcu_regs[i.rhs & 3];
      };
      switch (i.op) {
        case LcuOpcode::kNop:
          break;
        case LcuOpcode::kSeti:
          p.lcu_regs[i.rd] = as_word(static_cast<int32_t>(static_cast<int16_t>(i.imm)));
          break;
        case LcuOpcode::kAddi:
          p.lcu_regs[i.rd] =
              col.lcu_regs[i.rd] + as_word(static_cast<int32_t>(static_cast<int16_t>(i.imm)));
          break;
        case LcuOpcode::kSub:
          p.lcu_regs[i.rd] = col.lcu_regs[i.rd] - col.lcu_regs[i.rhs & 3];
          break;
        case LcuOpcode::kBlt:
        case LcuOpcode::kBge:
        case LcuOpcode::kBeq:
        case LcuOpcode::kBne: {
          int32_t lhs = as_signed(col.lcu_regs[i.rd]);
          int32_t rhs = as_signed(rhs_value());
          bool taken = false;
          if (i.op == LcuOpcode::kBlt) taken = lhs < rhs;
          if (i.op == LcuOpcode::kBge) taken = lhs >= rhs;
          if (i.op == LcuOpcode::kBeq) taken = lhs == rhs;
          if (i.op == LcuOpcode::kBne) taken = lhs != rhs;
          if (taken) {
            p.next_pc = i.target;
            p.branch_taken = true;
          }
          break;
        }
        case LcuOpcode::kJump:
          p.next_pc = i.target;
          p.branch_taken = true;
          break;
        case LcuOpcode::kExit:
          p.exit = true;
          break;
      }
    }

    // ---- MXCU ----
    {
      const MxcuInstr& i = b.mxcu;
      switch (i.op) {
        case MxcuOpcode::kNop:
          break;
        case MxcuOpcode::kSetk:
          p.next_k = i.k_imm & 31u;
          break;
        case MxcuOpcode::kInck:
          p.next_k = (col.mxcu_k + 1) & 31u;
          break;
        case MxcuOpcode::kDeck:
          p.next_k = (col.mxcu_k + 31) & 31u;
          break;
        case MxcuOpcode::kLoadkSrf:
          srf.read(i.srf);
          p.next_k = m.srf.entries[i.srf] & 31u;
          break;
        case MxcuOpcode::kSelect:
          p.wb_enabled = !i.wb_none;
          p.wb_dest = static_cast<VwrName>(i.wb_dest);
          p.wb_mask = i.wb_mask;
          break;
      }
    }

    // ---- RCs ----
    for (int r = 0; r < kRcsPerColumn; ++r) {
      const RcInstr& i = b.rc[r];
      if (!i.busy()) continue;
      ev.rc_ops_executed++;
      auto operand = [&](const RcOperand& o) -> Word {
        switch (o.type) {
          case RcSrcType::kVwr: {
            vwr_use[c][o.arg].rc_side = true;
            ev.vwr_reads++;
            return col.vwrs[o.arg].read_slice(r, static_cast<int>(k));
          }
          case RcSrcType::kSrf:
            srf.read(o.arg);
            return m.srf.entries[o.arg];
          case RcSrcType::kReg:
            return col.rcs[r].regfile[o.arg & 1];
          case RcSrcType::kNeighUp:
            return col.rcs[(r + 1) % kRcsPerColumn].last_result;
          case RcSrcType::kNeighDown:
            return col.rcs[(r + kRcsPerColumn - 1) % kRcsPerColumn].last_result;
          case RcSrcType::kImm:
            return as_word(static_cast<int32_t>(i.imm));
        }
        return 0;
      };
      Word a = operand(i.a);
      bool unary = i.op == AluOp::kNop || i.op == AluOp::kLnot;
      Word bb = unary ? 0 : operand(i.b);
      Word result = alu_exec(i.op, a, bb);
      p.new_last[r] = result;
      switch (i.dest) {
        case RcDest::kNone:
          break;
        case RcDest::kReg0:
        case RcDest::kReg1:
          p.reg_write[r] = result;
          p.reg_idx[r] = i.dest == RcDest::kReg0 ? 0 : 1;
          break;
        case RcDest::kWb:
          // A SELECT in the same bundle configures the *next* cycle; this
          // write-back uses the pre-cycle routing and mask.
          if (col.wb_enabled && (col.wb_mask >> r) & 1) {
            p.wb_write[r] = result;
            vwr_use[c][static_cast<int>(col.wb_dest)].rc_side = true;
          }
          break;
      }
    }

    // ---- LSU ----
    {
      const LsuInstr& i = b.lsu;
      auto line_number = [&](int* out) -> bool {
        if (i.indirect) {
          srf.read(i.srf);
          uint32_t v = m.srf.entries[i.srf];
          if (v >= kSpmLines) {
            fail("spm-range");
            return false;
          }
          *out = static_cast<int>(v);
          return true;
        }
        *out = i.line;
        return true;
      };
      switch (i.op) {
        case LsuOpcode::kNop:
          break;
        case LsuOpcode::kLoadVwr: {
          int line;
          if (!line_number(&line)) break;
          vwr_use[c][i.vwr].lsu_side = true;
          VwrData data;
          std::copy(m.spm.lines[line].begin(), m.spm.lines[line].end(), data.begin());
          p.vwr_line_write = {i.vwr, data};
          ev.spm_line_reads++;
          ev.vwr_writes++;
          break;
        }
        case LsuOpcode::kStoreVwr: {
          int line;
          if (!line_number(&line)) break;
          vwr_use[c][i.vwr].lsu_side = true;
          VwrData data = col.vwrs[i.vwr].words;
          p.spm_line_write = {line, data};
          ev.spm_line_writes++;
          ev.vwr_reads++;
          break;
        }
        case LsuOpcode::kLoadSrf: {
          int word = i.word + (i.plus_k ? static_cast<int>(k) : 0);
          if (word >= kVwrWords) {
            fail("spm-range");
            break;
          }
          srf.write(i.srf);
          p.srf_write = {i.srf, m.spm.lines[i.line][word]};
          ev.spm_line_reads++;
          break;
        }
        case LsuOpcode::kStoreSrf: {
          int word = i.word + (i.plus_k ? static_cast<int>(k) : 0);
          if (word >= kVwrWords) {
            fail("spm-range");
            break;
          }
          srf.read(i.srf);
          p.spm_word_write = {i.line, {word, m.srf.entries[i.srf]}};
          ev.spm_line_writes++;
          break;
        }
        case LsuOpcode::kShuffle: {
          vwr_use[c][0].lsu_side = true;
          vwr_use[c][1].lsu_side = true;
          vwr_use[c][2].lsu_side = true;
          VwrData out = shuffle(i.shuf, col.vwrs[0].words, col.vwrs[1].words);
          p.vwr_line_write = {2, out};
          ev.shuffles++;
          ev.vwr_reads += 2;
          ev.vwr_writes++;
          break;
        }
      }
    }

    // ---- Hazard checks for this column ----
    bool shuffle_writes_c = b.lsu.op == LsuOpcode::kShuffle;
    bool wb_lands_on_c = false;
    for (int r = 0; r < kRcsPerColumn; ++r)
      if (p.wb_write[r] && col.wb_dest == VwrName::kC) wb_lands_on_c = true;
    if (shuffle_writes_c && wb_lands_on_c) fail("wb-conflict");
    for (int v = 0; v < kVwrsPerColumn && fault.empty(); ++v)
      if (vwr_use[c][v].lsu_side && vwr_use[c][v].rc_side) fail("vwr-conflict");
  }

  if (fault.empty() && srf.conflict()) fail("srf-conflict");
  ev.srf_accesses += static_cast<uint64_t>(srf.accesses);

  // Lockstep columns must agree on control flow.
  if (fault.empty() && m.lockstep && m.columns[0].active && m.columns[1].active) {
    if (pend[0].exit != pend[1].exit)
      fail("lockstep-divergence");
    else if (!pend[0].exit && pend[0].next_pc != pend[1].next_pc)
      fail("lockstep-divergence");
  }

  // PC range check (EXIT does not advance).
  for (int c = 0; c < kColumns && fault.empty(); ++c) {
    if (!m.columns[c].active) continue;
    if (!pend[c].exit && pend[c].next_pc >= m.columns[c].program.size()) fail("pc-overrun");
  }

  if (!fault.empty()) {
    m.status = Status::kFault;
    m.fault_reason = fault;
    return StepEvents{};
  }

  // ---- Commit ----
  for (int c = 0; c < kColumns; ++c) {
    auto& col = m.columns[c];
    if (!col.active) continue;
    auto& p = pend[c];
    col.lcu_regs = p.lcu_regs;
    col.mxcu_k = p.next_k;
    col.wb_enabled = p.wb_enabled;
    col.wb_dest = p.wb_dest;
    col.wb_mask = p.wb_mask;
    for (int r = 0; r < kRcsPerColumn; ++r) {
      if (p.reg_write[r]) col.rcs[r].regfile[p.reg_idx[r]] = *p.reg_write[r];
      if (p.new_last[r]) col.rcs[r].last_result = *p.new_last[r];
    }
    if (p.vwr_line_write) col.vwrs[p.vwr_line_write->first].words = p.vwr_line_write->second;
    // Write-backs land at the pre-cycle k with the pre-cycle routing; a line
    // access to the same VWR in this cycle would already have faulted.
    for (int r = 0; r < kRcsPerColumn; ++r)
      if (p.wb_write[r]) {
        col.vwr(p.wb_dest_pre).write_slice(r, static_cast<int>(p.k_pre), *p.wb_write[r]);
        ev.vwr_writes++;
      }
    if (p.spm_line_write)
      std::copy(p.spm_line_write->second.begin(), p.spm_line_write->second.end(),
                m.spm.lines[p.spm_line_write->first].begin());
    if (p.spm_word_write)
      m.spm.lines[p.spm_word_write->first][p.spm_word_write->second.first] =
          p.spm_word_write->second.second;
    if (p.srf_write) m.srf.entries[p.srf_write->first] = p.srf_write->second;
    if (p.exit) {
      col.active = false;
    } else {
      col.pc = p.next_pc;
    }
    if (p.branch_taken) ev.branches_taken++;
  }

  bool any_active = false;
  for (const auto& col : m.columns) any_active |= col.active;
  if (!any_active) m.status = Status::kDone;
  m.cycle++;
  return ev;
}

// ---------------------------------------------------------------------------
// Trace stream: one line per cycle per active column, text format
//   cycle,col,pc,k,<LCU>|<LSU>|<MXCU>|<RC0>|<RC1>|<RC2>|<RC3>,taken|-
// ---------------------------------------------------------------------------

inline void trace_cycle(std::ostream& os, const Machine& m) {
  for (int c = 0; c < kColumns; ++c) {
    const auto& col = m.columns[c];
    if (!col.active || col.pc >= col.program.size()) continue;
    const Bundle& b = col.program[col.pc];
    os << m.cycle << "," << c << "," << col.pc << "," << col.mxcu_k << ","
       << asmdetail::print_lcu(b.lcu) << "|" << asmdetail::print_lsu(b.lsu) << "|"
       << asmdetail::print_mxcu(b.mxcu);
    for (int r = 0; r < kRcsPerColumn; ++r) os << "|" << asmdetail::print_rc(b.rc[r]);
    os << "\n";
  }
}

inline void tally(SlotHistogram& h, const Machine& m) {
  for (const auto& col : m.columns) {
    if (!col.active || col.pc >= col.program.size()) continue;
    const Bundle& b = col.program[col.pc];
    h.lcu[static_cast<int>(b.lcu.op)]++;
    h.lsu[static_cast<int>(b.lsu.op)]++;
    h.mxcu[static_cast<int>(b.mxcu.op)]++;
    for (const auto& rc : b.rc)
      if (rc.busy()) h.rc[static_cast<int>(rc.op)]++;
  }
}

inline RunReport run(Machine& m, uint64_t max_cycles = kDefaultMaxCycles,
                     std::ostream* trace = nullptr, const std::string& kernel_name = "") {
  RunReport rep;
  rep.kernel_name = kernel_name;
  uint64_t start = m.cycle;
  while (m.status == Status::kRunning) {
    if (m.cycle - start >= max_cycles) {
      rep.termination = Termination::kTimeout;
      rep.total_cycles = m.cycle - start;
      return rep;
    }
    if (trace) trace_cycle(*trace, m);
    tally(rep.slots, m);
    rep.events += step(m);
  }
  rep.total_cycles = m.cycle - start;
  if (m.status == Status::kFault) {
    rep.termination = Termination::kFault;
    rep.fault_reason = m.fault_reason;
  } else {
    rep.termination = Termination::kExit;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// DMA between system memory and the SPM. Transfers never overlap kernel
// execution; the cycle cost models a 32-bit bus with a fixed setup time.
// ---------------------------------------------------------------------------

enum class DmaDir : uint8_t { kSysToSpm = 0, kSpmToSys = 1 };

inline constexpr uint64_t kDmaSetupCycles = 16;
inline constexpr uint64_t kDmaBusBytes = 4;

inline uint64_t dma_transfer(Machine& m, DmaDir dir, uint64_t sys_addr, int spm_line,
                             int n_lines) {
  if (m.status == Status::kRunning) throw RangeFault("dma during kernel execution");
  if (n_lines < 0 || spm_line < 0 || spm_line + n_lines > kSpmLines)
    throw RangeFault("dma SPM range out of bounds");
  uint64_t bytes = static_cast<uint64_t>(n_lines) * kVwrWords * 4;
  if (sys_addr % 4 != 0) throw RangeFault("dma requires word-aligned sys address");
  if (sys_addr + bytes > m.sys_mem.size()) throw RangeFault("dma sys range out of bounds");
  for (int l = 0; l < n_lines; ++l) {
    for (int w = 0; w < kVwrWords; ++w) {
      size_t sys = sys_addr + (static_cast<size_t>(l) * kVwrWords + w) * 4;
      Word& spm_word = m.spm.lines[spm_line + l][w];
      if (dir == DmaDir::kSysToSpm) {
        Word v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<Word>(m.sys_mem[sys + i]) << (8 * i);
        spm_word = v;
      } else {
        for (int i = 0; i < 4; ++i)
          m.sys_mem[sys + i] = static_cast<uint8_t>(spm_word >> (8 * i));
      }
    }
  }
  return kDmaSetupCycles + (bytes + kDmaBusBytes - 1) / kDmaBusBytes;
}

}  // namespace vwr2a
