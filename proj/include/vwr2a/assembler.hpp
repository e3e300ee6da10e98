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
// Textual assembly for kernel programs. One line per bundle:
//
//   [label:] LCU ; LSU ; MXCU ; RC0, RC1, RC2, RC3
//
// plus directives: "column 0|1|both", ".name text", ".srf idx value" and
// "#" comments. Branch targets are labels (@name) or absolute PC=n.
// The full grammar and mnemonics are documented in docs/isa.md.

#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vwr2a/encoding.hpp"
#include "vwr2a/isa.hpp"

namespace vwr2a {

enum class AsmErrorKind { kSyntax, kProgramTooLong, kUnknownLabel, kOperandRange };

struct AsmError : std::runtime_error {
  AsmErrorKind kind;
  int line;

  AsmError(AsmErrorKind k, int line_no, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + reason),
        kind(k),
        line(line_no) {}
};

namespace asmdetail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

// First whitespace-delimited token and the remainder.
inline std::pair<std::string, std::string> head_tail(const std::string& s) {
  size_t i = 0;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return {s.substr(0, i), trim(s.substr(i))};
}

struct LineCtx {
  int line_no;

  [[noreturn]] void syntax(const std::string& why) const {
    throw AsmError(AsmErrorKind::kSyntax, line_no, why);
  }
  [[noreturn]] void range(const std::string& why) const {
    throw AsmError(AsmErrorKind::kOperandRange, line_no, why);
  }

  int64_t number(const std::string& tok) const {
    if (tok.empty()) syntax("expected a number");
    try {
      size_t used = 0;
      int64_t v = std::stoll(tok, &used, 0);
      if (used != tok.size()) syntax("bad number '" + tok + "'");
      return v;
    } catch (const AsmError&) {
      throw;
    } catch (...) {
      syntax("bad number '" + tok + "'");
    }
  }

  int64_t number_in(const std::string& tok, int64_t lo, int64_t hi,
                    const std::string& what) const {
    int64_t v = number(tok);
    if (v < lo || v > hi) range(what + " out of range: " + tok);
    return v;
  }
};

inline uint8_t parse_vwr(const std::string& tok, const LineCtx& ctx) {
  std::string u = upper(tok);
  if (u == "A") return 0;
  if (u == "B") return 1;
  if (u == "C") return 2;
  ctx.syntax("expected VWR name A/B/C, got '" + tok + "'");
}

inline uint8_t parse_srf(const std::string& tok, const LineCtx& ctx) {
  std::string u = upper(tok);
  if (u.size() == 2 && u[0] == 'S' && u[1] >= '0' && u[1] <= '7')
    return static_cast<uint8_t>(u[1] - '0');
  ctx.range("expected SRF entry s0..s7, got '" + tok + "'");
}

// Branch target: @label or PC=n or a plain number.
struct Target {
  std::optional<std::string> label;
  uint8_t pc = 0;
};

inline Target parse_target(const std::string& tok, const LineCtx& ctx) {
  Target t;
  if (!tok.empty() && tok[0] == '@') {
    t.label = tok.substr(1);
    if (t.label->empty()) ctx.syntax("empty label reference");
    return t;
  }
  std::string u = upper(tok);
  std::string num = u;
  if (u.rfind("PC=", 0) == 0) num = tok.substr(3);
  t.pc = static_cast<uint8_t>(ctx.number_in(num, 0, kProgramWords - 1, "branch target"));
  return t;
}

struct PendingFixup {
  int column;
  size_t pc;
  std::string label;
  int line_no;
};

inline LcuInstr parse_lcu(const std::string& text, const LineCtx& ctx,
                          std::vector<PendingFixup>& fixups, int column, size_t pc) {
  LcuInstr i;
  auto [op, rest] = head_tail(text);
  std::string u = upper(op);
  auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
  auto reg = [&](const std::string& tok) -> uint8_t {
    std::string t = upper(tok);
    if (t.size() == 2 && t[0] == 'R' && t[1] >= '0' && t[1] <= '3')
      return static_cast<uint8_t>(t[1] - '0');
    ctx.range("expected LCU register r0..r3, got '" + tok + "'");
  };
  if (u == "NOP" || u.empty()) {
    if (!rest.empty()) ctx.syntax("NOP takes no operands");
    return i;
  }
  if (u == "SETI" || u == "ADDI") {
    if (args.size() != 2) ctx.syntax(u + " needs reg, imm");
    i.op = u == "SETI" ? LcuOpcode::kSeti : LcuOpcode::kAddi;
    i.rd = reg(args[0]);
    i.imm = static_cast<uint16_t>(
        static_cast<int16_t>(ctx.number_in(args[1], -32768, 32767, "immediate")));
    return i;
  }
  if (u == "SUB") {
    if (args.size() != 2) ctx.syntax("SUB needs rd, rs");
    i.op = LcuOpcode::kSub;
    i.rd = reg(args[0]);
    i.rhs = reg(args[1]);
    return i;
  }
  if (u == "BLT" || u == "BGE" || u == "BEQ" || u == "BNE") {
    if (args.size() != 3) ctx.syntax(u + " needs lhs, rhs, target");
    i.op = u == "BLT"   ? LcuOpcode::kBlt
           : u == "BGE" ? LcuOpcode::kBge
           : u == "BEQ" ? LcuOpcode::kBeq
                        : LcuOpcode::kBne;
    i.rd = reg(args[0]);
    std::string rt = upper(args[1]);
    if (rt.size() == 2 && rt[0] == 'S' && std::isdigit(static_cast<unsigned char>(rt[1]))) {
      i.rhs_is_srf = true;
      i.rhs = parse_srf(args[1], ctx);
    } else {
      i.rhs = reg(args[1]);
    }
    Target t = parse_target(args[2], ctx);
    if (t.label) {
      fixups.push_back({column, pc, *t.label, ctx.line_no});
    } else {
      i.target = t.pc;
    }
    return i;
  }
  if (u == "JUMP") {
    if (args.size() != 1) ctx.syntax("JUMP needs a target");
    i.op = LcuOpcode::kJump;
    Target t = parse_target(args[0], ctx);
    if (t.label) {
      fixups.push_back({column, pc, *t.label, ctx.line_no});
    } else {
      i.target = t.pc;
    }
    return i;
  }
  if (u == "EXIT") {
    if (!rest.empty()) ctx.syntax("EXIT takes no operands");
    i.op = LcuOpcode::kExit;
    return i;
  }
  ctx.syntax("unknown LCU mnemonic '" + op + "'");
}

// SPM word reference for scalar ops: Lnn:ww with optional +k.
inline void parse_spm_word(const std::string& tok, const LineCtx& ctx, LsuInstr& out) {
  std::string u = upper(tok);
  if (u.empty() || u[0] != 'L') ctx.syntax("expected Lline:word, got '" + tok + "'");
  size_t colon = u.find(':');
  if (colon == std::string::npos) ctx.syntax("expected ':' in SPM word reference");
  out.line = static_cast<uint8_t>(
      ctx.number_in(u.substr(1, colon - 1), 0, kSpmLines - 1, "SPM line"));
  std::string wpart = u.substr(colon + 1);
  out.plus_k = false;
  if (wpart.size() > 2 && wpart.substr(wpart.size() - 2) == "+K") {
    out.plus_k = true;
    wpart = wpart.substr(0, wpart.size() - 2);
  }
  out.word = static_cast<uint8_t>(ctx.number_in(wpart, 0, kVwrWords - 1, "SPM word"));
}

inline LsuInstr parse_lsu(const std::string& text, const LineCtx& ctx) {
  LsuInstr i;
  auto [op, rest] = head_tail(text);
  std::string u = upper(op);
  auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
  if (u == "NOP" || u.empty()) {
    if (!rest.empty()) ctx.syntax("NOP takes no operands");
    return i;
  }
  if (u == "LOAD" || u == "STORE") {
    if (args.size() != 2) ctx.syntax(u + " needs vwr, line");
    i.op = u == "LOAD" ? LsuOpcode::kLoadVwr : LsuOpcode::kStoreVwr;
    i.vwr = parse_vwr(args[0], ctx);
    std::string loc = args[1];
    if (!loc.empty() && loc.front() == '[' && loc.back() == ']') {
      i.indirect = true;
      i.srf = parse_srf(trim(loc.substr(1, loc.size() - 2)), ctx);
    } else {
      std::string lu = upper(loc);
      if (lu.empty() || lu[0] != 'L') ctx.syntax("expected Ln or [sX], got '" + loc + "'");
      i.line = static_cast<uint8_t>(ctx.number_in(lu.substr(1), 0, kSpmLines - 1, "SPM line"));
    }
    return i;
  }
  if (u == "LDSRF" || u == "STSRF") {
    if (args.size() != 2) ctx.syntax(u + " needs sX, Lline:word");
    i.op = u == "LDSRF" ? LsuOpcode::kLoadSrf : LsuOpcode::kStoreSrf;
    i.srf = parse_srf(args[0], ctx);
    parse_spm_word(args[1], ctx, i);
    return i;
  }
  if (u == "SHUF") {
    if (args.size() != 1) ctx.syntax("SHUF needs one mode argument");
    std::string m = upper(args[0]);
    i.op = LsuOpcode::kShuffle;
    if (m == "ILV.L") i.shuf = {ShuffleKind::kInterleave, ShuffleHalf::kLower, {}};
    else if (m == "ILV.U") i.shuf = {ShuffleKind::kInterleave, ShuffleHalf::kUpper, {}};
    else if (m == "PRN.E") i.shuf = {ShuffleKind::kPrune, {}, PruneParity::kKeepEven};
    else if (m == "PRN.O") i.shuf = {ShuffleKind::kPrune, {}, PruneParity::kKeepOdd};
    else if (m == "REV.L") i.shuf = {ShuffleKind::kBitrev, ShuffleHalf::kLower, {}};
    else if (m == "REV.U") i.shuf = {ShuffleKind::kBitrev, ShuffleHalf::kUpper, {}};
    else if (m == "ROT.L") i.shuf = {ShuffleKind::kCshift, ShuffleHalf::kLower, {}};
    else if (m == "ROT.U") i.shuf = {ShuffleKind::kCshift, ShuffleHalf::kUpper, {}};
    else ctx.syntax("unknown shuffle mode '" + args[0] + "'");
    return i;
  }
  ctx.syntax("unknown LSU mnemonic '" + op + "'");
}

inline MxcuInstr parse_mxcu(const std::string& text, const LineCtx& ctx) {
  MxcuInstr i;
  auto [op, rest] = head_tail(text);
  std::string u = upper(op);
  auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
  if (u == "NOP" || u.empty()) {
    if (!rest.empty()) ctx.syntax("NOP takes no operands");
    return i;
  }
  if (u == "SETK") {
    if (args.size() != 1) ctx.syntax("SETK needs an immediate");
    i.op = MxcuOpcode::kSetk;
    i.k_imm = static_cast<uint8_t>(ctx.number_in(args[0], 0, kSliceWords - 1, "k"));
    return i;
  }
  if (u == "INCK") { i.op = MxcuOpcode::kInck; return i; }
  if (u == "DECK") { i.op = MxcuOpcode::kDeck; return i; }
  if (u == "KSRF") {
    if (args.size() != 1) ctx.syntax("KSRF needs an SRF entry");
    i.op = MxcuOpcode::kLoadkSrf;
    i.srf = parse_srf(args[0], ctx);
    return i;
  }
  if (u == "SEL") {
    if (args.size() != 2) ctx.syntax("SEL needs dest, mask");
    i.op = MxcuOpcode::kSelect;
    std::string d = upper(args[0]);
    if (d == "-") {
      i.wb_none = true;
    } else {
      i.wb_dest = parse_vwr(args[0], ctx);
    }
    std::string m = args[1];
    if (m.size() != 4 || m.find_first_not_of("01") != std::string::npos)
      ctx.syntax("SEL mask must be 4 bits of 0/1");
    // Mask text is RC3..RC0 left to right.
    for (int bit = 0; bit < 4; ++bit)
      if (m[3 - bit] == '1') i.wb_mask |= static_cast<uint8_t>(1u << bit);
    return i;
  }
  ctx.syntax("unknown MXCU mnemonic '" + op + "'");
}

inline RcOperand parse_rc_operand(const std::string& tok, const LineCtx& ctx, int8_t& imm,
                                  bool& imm_used) {
  RcOperand o;
  std::string u = upper(tok);
  if (u == "A" || u == "B" || u == "C") {
    o.type = RcSrcType::kVwr;
    o.arg = parse_vwr(tok, ctx);
    return o;
  }
  if (u.size() == 2 && u[0] == 'S' && std::isdigit(static_cast<unsigned char>(u[1]))) {
    o.type = RcSrcType::kSrf;
    o.arg = parse_srf(tok, ctx);
    return o;
  }
  if (u == "R0" || u == "R1") {
    o.type = RcSrcType::kReg;
    o.arg = static_cast<uint8_t>(u[1] - '0');
    return o;
  }
  if (u == "UP") { o.type = RcSrcType::kNeighUp; return o; }
  if (u == "DOWN") { o.type = RcSrcType::kNeighDown; return o; }
  if (!tok.empty() && tok[0] == '#') {
    int64_t v = ctx.number_in(tok.substr(1), -128, 127, "RC immediate");
    if (imm_used && imm != static_cast<int8_t>(v))
      ctx.syntax("conflicting RC immediates in one instruction");
    imm = static_cast<int8_t>(v);
    imm_used = true;
    o.type = RcSrcType::kImm;
    return o;
  }
  ctx.syntax("bad RC operand '" + tok + "'");
}

inline RcInstr parse_rc(const std::string& text, const LineCtx& ctx) {
  RcInstr i;
  std::string body = text;
  // Destination suffix: "-> r0|r1|wb".
  size_t arrow = body.find("->");
  std::string dest;
  if (arrow != std::string::npos) {
    dest = upper(trim(body.substr(arrow + 2)));
    body = trim(body.substr(0, arrow));
  }
  auto [op, rest] = head_tail(body);
  std::string u = upper(op);
  auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
  bool imm_used = false;

  static const std::map<std::string, AluOp> kOps = {
      {"SADD", AluOp::kSadd}, {"SSUB", AluOp::kSsub}, {"SMUL", AluOp::kSmul},
      {"FXPM", AluOp::kFxpMul}, {"SLL", AluOp::kSll}, {"SRL", AluOp::kSrl},
      {"SRA", AluOp::kSra}, {"LAND", AluOp::kLand}, {"LOR", AluOp::kLor},
      {"LXOR", AluOp::kLxor}, {"LNOT", AluOp::kLnot}};

  if (u == "NOP" || u.empty()) {
    if (!rest.empty() || !dest.empty()) ctx.syntax("NOP takes no operands");
    return i;
  }
  if (u == "MOV") {
    if (args.size() != 1) ctx.syntax("MOV needs one source");
    i.op = AluOp::kNop;
    i.a = parse_rc_operand(args[0], ctx, i.imm, imm_used);
  } else if (u == "LNOT") {
    auto it = kOps.find(u);
    if (args.size() != 1) ctx.syntax("LNOT needs one source");
    i.op = it->second;
    i.a = parse_rc_operand(args[0], ctx, i.imm, imm_used);
  } else {
    auto it = kOps.find(u);
    if (it == kOps.end()) ctx.syntax("unknown RC mnemonic '" + op + "'");
    if (args.size() != 2) ctx.syntax(u + " needs two sources");
    i.op = it->second;
    i.a = parse_rc_operand(args[0], ctx, i.imm, imm_used);
    i.b = parse_rc_operand(args[1], ctx, i.imm, imm_used);
  }
  if (dest.empty()) ctx.syntax("RC op needs '-> r0|r1|wb'");
  if (dest == "R0") i.dest = RcDest::kReg0;
  else if (dest == "R1") i.dest = RcDest::kReg1;
  else if (dest == "WB") i.dest = RcDest::kWb;
  else ctx.syntax("bad RC destination '" + dest + "'");
  return i;
}

}  // namespace asmdetail

inline KernelImage assemble(const std::string& source) {
  using namespace asmdetail;
  KernelImage img;
  img.columns_used = ColumnsUsed::kCol0;
  bool columns_set = false;
  // Label tables are per column.
  std::array<std::map<std::string, uint8_t>, kColumns> labels;
  std::vector<PendingFixup> fixups;
  // Current section: which columns receive parsed bundles.
  std::vector<int> targets = {0};

  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  size_t bundles_seen = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    LineCtx ctx{line_no};
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto [head, tail] = head_tail(line);
    std::string hu = upper(head);
    if (hu == "COLUMN") {
      std::string arg = upper(tail);
      if (arg == "0") { targets = {0}; img.columns_used = columns_set && img.columns_used != ColumnsUsed::kCol0 ? ColumnsUsed::kBoth : ColumnsUsed::kCol0; }
      else if (arg == "1") { targets = {1}; img.columns_used = columns_set && img.columns_used != ColumnsUsed::kCol1 ? ColumnsUsed::kBoth : ColumnsUsed::kCol1; }
      else if (arg == "BOTH") { targets = {0, 1}; img.columns_used = ColumnsUsed::kBoth; }
      else ctx.syntax("column must be 0, 1 or both");
      columns_set = true;
      continue;
    }
    if (hu == ".NAME") {
      img.name = tail;
      continue;
    }
    if (hu == ".SRF") {
      auto args = split(tail, ' ');
      std::vector<std::string> parts;
      for (auto& a : args)
        if (!a.empty()) parts.push_back(a);
      if (parts.size() != 2) ctx.syntax(".srf needs index and value");
      int idx = static_cast<int>(ctx.number_in(parts[0], 0, kSrfEntries - 1, "SRF index"));
      img.srf_init[idx] = static_cast<Word>(
          static_cast<uint64_t>(ctx.number_in(parts[1], INT32_MIN, UINT32_MAX, "SRF value")));
      continue;
    }

    // Optional label prefix.
    size_t colon = line.find(':');
    // Avoid eating LDSRF word refs: a label colon must come before any ';'.
    size_t first_semi = line.find(';');
    if (colon != std::string::npos && (first_semi == std::string::npos || colon < first_semi)) {
      std::string maybe = trim(line.substr(0, colon));
      bool is_ident = !maybe.empty();
      for (char c : maybe)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') is_ident = false;
      // Only treat it as a label if it is not a mnemonic line (heuristic:
      // labels contain no spaces and the colon precedes the slots).
      if (is_ident && maybe.find(' ') == std::string::npos) {
        for (int t : targets) {
          if (labels[t].count(maybe)) ctx.syntax("duplicate label '" + maybe + "'");
          labels[t][maybe] = static_cast<uint8_t>(img.col_programs[t].size());
        }
        line = trim(line.substr(colon + 1));
        if (line.empty()) continue;
      }
    }

    auto slots = split(line, ';');
    if (slots.size() != 4)
      ctx.syntax("expected 4 slot groups 'LCU ; LSU ; MXCU ; RC0,RC1,RC2,RC3'");
    Bundle b;
    // Parse the LCU once per target column so fixups attach to the right PC.
    auto rcs = split(slots[3], ',');
    if (rcs.size() != kRcsPerColumn) ctx.syntax("expected 4 RC instructions");
    b.lsu = parse_lsu(slots[1], ctx);
    b.mxcu = parse_mxcu(slots[2], ctx);
    for (int r = 0; r < kRcsPerColumn; ++r) b.rc[r] = parse_rc(rcs[r], ctx);

    // Static structural hazard: shuffle writes C this cycle, so no RC may
    // read C in the same bundle.
    if (b.lsu.op == LsuOpcode::kShuffle) {
      for (const auto& rc : b.rc) {
        auto reads_c = [](const RcOperand& o) {
          return o.type == RcSrcType::kVwr && o.arg == 2;
        };
        if (rc.busy() && (reads_c(rc.a) || (rc.op != AluOp::kNop && rc.op != AluOp::kLnot &&
                                            reads_c(rc.b))))
          ctx.syntax("RC reads VWR C while the shuffle unit writes it");
      }
    }

    for (int t : targets) {
      size_t pc = img.col_programs[t].size();
      if (pc >= kProgramWords)
        throw AsmError(AsmErrorKind::kProgramTooLong, line_no,
                       "program for column " + std::to_string(t) + " exceeds 64 bundles");
      b.lcu = parse_lcu(slots[0], ctx, fixups, t, pc);
      img.col_programs[t].push_back(b);
    }
    ++bundles_seen;
  }

  if (bundles_seen == 0) throw AsmError(AsmErrorKind::kSyntax, line_no, "empty program");

  for (const auto& f : fixups) {
    auto it = labels[f.column].find(f.label);
    if (it == labels[f.column].end())
      throw AsmError(AsmErrorKind::kUnknownLabel, f.line_no, "unknown label '" + f.label + "'");
    img.col_programs[f.column][f.pc].lcu.target = it->second;
  }

  // Round-trip guarantee: every assembled bundle must survive encode/decode.
  for (const auto& prog : img.col_programs)
    for (const Bundle& b : prog)
      if (decode(encode(b)) != b)
        throw AsmError(AsmErrorKind::kSyntax, 0, "internal: bundle does not round-trip");
  return img;
}

// ---------------------------------------------------------------------------
// Disassembler. Emits canonical text that reassembles to an equal image.
// ---------------------------------------------------------------------------

namespace asmdetail {

inline std::string print_lcu(const LcuInstr& i) {
  std::ostringstream o;
  auto reg = [](uint8_t r) { return "r" + std::to_string(r); };
  auto rhs = [&](const LcuInstr& in) {
    return in.rhs_is_srf ? "s" + std::to_string(in.rhs) : reg(in.rhs);
  };
  switch (i.op) {
    case LcuOpcode::kNop: return "NOP";
    case LcuOpcode::kSeti: o << "SETI " << reg(i.rd) << ", " << static_cast<int16_t>(i.imm); break;
    case LcuOpcode::kAddi: o << "ADDI " << reg(i.rd) << ", " << static_cast<int16_t>(i.imm); break;
    case LcuOpcode::kSub: o << "SUB " << reg(i.rd) << ", " << reg(i.rhs); break;
    case LcuOpcode::kBlt: o << "BLT " << reg(i.rd) << ", " << rhs(i) << ", PC=" << int(i.target); break;
    case LcuOpcode::kBge: o << "BGE " << reg(i.rd) << ", " << rhs(i) << ", PC=" << int(i.target); break;
    case LcuOpcode::kBeq: o << "BEQ " << reg(i.rd) << ", " << rhs(i) << ", PC=" << int(i.target); break;
    case LcuOpcode::kBne: o << "BNE " << reg(i.rd) << ", " << rhs(i) << ", PC=" << int(i.target); break;
    case LcuOpcode::kJump: o << "JUMP PC=" << int(i.target); break;
    case LcuOpcode::kExit: return "EXIT";
  }
  return o.str();
}

inline std::string print_lsu(const LsuInstr& i) {
  std::ostringstream o;
  const char* vwr = "ABC";
  switch (i.op) {
    case LsuOpcode::kNop: return "NOP";
    case LsuOpcode::kLoadVwr:
    case LsuOpcode::kStoreVwr:
      o << (i.op == LsuOpcode::kLoadVwr ? "LOAD " : "STORE ") << vwr[i.vwr] << ", ";
      if (i.indirect) o << "[s" << int(i.srf) << "]";
      else o << "L" << int(i.line);
      break;
    case LsuOpcode::kLoadSrf:
    case LsuOpcode::kStoreSrf:
      o << (i.op == LsuOpcode::kLoadSrf ? "LDSRF s" : "STSRF s") << int(i.srf) << ", L"
        << int(i.line) << ":" << int(i.word);
      if (i.plus_k) o << "+k";
      break;
    case LsuOpcode::kShuffle: {
      const char* kind = "";
      switch (i.shuf.kind) {
        case ShuffleKind::kInterleave: kind = "ILV"; break;
        case ShuffleKind::kPrune: kind = "PRN"; break;
        case ShuffleKind::kBitrev: kind = "REV"; break;
        case ShuffleKind::kCshift: kind = "ROT"; break;
      }
      o << "SHUF " << kind << ".";
      if (i.shuf.kind == ShuffleKind::kPrune)
        o << (i.shuf.parity == PruneParity::kKeepEven ? "E" : "O");
      else
        o << (i.shuf.half == ShuffleHalf::kLower ? "L" : "U");
      break;
    }
  }
  return o.str();
}

inline std::string print_mxcu(const MxcuInstr& i) {
  std::ostringstream o;
  switch (i.op) {
    case MxcuOpcode::kNop: return "NOP";
    case MxcuOpcode::kSetk: o << "SETK " << int(i.k_imm); break;
    case MxcuOpcode::kInck: return "INCK";
    case MxcuOpcode::kDeck: return "DECK";
    case MxcuOpcode::kLoadkSrf: o << "KSRF s" << int(i.srf); break;
    case MxcuOpcode::kSelect: {
      o << "SEL ";
      if (i.wb_none) o << "-";
      else o << "ABC"[i.wb_dest];
      o << ", ";
      for (int bit = 3; bit >= 0; --bit) o << ((i.wb_mask >> bit) & 1);
      break;
    }
  }
  return o.str();
}

inline std::string print_rc_operand(const RcOperand& o, int8_t imm) {
  switch (o.type) {
    case RcSrcType::kVwr: return std::string(1, "ABC"[o.arg]);
    case RcSrcType::kSrf: return "s" + std::to_string(o.arg);
    case RcSrcType::kReg: return "r" + std::to_string(o.arg);
    case RcSrcType::kNeighUp: return "up";
    case RcSrcType::kNeighDown: return "down";
    case RcSrcType::kImm: return "#" + std::to_string(imm);
  }
  return "?";
}

inline std::string print_rc(const RcInstr& i) {
  if (!i.busy()) return "NOP";
  static const char* kNames[] = {"MOV",  "SADD", "SSUB", "SMUL", "FXPM", "SLL",
                                 "SRL",  "SRA",  "LAND", "LOR",  "LXOR", "LNOT"};
  std::ostringstream o;
  o << kNames[static_cast<int>(i.op)] << " " << print_rc_operand(i.a, i.imm);
  bool unary = i.op == AluOp::kNop || i.op == AluOp::kLnot;
  if (!unary) o << ", " << print_rc_operand(i.b, i.imm);
  o << " -> ";
  switch (i.dest) {
    case RcDest::kNone: o << "r0"; break;  // unreachable for busy instrs
    case RcDest::kReg0: o << "r0"; break;
    case RcDest::kReg1: o << "r1"; break;
    case RcDest::kWb: o << "wb"; break;
  }
  return o.str();
}

}  // namespace asmdetail

inline std::string disassemble(const KernelImage& img) {
  using namespace asmdetail;
  std::ostringstream out;
  if (!img.name.empty()) out << ".name " << img.name << "\n";
  for (int s = 0; s < kSrfEntries; ++s)
    if (img.srf_init[s] != 0) out << ".srf " << s << " " << img.srf_init[s] << "\n";
  bool both_same = img.columns_used == ColumnsUsed::kBoth &&
                   img.col_programs[0] == img.col_programs[1];
  auto emit_program = [&](const std::vector<Bundle>& prog) {
    for (const Bundle& b : prog) {
      out << print_lcu(b.lcu) << " ; " << print_lsu(b.lsu) << " ; " << print_mxcu(b.mxcu)
          << " ; ";
      for (int r = 0; r < kRcsPerColumn; ++r) {
        if (r) out << ", ";
        out << print_rc(b.rc[r]);
      }
      out << "\n";
    }
  };
  if (both_same) {
    out << "column both\n";
    emit_program(img.col_programs[0]);
  } else {
    for (int c = 0; c < kColumns; ++c) {
      if (!img.uses_column(c) && img.col_programs[c].empty()) continue;
      out << "column " << c << "\n";
      emit_program(img.col_programs[c]);
    }
  }
  return out.str();
}

}  // namespace vwr2a
