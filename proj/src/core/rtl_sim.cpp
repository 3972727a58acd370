// Copyright 2026 The approxcim Authors
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

#include "core/rtl_sim.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>

#include "core/error.hpp"

namespace approxcim {

namespace {

enum class TokKind { kIdent, kNumber, kPunct, kEnd };

struct Token {
  TokKind kind = TokKind::kEnd;
  std::string text;
  unsigned line = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  unsigned line = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (src.compare(i, 2, "/*") == 0) {
      const std::size_t end = src.find("*/", i + 2);
      if (end == std::string_view::npos) fail(ErrorCode::kParse, "unterminated comment");
      line += static_cast<unsigned>(std::count(src.begin() + i, src.begin() + end, '\n'));
      i = end + 2;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
               c == '`') {
      const std::size_t start = i++;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_' || src[i] == '$')) {
        ++i;
      }
      out.push_back({TokKind::kIdent, std::string(src.substr(start, i - start)), line});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '\'') {
        ++i;
        while (i < src.size() && std::isalnum(static_cast<unsigned char>(src[i]))) ++i;
      }
      out.push_back({TokKind::kNumber, std::string(src.substr(start, i - start)), line});
    } else {
      out.push_back({TokKind::kPunct, std::string(1, c), line});
      ++i;
    }
  }
  out.push_back({TokKind::kEnd, "", line});
  return out;
}

struct Expr {
  enum Kind { kRef, kConst, kNot, kAnd, kOr, kXor } kind = kRef;
  std::string name;
  std::optional<unsigned> index;
  bool value = false;
  std::unique_ptr<Expr> lhs, rhs;
};

struct Range {
  unsigned msb = 0, lsb = 0;
  unsigned width() const { return msb - lsb + 1; }
};

struct PortDecl {
  std::string name;
  PortDirection dir;
  Range range;
};

struct Assign {
  std::string name;
  std::optional<unsigned> index;
  std::unique_ptr<Expr> expr;
  unsigned line;
};

struct Instance {
  std::string module;
  std::string name;
  std::vector<std::pair<std::string, std::unique_ptr<Expr>>> connections;
  unsigned line;
};

struct ModuleAst {
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<std::pair<std::string, Range>> wires;
  std::vector<Assign> assigns;
  std::vector<Instance> instances;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::map<std::string, ModuleAst> parse_all() {
    std::map<std::string, ModuleAst> modules;
    while (peek().kind != TokKind::kEnd) {
      ModuleAst m = parse_module();
      const std::string name = m.name;
      if (!modules.emplace(name, std::move(m)).second) {
        error("module '" + name + "' defined twice");
      }
    }
    return modules;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::kParse, "line " + std::to_string(peek().line) + ": " + msg);
  }

  bool accept(std::string_view text) {
    if (peek().kind != TokKind::kEnd && peek().text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view text) {
    if (!accept(text)) {
      error("expected '" + std::string(text) + "', found '" + peek().text + "'");
    }
  }

  std::string ident() {
    if (peek().kind != TokKind::kIdent) error("expected identifier, found '" + peek().text + "'");
    return next().text;
  }

  unsigned number() {
    if (peek().kind != TokKind::kNumber || peek().text.find('\'') != std::string::npos) {
      error("expected integer, found '" + peek().text + "'");
    }
    return static_cast<unsigned>(std::stoul(next().text));
  }

  std::optional<Range> opt_range() {
    if (!accept("[")) return {};
    Range r;
    r.msb = number();
    expect(":");
    r.lsb = number();
    expect("]");
    if (r.msb < r.lsb) error("descending ranges only");
    return r;
  }

  ModuleAst parse_module() {
    expect("module");
    ModuleAst m;
    m.name = ident();
    expect("(");
    if (!accept(")")) {
      do {
        PortDecl p;
        if (accept("input")) {
          p.dir = PortDirection::kInput;
        } else if (accept("output")) {
          p.dir = PortDirection::kOutput;
        } else {
          error("expected port direction, found '" + peek().text + "'");
        }
        accept("wire");
        p.range = opt_range().value_or(Range{});
        p.name = ident();
        m.ports.push_back(std::move(p));
      } while (accept(","));
      expect(")");
    }
    expect(";");
    while (!accept("endmodule")) {
      if (peek().kind == TokKind::kEnd) error("missing endmodule");
      if (accept("wire")) {
        const Range r = opt_range().value_or(Range{});
        do {
          m.wires.emplace_back(ident(), r);
        } while (accept(","));
        expect(";");
      } else if (accept("assign")) {
        Assign a;
        a.line = peek().line;
        a.name = ident();
        if (accept("[")) {
          a.index = number();
          expect("]");
        }
        expect("=");
        a.expr = parse_or();
        expect(";");
        m.assigns.push_back(std::move(a));
      } else if (peek().kind == TokKind::kIdent) {
        const std::string word = peek().text;
        static const char* kUnsupported[] = {"reg", "always", "initial", "input",
                                             "output", "integer", "task", "function"};
        for (const char* bad : kUnsupported) {
          if (word == bad) error("unsupported construct '" + word + "'");
        }
        Instance inst;
        inst.line = peek().line;
        inst.module = ident();
        inst.name = ident();
        expect("(");
        if (!accept(")")) {
          do {
            expect(".");
            std::string port = ident();
            expect("(");
            inst.connections.emplace_back(std::move(port), parse_or());
            expect(")");
          } while (accept(","));
          expect(")");
        }
        expect(";");
        m.instances.push_back(std::move(inst));
      } else {
        error("unexpected '" + peek().text + "'");
      }
    }
    return m;
  }

  std::unique_ptr<Expr> binary(Expr::Kind kind, std::unique_ptr<Expr> l,
                               std::unique_ptr<Expr> r) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::unique_ptr<Expr> parse_or() {
    auto e = parse_xor();
    while (accept("|")) e = binary(Expr::kOr, std::move(e), parse_xor());
    return e;
  }
  std::unique_ptr<Expr> parse_xor() {
    auto e = parse_and();
    while (accept("^")) e = binary(Expr::kXor, std::move(e), parse_and());
    return e;
  }
  std::unique_ptr<Expr> parse_and() {
    auto e = parse_unary();
    while (accept("&")) e = binary(Expr::kAnd, std::move(e), parse_unary());
    return e;
  }
  std::unique_ptr<Expr> parse_unary() {
    if (accept("~")) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::kNot;
      e->lhs = parse_unary();
      return e;
    }
    if (accept("(")) {
      auto e = parse_or();
      expect(")");
      return e;
    }
    auto e = std::make_unique<Expr>();
    if (peek().kind == TokKind::kNumber) {
      const std::string lit = next().text;
      e->kind = Expr::kConst;
      if (lit == "0" || lit == "1'b0") {
        e->value = false;
      } else if (lit == "1" || lit == "1'b1") {
        e->value = true;
      } else {
        error("only 1-bit literals are supported, found '" + lit + "'");
      }
      return e;
    }
    e->kind = Expr::kRef;
    e->name = ident();
    if (accept("[")) {
      e->index = number();
      expect("]");
    }
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

using Op = RtlSimulator::Op;
using OpKind = RtlSimulator::OpKind;

struct Net {
  Range range;
  std::vector<std::uint32_t> slots;  // slots[i] is bit range.lsb + i
};

class Elaborator {
 public:
  explicit Elaborator(const std::map<std::string, ModuleAst>& modules)
      : modules_(modules) {}

  std::uint32_t alloc() { return slot_count_++; }

  void elaborate(const ModuleAst& m, std::map<std::string, Net> nets,
                 const std::string& path, unsigned depth) {
    if (depth > 64) fail(ErrorCode::kParse, "instance hierarchy too deep at " + path);
    for (const PortDecl& p : m.ports) {
      auto it = nets.find(p.name);
      if (it == nets.end()) {
        nets[p.name] = fresh(p.range);
      } else {
        if (it->second.slots.size() != p.range.width()) {
          fail(ErrorCode::kParse, path + ": width mismatch on port '" + p.name + "'");
        }
        it->second.range = p.range;
      }
    }
    for (const auto& [name, r] : m.wires) {
      if (nets.count(name)) {
        fail(ErrorCode::kParse, path + ": '" + name + "' declared twice");
      }
      nets[name] = fresh(r);
    }
    for (const Assign& a : m.assigns) {
      const std::uint32_t dst = bit(nets, a.name, a.index, path, a.line);
      compile(*a.expr, nets, path, a.line, dst);
    }
    for (const Instance& inst : m.instances) {
      auto mod = modules_.find(inst.module);
      if (mod == modules_.end()) {
        fail(ErrorCode::kParse, path + ": unknown module '" + inst.module + "'");
      }
      std::map<std::string, Net> bound;
      for (const auto& [port, expr] : inst.connections) {
        bound[port] = connection(*expr, nets, path, inst.line);
      }
      elaborate(mod->second, std::move(bound), path + "." + inst.name, depth + 1);
    }
  }

  std::uint32_t slot_count() const { return slot_count_; }
  std::vector<Op>& ops() { return ops_; }

 private:
  Net fresh(Range r) {
    Net n;
    n.range = r;
    for (unsigned i = 0; i < r.width(); ++i) n.slots.push_back(alloc());
    return n;
  }

  static std::uint32_t bit(const std::map<std::string, Net>& nets, const std::string& name,
                           std::optional<unsigned> index, const std::string& path,
                           unsigned line) {
    auto it = nets.find(name);
    if (it == nets.end()) {
      fail(ErrorCode::kParse, path + " line " + std::to_string(line) +
                                  ": undeclared net '" + name + "'");
    }
    const Net& net = it->second;
    if (!index) {
      if (net.slots.size() != 1) {
        fail(ErrorCode::kParse, path + " line " + std::to_string(line) +
                                    ": multi-bit net '" + name + "' used as a bit");
      }
      return net.slots[0];
    }
    if (*index < net.range.lsb || *index > net.range.msb) {
      fail(ErrorCode::kParse, path + " line " + std::to_string(line) + ": index " +
                                  std::to_string(*index) + " out of range for '" + name + "'");
    }
    return net.slots[*index - net.range.lsb];
  }

  Net connection(const Expr& e, const std::map<std::string, Net>& nets,
                 const std::string& path, unsigned line) {
    Net n;
    if (e.kind == Expr::kConst) {
      n.slots = {e.value ? 1u : 0u};
    } else if (e.kind == Expr::kRef && !e.index) {
      auto it = nets.find(e.name);
      if (it == nets.end()) {
        fail(ErrorCode::kParse, path + " line " + std::to_string(line) +
                                    ": undeclared net '" + e.name + "'");
      }
      n.slots = it->second.slots;
    } else if (e.kind == Expr::kRef) {
      n.slots = {bit(nets, e.name, e.index, path, line)};
    } else {
      fail(ErrorCode::kParse, path + " line " + std::to_string(line) +
                                  ": port connections must be nets or constants");
    }
    n.range = {static_cast<unsigned>(n.slots.size() - 1), 0};
    return n;
  }

  std::uint32_t compile(const Expr& e, const std::map<std::string, Net>& nets,
                        const std::string& path, unsigned line,
                        std::optional<std::uint32_t> dst) {
    std::uint32_t result = 0;
    switch (e.kind) {
      case Expr::kConst:
      case Expr::kRef: {
        const std::uint32_t src =
            e.kind == Expr::kConst ? (e.value ? 1u : 0u)
                                   : bit(nets, e.name, e.index, path, line);
        if (!dst) return src;
        ops_.push_back({OpKind::kCopy, *dst, src, 0});
        return *dst;
      }
      case Expr::kNot: {
        const std::uint32_t x = compile(*e.lhs, nets, path, line, {});
        result = dst.value_or(alloc());
        ops_.push_back({OpKind::kNot, result, x, 0});
        return result;
      }
      default: {
        const std::uint32_t x = compile(*e.lhs, nets, path, line, {});
        const std::uint32_t y = compile(*e.rhs, nets, path, line, {});
        result = dst.value_or(alloc());
        const OpKind kind = e.kind == Expr::kAnd ? OpKind::kAnd
                            : e.kind == Expr::kOr ? OpKind::kOr
                                                  : OpKind::kXor;
        ops_.push_back({kind, result, x, y});
        return result;
      }
    }
  }

  const std::map<std::string, ModuleAst>& modules_;
  std::uint32_t slot_count_ = 2;  // 0 and 1 hold the constants
  std::vector<Op> ops_;
};

}  // namespace

RtlSimulator::RtlSimulator(std::string_view source, const std::string& top) {
  const std::map<std::string, ModuleAst> modules = Parser(tokenize(source)).parse_all();
  auto it = modules.find(top);
  if (it == modules.end()) fail(ErrorCode::kParse, "top module '" + top + "' not found");

  Elaborator elab(modules);
  std::map<std::string, Net> top_nets;
  for (const PortDecl& p : it->second.ports) {
    if (p.range.lsb != 0 || p.range.width() > 64) {
      fail(ErrorCode::kUnsupported, "port '" + p.name + "' must be [w-1:0] with w <= 64");
    }
    Net n;
    n.range = p.range;
    for (unsigned i = 0; i < p.range.width(); ++i) n.slots.push_back(elab.alloc());
    port_slots_[p.name] = n.slots;
    ports_.push_back({p.name, p.dir, p.range.width()});
    top_nets[p.name] = std::move(n);
  }
  elab.elaborate(it->second, top_nets, top, 0);
  slot_count_ = elab.slot_count();

  // Order the flattened operations by data dependency.
  const std::vector<Op>& ops = elab.ops();
  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> driver(slot_count_, kNone);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dst < 2) fail(ErrorCode::kInvalidArgument, "assignment to a constant");
    if (driver[ops[i].dst] != kNone) {
      fail(ErrorCode::kInvalidArgument, "net driven more than once");
    }
    driver[ops[i].dst] = static_cast<std::int64_t>(i);
  }
  std::vector<bool> external(slot_count_, false);
  external[0] = external[1] = true;
  for (const RtlPort& p : ports_) {
    if (p.direction != PortDirection::kInput) continue;
    for (std::uint32_t s : port_slots_[p.name]) {
      if (driver[s] != kNone) fail(ErrorCode::kInvalidArgument, "input port '" + p.name + "' is driven");
      external[s] = true;
    }
  }
  enum : std::uint8_t { kNew, kActive, kDone };
  std::vector<std::uint8_t> state(ops.size(), kNew);
  auto operands = [&](const Op& op) {
    std::vector<std::uint32_t> v{op.x};
    if (op.kind != OpKind::kCopy && op.kind != OpKind::kNot) v.push_back(op.y);
    return v;
  };
  for (std::size_t root = 0; root < ops.size(); ++root) {
    if (state[root] != kNew) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = kActive;
    while (!stack.empty()) {
      auto& [op, next] = stack.back();
      const std::vector<std::uint32_t> ins = operands(ops[op]);
      if (next < ins.size()) {
        const std::uint32_t slot = ins[next++];
        if (external[slot]) continue;
        if (driver[slot] == kNone) fail(ErrorCode::kInvalidArgument, "undriven net read");
        const auto dep = static_cast<std::size_t>(driver[slot]);
        if (state[dep] == kActive) fail(ErrorCode::kInvalidArgument, "combinational loop");
        if (state[dep] == kNew) {
          state[dep] = kActive;
          stack.emplace_back(dep, 0);
        }
      } else {
        state[op] = kDone;
        ops_.push_back(ops[op]);
        stack.pop_back();
      }
    }
  }
  for (const RtlPort& p : ports_) {
    if (p.direction != PortDirection::kOutput) continue;
    for (std::uint32_t s : port_slots_[p.name]) {
      if (driver[s] == kNone) fail(ErrorCode::kInvalidArgument, "output port '" + p.name + "' undriven");
    }
  }
}

void RtlSimulator::run(std::vector<std::uint64_t>& slots) const {
  slots[0] = 0;
  slots[1] = ~0ull;
  for (const Op& op : ops_) {
    switch (op.kind) {
      case OpKind::kCopy: slots[op.dst] = slots[op.x]; break;
      case OpKind::kNot: slots[op.dst] = ~slots[op.x]; break;
      case OpKind::kAnd: slots[op.dst] = slots[op.x] & slots[op.y]; break;
      case OpKind::kOr: slots[op.dst] = slots[op.x] | slots[op.y]; break;
      case OpKind::kXor: slots[op.dst] = slots[op.x] ^ slots[op.y]; break;
    }
  }
}

std::map<std::string, std::uint64_t> RtlSimulator::evaluate(
    const std::map<std::string, std::uint64_t>& inputs) const {
  std::vector<std::uint64_t> slots(slot_count_, 0);
  for (const RtlPort& p : ports_) {
    if (p.direction != PortDirection::kInput) continue;
    auto it = inputs.find(p.name);
    if (it == inputs.end()) fail(ErrorCode::kInvalidArgument, "missing input '" + p.name + "'");
    const std::vector<std::uint32_t>& bits = port_slots_.at(p.name);
    for (unsigned i = 0; i < bits.size(); ++i) slots[bits[i]] = (it->second >> i) & 1u;
  }
  run(slots);
  std::map<std::string, std::uint64_t> out;
  for (const RtlPort& p : ports_) {
    if (p.direction != PortDirection::kOutput) continue;
    const std::vector<std::uint32_t>& bits = port_slots_.at(p.name);
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bits.size(); ++i) v |= (slots[bits[i]] & 1u) << i;
    out[p.name] = v;
  }
  return out;
}

void RtlSimulator::evaluate_multiplier(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b,
                                       std::span<std::uint64_t> p) const {
  if (a.size() != b.size() || a.size() != p.size()) {
    fail(ErrorCode::kInvalidArgument, "operand and result spans differ in length");
  }
  auto find = [&](const char* name) -> const std::vector<std::uint32_t>& {
    auto it = port_slots_.find(name);
    if (it == port_slots_.end()) {
      fail(ErrorCode::kInvalidArgument, std::string("module has no port '") + name + "'");
    }
    return it->second;
  };
  const auto& abits = find("a");
  const auto& bbits = find("b");
  const auto& pbits = find("p");
  std::vector<std::uint64_t> slots(slot_count_, 0);
  for (std::size_t base = 0; base < a.size(); base += 64) {
    const std::size_t lanes = std::min<std::size_t>(64, a.size() - base);
    std::fill(slots.begin(), slots.end(), 0);
    for (std::size_t l = 0; l < lanes; ++l) {
      for (unsigned i = 0; i < abits.size(); ++i) {
        slots[abits[i]] |= ((a[base + l] >> i) & 1u) << l;
      }
      for (unsigned i = 0; i < bbits.size(); ++i) {
        slots[bbits[i]] |= ((b[base + l] >> i) & 1u) << l;
      }
    }
    run(slots);
    for (std::size_t l = 0; l < lanes; ++l) {
      std::uint64_t v = 0;
      for (unsigned i = 0; i < pbits.size(); ++i) v |= ((slots[pbits[i]] >> l) & 1u) << i;
      p[base + l] = v;
    }
  }
}

}  // namespace approxcim
