// Copyright 2026 The qk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qk/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "qk/error.hpp"

namespace qk {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void boolean(bool b) { u8(b ? 1 : 0); }

  void expr(const Expr& e) {
    u8(static_cast<std::uint8_t>(e.node.index()));
    u32(static_cast<std::uint32_t>(e.line));
    u32(static_cast<std::uint32_t>(e.column));
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            i64(n.value);
          } else if constexpr (std::is_same_v<T, FloatLit> || std::is_same_v<T, ImagLit>) {
            f64(n.value);
          } else if constexpr (std::is_same_v<T, StringLit>) {
            str(n.value);
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            boolean(n.value);
          } else if constexpr (std::is_same_v<T, NameRef>) {
            str(n.name);
          } else if constexpr (std::is_same_v<T, Attribute>) {
            expr(*n.base);
            str(n.name);
          } else if constexpr (std::is_same_v<T, Call>) {
            expr(*n.callee);
            exprs(n.args);
          } else if constexpr (std::is_same_v<T, Subscript>) {
            expr(*n.base);
            exprs(n.indices);
          } else if constexpr (std::is_same_v<T, Slice>) {
            boolean(n.lower.has_value());
            if (n.lower) expr(**n.lower);
            boolean(n.upper.has_value());
            if (n.upper) expr(**n.upper);
          } else if constexpr (std::is_same_v<T, Unary>) {
            u8(static_cast<std::uint8_t>(n.op));
            expr(*n.operand);
          } else if constexpr (std::is_same_v<T, Binary>) {
            u8(static_cast<std::uint8_t>(n.op));
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, ListLit>) {
            exprs(n.items);
          }
        },
        e.node);
  }

  void exprs(const std::vector<Expr>& es) {
    u32(static_cast<std::uint32_t>(es.size()));
    for (const auto& e : es) expr(e);
  }

  void ops(const OpList& list) {
    u32(static_cast<std::uint32_t>(list.size()));
    for (const Op& op : list) {
      u8(static_cast<std::uint8_t>(op.node.index()));
      u32(static_cast<std::uint32_t>(op.line));
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateOp>) {
              str(n.name);
              u8(static_cast<std::uint8_t>(n.modifier));
              exprs(n.ctrl_args);
              exprs(n.args);
              boolean(n.broadcast);
            } else if constexpr (std::is_same_v<T, CallOp>) {
              str(n.kernel);
              u8(static_cast<std::uint8_t>(n.modifier));
              exprs(n.ctrl_args);
              exprs(n.args);
              boolean(n.via_param);
            } else if constexpr (std::is_same_v<T, BuiltinOp>) {
              str(n.name);
              exprs(n.args);
            } else if constexpr (std::is_same_v<T, AssignOp>) {
              str(n.target);
              exprs(n.indices);
              expr(n.value);
              boolean(n.declares);
            } else if constexpr (std::is_same_v<T, ForOp>) {
              str(n.var);
              expr(n.iterable);
              ops(n.body);
            } else if constexpr (std::is_same_v<T, IfOp>) {
              u32(static_cast<std::uint32_t>(n.branches.size()));
              for (const auto& [cond, body] : n.branches) {
                expr(cond);
                ops(body);
              }
              ops(n.else_body);
            } else if constexpr (std::is_same_v<T, ComputeActionOp>) {
              ops(n.compute);
              ops(n.action);
            } else if constexpr (std::is_same_v<T, SynthesisOp>) {
              expr(n.qreg);
              u8(static_cast<std::uint8_t>(n.method));
              str(n.matrix_var);
              ops(n.provider);
            } else if constexpr (std::is_same_v<T, PrintOp>) {
              exprs(n.args);
            }
          },
          op.node);
    }
  }

  void strings(const std::vector<std::string>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& s : v) str(s);
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  [[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::CacheCorruption, "malformed program encoding: " + what);
  }

  std::uint8_t u8() {
    if (pos_ >= in_.size()) corrupt("unexpected end of data");
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{u8()} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{u8()} << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    std::uint32_t n = u32();
    if (n > in_.size() - pos_) corrupt("string length out of range");
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool boolean() {
    std::uint8_t b = u8();
    if (b > 1) corrupt("bad boolean");
    return b == 1;
  }
  std::uint32_t count() {
    std::uint32_t n = u32();
    // Every element takes at least one byte.
    if (n > in_.size() - pos_) corrupt("element count out of range");
    return n;
  }

  template <class E>
  E enumeration(int max) {
    std::uint8_t v = u8();
    if (v > max) corrupt("enumeration out of range");
    return static_cast<E>(v);
  }

  Expr expr(int depth = 0) {
    if (depth > 1000) corrupt("expression nesting too deep");
    std::uint8_t tag = u8();
    Expr e{IntLit{}};
    e.line = static_cast<int>(u32());
    e.column = static_cast<int>(u32());
    switch (tag) {
      case 0: e.node = IntLit{i64()}; break;
      case 1: e.node = FloatLit{f64()}; break;
      case 2: e.node = ImagLit{f64()}; break;
      case 3: e.node = StringLit{str()}; break;
      case 4: e.node = BoolLit{boolean()}; break;
      case 5: e.node = NameRef{str()}; break;
      case 6: {
        Expr base = expr(depth + 1);
        e.node = Attribute{std::move(base), str()};
        break;
      }
      case 7: {
        Expr callee = expr(depth + 1);
        e.node = Call{std::move(callee), exprs(depth + 1)};
        break;
      }
      case 8: {
        Expr base = expr(depth + 1);
        e.node = Subscript{std::move(base), exprs(depth + 1)};
        break;
      }
      case 9: {
        Slice s;
        if (boolean()) s.lower = Box<Expr>(expr(depth + 1));
        if (boolean()) s.upper = Box<Expr>(expr(depth + 1));
        e.node = std::move(s);
        break;
      }
      case 10: {
        auto op = enumeration<UnaryOp>(static_cast<int>(UnaryOp::Not));
        e.node = Unary{op, expr(depth + 1)};
        break;
      }
      case 11: {
        auto op = enumeration<BinaryOp>(static_cast<int>(BinaryOp::Or));
        Expr lhs = expr(depth + 1);
        e.node = Binary{op, std::move(lhs), expr(depth + 1)};
        break;
      }
      case 12: e.node = ListLit{exprs(depth + 1)}; break;
      default: corrupt("unknown expression tag");
    }
    return e;
  }

  std::vector<Expr> exprs(int depth = 0) {
    std::uint32_t n = count();
    std::vector<Expr> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(expr(depth));
    return out;
  }

  OpList ops(int depth = 0) {
    if (depth > 1000) corrupt("statement nesting too deep");
    std::uint32_t n = count();
    OpList out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint8_t tag = u8();
      int line = static_cast<int>(u32());
      Op op{PrintOp{}, line};
      switch (tag) {
        case 0: {
          GateOp g;
          g.name = str();
          g.modifier = enumeration<CallModifier>(static_cast<int>(CallModifier::Ctrl));
          g.ctrl_args = exprs();
          g.args = exprs();
          g.broadcast = boolean();
          op.node = std::move(g);
          break;
        }
        case 1: {
          CallOp c;
          c.kernel = str();
          c.modifier = enumeration<CallModifier>(static_cast<int>(CallModifier::Ctrl));
          c.ctrl_args = exprs();
          c.args = exprs();
          c.via_param = boolean();
          op.node = std::move(c);
          break;
        }
        case 2: {
          BuiltinOp b;
          b.name = str();
          b.args = exprs();
          op.node = std::move(b);
          break;
        }
        case 3: {
          std::string target = str();
          std::vector<Expr> indices = exprs();
          Expr value = expr();
          bool declares = boolean();
          op.node = AssignOp{std::move(target), std::move(indices), std::move(value), declares};
          break;
        }
        case 4: {
          std::string var = str();
          Expr iterable = expr();
          op.node = ForOp{std::move(var), std::move(iterable), ops(depth + 1)};
          break;
        }
        case 5: {
          IfOp f;
          std::uint32_t nb = count();
          for (std::uint32_t b = 0; b < nb; ++b) {
            Expr cond = expr();
            f.branches.emplace_back(std::move(cond), ops(depth + 1));
          }
          f.else_body = ops(depth + 1);
          op.node = std::move(f);
          break;
        }
        case 6: {
          OpList compute = ops(depth + 1);
          op.node = ComputeActionOp{std::move(compute), ops(depth + 1)};
          break;
        }
        case 7: {
          Expr qreg = expr();
          auto method = enumeration<SynthesisMethod>(static_cast<int>(SynthesisMethod::TwoLevel));
          std::string var = str();
          op.node = SynthesisOp{std::move(qreg), method, std::move(var), ops(depth + 1)};
          break;
        }
        case 8: op.node = PrintOp{exprs()}; break;
        default: corrupt("unknown statement tag");
      }
      out.push_back(std::move(op));
    }
    return out;
  }

  std::vector<std::string> strings() {
    std::uint32_t n = count();
    std::vector<std::string> out;
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(str());
    return out;
  }

  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

constexpr std::uint32_t kKernelMagic = 0x4b51504b;  // "KPQK" little endian

}  // namespace

std::string serialize_kernel(const CompiledKernel& k) {
  Writer w;
  w.u32(kKernelMagic);
  w.u32(kProgramFormatVersion);
  w.str(k.name);
  w.u32(static_cast<std::uint32_t>(k.params.size()));
  for (const Param& p : k.params) {
    w.str(p.name);
    w.u8(static_cast<std::uint8_t>(p.type.kind));
    w.u32(static_cast<std::uint32_t>(p.type.signature.size()));
    for (TypeKind t : p.type.signature) w.u8(static_cast<std::uint8_t>(t));
  }
  w.str(k.digest);
  w.strings(k.dependencies);
  w.strings(k.direct_dependencies);
  w.str(k.source);
  w.ops(k.program.body);
  return w.take();
}

CompiledKernel deserialize_kernel(std::string_view bytes) {
  Reader r(bytes);
  if (r.u32() != kKernelMagic) r.corrupt("bad magic");
  if (r.u32() != static_cast<std::uint32_t>(kProgramFormatVersion)) r.corrupt("format version");
  CompiledKernel k;
  k.name = r.str();
  std::uint32_t np = r.count();
  for (std::uint32_t i = 0; i < np; ++i) {
    Param p;
    p.name = r.str();
    p.type.kind = r.enumeration<TypeKind>(static_cast<int>(TypeKind::Matrix));
    std::uint32_t ns = r.count();
    for (std::uint32_t j = 0; j < ns; ++j) {
      p.type.signature.push_back(r.enumeration<TypeKind>(static_cast<int>(TypeKind::Matrix)));
    }
    k.params.push_back(std::move(p));
  }
  k.digest = r.str();
  k.dependencies = r.strings();
  k.direct_dependencies = r.strings();
  k.source = r.str();
  k.program.body = r.ops();
  if (!r.done()) r.corrupt("trailing bytes");
  return k;
}

}  // namespace qk
