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

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qk/error.hpp"
#include "qk/lexer.hpp"
#include "qk/parser.hpp"
#include "qk/printer.hpp"

namespace {

qk::ErrorCode parse_error(const std::string& src, const qk::ParseContext& ctx = {}) {
  try {
    qk::parse_kernel_source(src, ctx);
  } catch (const qk::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << src;
  return qk::ErrorCode::RuntimeError;
}

std::vector<qk::TokenKind> kinds(const std::string& src) {
  std::vector<qk::TokenKind> out;
  for (const auto& t : qk::tokenize(src)) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST(Lexer, KeywordsAndIdentifiers) {
  auto toks = qk::tokenize("def for_ in\n");
  ASSERT_GE(toks.size(), 3u);
  EXPECT_EQ(toks[0].kind, qk::TokenKind::Keyword);
  EXPECT_EQ(toks[1].kind, qk::TokenKind::Identifier);
  EXPECT_EQ(toks[1].text, "for_");
  EXPECT_EQ(toks[2].kind, qk::TokenKind::Keyword);
}

TEST(Lexer, IndentDedentAndBracketJoining) {
  using K = qk::TokenKind;
  auto k = kinds("if x:\n    y(1,\n 2)\nz\n");
  std::vector<K> want = {K::Keyword,  K::Identifier, K::Operator, K::Newline, K::Indent,
                         K::Identifier, K::Operator, K::Number,   K::Operator, K::Number,
                         K::Operator, K::Newline,    K::Dedent,   K::Identifier, K::Newline};
  EXPECT_EQ(k, want);
}

TEST(Lexer, ColumnsAreOneBased) {
  auto toks = qk::tokenize("def f(q : qreg):\n    H(q[0])\n");
  EXPECT_EQ(toks[0].line, 1);
  EXPECT_EQ(toks[0].column, 1);
  EXPECT_EQ(toks[1].column, 5);
}

TEST(Lexer, Errors) {
  EXPECT_THROW(qk::tokenize("if x:\n\ty()\n"), qk::SourceError);
  try {
    qk::tokenize("x = 'abc\n");
    FAIL();
  } catch (const qk::SourceError& e) {
    EXPECT_EQ(e.code(), qk::ErrorCode::UnterminatedString);
    EXPECT_EQ(e.line(), 1);
  }
  try {
    qk::tokenize("if x:\n    a()\n  b()\n");
    FAIL();
  } catch (const qk::SourceError& e) {
    EXPECT_EQ(e.code(), qk::ErrorCode::IndentationError);
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Parser, BellSignature) {
  auto ast = qk::parse_kernel_source(oracle::read_file(oracle::source_path("kernels/bell.qk")));
  EXPECT_EQ(ast.name, "bell");
  ASSERT_EQ(ast.params.size(), 1u);
  EXPECT_EQ(ast.params[0].name, "q");
  EXPECT_EQ(ast.params[0].type.kind, qk::TypeKind::Qreg);
  EXPECT_EQ(ast.body.size(), 3u);
}

TEST(Parser, ParameterTypes) {
  auto ast = qk::parse_kernel_source(
      "def k(q : qreg, a : float, b : int, c : List[float], d : List[PauliOperator],\n"
      "      e : KernelSignature(qreg, float), f : IntRef):\n    pass\n");
  std::vector<qk::TypeKind> want = {qk::TypeKind::Qreg,      qk::TypeKind::Float,
                                    qk::TypeKind::Int,       qk::TypeKind::ListFloat,
                                    qk::TypeKind::ListPauli, qk::TypeKind::KernelSignature,
                                    qk::TypeKind::IntRef};
  ASSERT_EQ(ast.params.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(ast.params[i].type.kind, want[i]) << i;
  EXPECT_EQ(ast.params[5].type.signature,
            (std::vector<qk::TypeKind>{qk::TypeKind::Qreg, qk::TypeKind::Float}));
}

TEST(Parser, SignatureErrors) {
  EXPECT_EQ(parse_error("def k(q, x : float):\n    pass\n"), qk::ErrorCode::MissingAnnotation);
  EXPECT_EQ(parse_error("def k(x : float, q : qreg):\n    pass\n"), qk::ErrorCode::FirstArgNotQreg);
  EXPECT_EQ(parse_error("def k(q : qreg)\n    pass\n"), qk::ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("def k(q : qreg):\n    H(q[0]\n"), qk::ErrorCode::SyntaxError);
}

TEST(Parser, CallClassification) {
  std::set<std::string> kernels{"ucc1"};
  EXPECT_EQ(qk::classify_call("CNOT", kernels).kind, qk::CallKind::Intrinsic);
  EXPECT_EQ(qk::classify_call("CNOT", kernels).base, "CX");
  EXPECT_EQ(qk::classify_call("ucc1", kernels).kind, qk::CallKind::Kernel);
  auto ctrl = qk::classify_call("ucc1.ctrl", kernels);
  EXPECT_EQ(ctrl.kind, qk::CallKind::KernelModifier);
  EXPECT_EQ(ctrl.modifier, qk::CallModifier::Ctrl);
  EXPECT_EQ(ctrl.base, "ucc1");
  EXPECT_EQ(qk::classify_call("print", kernels).kind, qk::CallKind::Classical);
  EXPECT_EQ(qk::classify_call("Z.ctrl", kernels).modifier, qk::CallModifier::Ctrl);
}

TEST(Parser, SplitKernelsFollowsTopLevelDefs) {
  auto slices = qk::split_kernels(oracle::read_file(oracle::source_path("kernels/dag.qk")));
  ASSERT_EQ(slices.size(), 4u);
  EXPECT_EQ(slices[0].name, "a");
  EXPECT_EQ(slices[3].name, "d");
  EXPECT_TRUE(slices[3].identifiers.count("c"));
  EXPECT_TRUE(slices[3].identifiers.count("b"));
  EXPECT_FALSE(slices[1].identifiers.count("a"));
}

class CorpusRoundTrip : public ::testing::TestWithParam<std::string> {};

TEST_P(CorpusRoundTrip, PrintThenParseIsIdentity) {
  auto file = oracle::read_file(oracle::source_path("kernels/" + GetParam()));
  qk::ParseContext ctx;
  for (const auto& s : qk::split_kernels(file)) ctx.kernels.insert(s.name);
  for (const auto& pk : qk::parse_file(file, ctx)) {
    std::string printed = qk::print_kernel_source(pk.ast);
    auto again = qk::parse_kernel_source(printed, ctx);
    EXPECT_EQ(again, pk.ast) << printed;
    EXPECT_EQ(qk::print_kernel_source(again), printed);
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, CorpusRoundTrip,
                         ::testing::Values("bell.qk", "dag.qk", "ccnot.qk", "ucc1.qk", "grover.qk",
                                           "deuteron.qk", "trotter.qk", "qec.qk"),
                         [](const auto& info) {
                           std::string n = info.param;
                           return n.substr(0, n.find('.'));
                         });

TEST(Parser, NestingDepth) {
  auto ast = qk::parse_kernel_source(
      "def k(q : qreg):\n    for i in range(2):\n        if i == 1:\n            X(q[0])\n");
  EXPECT_EQ(qk::nesting_depth(ast), 3);
}
