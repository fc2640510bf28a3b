// Copyright 2026 The cipherpdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "cipherpdp/attributes.hpp"
#include "cipherpdp/error.hpp"
#include "cipherpdp/numeric.hpp"
#include "cipherpdp/policy.hpp"
#include "cipherpdp/reference.hpp"

namespace cipherpdp {
namespace {

constexpr const char* kWardPolicy =
    "if and(Location=Cardiology-ward, AT>9#5, AT<17#5) "
    "then can <Cardiologist, read, health-record>";

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::not_found;
}

TEST(PolicyTest, ParsesWardPolicy) {
  auto p = parse_policy(kWardPolicy);
  EXPECT_EQ(p.tuple, (SatTuple{"Cardiologist", "read", "health-record"}));
  ASSERT_TRUE(p.condition);
  ASSERT_EQ(p.condition->gate, Gate::and_gate);
  ASSERT_EQ(p.condition->children.size(), 3u);
  EXPECT_EQ(p.condition->children[0],
            ConditionTree::make_leaf("Location=Cardiology-ward"));
  EXPECT_EQ(p.condition->children[1],
            compile_numeric_comparison({"AT", CompareOp::gt, 9, 5}));
  EXPECT_EQ(p.condition->children[2],
            compile_numeric_comparison({"AT", CompareOp::lt, 17, 5}));
}

TEST(PolicyTest, WardConditionAgainstAttributes) {
  auto p = parse_policy(kWardPolicy);
  auto at = [&](std::uint64_t v, const char* where) {
    AttributeSet a;
    a.add_string("Location", where);
    a.add_numeric("AT", v, 5);
    return reference::condition_holds(p.condition, &a);
  };
  EXPECT_TRUE(at(10, "Cardiology-ward"));
  EXPECT_FALSE(at(8, "Cardiology-ward"));
  EXPECT_FALSE(at(10, "Lobby"));
  for (std::uint64_t v = 0; v < 32; ++v)
    EXPECT_EQ(at(v, "Cardiology-ward"), v > 9 && v < 17) << v;
}

TEST(PolicyTest, UnconditionalPolicy) {
  auto p = parse_policy("can <Nurse, write, chart>");
  EXPECT_FALSE(p.condition);
  EXPECT_EQ(p.tuple.action, "write");
  auto q = parse_policy("can ⟨Nurse, write, chart⟩");
  EXPECT_EQ(q.tuple, p.tuple);
}

TEST(PolicyTest, AlwaysTrueConditionDropped) {
  EXPECT_FALSE(parse_policy("if AT>=0#4 then can <a, b, c>").condition);
  EXPECT_FALSE(parse_policy("if or(true, x=1) then can <a, b, c>").condition);
  auto never = parse_policy("if AT>15#4 then can <a, b, c>");
  ASSERT_TRUE(never.condition);
  EXPECT_EQ(*never.condition, ConditionTree::make_constant(false));
}

TEST(PolicyTest, ThresholdGate) {
  auto t = parse_condition("kofn(2, a=1, b=2, c=3)");
  EXPECT_EQ(t.gate, Gate::threshold);
  EXPECT_EQ(t.k, 2u);
  EXPECT_EQ(t.children.size(), 3u);
}

TEST(PolicyTest, NestedGates) {
  auto t = parse_condition("or(and(a=1, b=2), kofn(1, c=3), d=4)");
  EXPECT_EQ(t.leaf_count(), 4u);
  EXPECT_EQ(t.children[0].gate, Gate::and_gate);
}

TEST(PolicyTest, UnicodeOperators) {
  EXPECT_EQ(parse_condition("AT≥3#3"),
            compile_numeric_comparison({"AT", CompareOp::ge, 3, 3}));
  EXPECT_EQ(parse_condition("AT<=3#3"),
            compile_numeric_comparison({"AT", CompareOp::le, 3, 3}));
}

TEST(PolicyTest, ParseErrors) {
  for (const char* bad :
       {"", "and(", "and()", "kofn(4, a=1, b=2)", "AT>9", "AT>x#5",
        "a=1 trailing", "or(a=1,, b=2)"}) {
    EXPECT_EQ(code_of([&] { parse_condition(bad); }), Errc::parse_error)
        << bad;
  }
  for (const char* bad : {"if a=1 can <a, b, c>", "can <a, b>",
                          "can <a, , c>", "can <a, b, c> extra"}) {
    EXPECT_EQ(code_of([&] { parse_policy(bad); }), Errc::parse_error) << bad;
  }
}

TEST(PolicyTest, NumericRangeFromText) {
  EXPECT_EQ(code_of([] { parse_condition("AT>40#5"); }), Errc::range_error);
}

TEST(AttributeSetTest, ElementsAndDuplicates) {
  auto a = AttributeSet::parse({"Location=Cardiology-ward", "AT=10#5"});
  EXPECT_EQ(a.elements(),
            (std::vector<std::string>{"Location=Cardiology-ward", "AT:0****",
                                      "AT:*1***", "AT:**0**", "AT:***1*",
                                      "AT:****0"}));
  EXPECT_EQ(code_of([&] { a.add("Location=Lobby"); }),
            Errc::duplicate_attribute);
  EXPECT_EQ(code_of([&] { a.add("AT=Lobby"); }), Errc::duplicate_attribute);
  EXPECT_EQ(code_of([] { AttributeSet::parse({"novalue"}); }),
            Errc::parse_error);
}

}  // namespace
}  // namespace cipherpdp
