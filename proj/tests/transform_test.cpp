#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "codeaug/corpus/generator.hpp"
#include "codeaug/errors.hpp"
#include "codeaug/frontend/parser.hpp"
#include "codeaug/frontend/printer.hpp"
#include "codeaug/interp/interpreter.hpp"
#include "codeaug/transform/transform.hpp"
#include "codeaug/util/rng.hpp"
#include "support.hpp"

using namespace codeaug;

namespace {

// One for-loop, one if chain, stream output.
const char* kLoopProgram = R"(
#include <iostream>
using namespace std;
int main() {
    int n, x, best = -1000000;
    cin >> n;
    for (int i = 0; i < n; i++) {
        cin >> x;
        if (x > best) {
            best = x;
        } else if (x == best) {
            best = best;
        }
    }
    cout << best << endl;
    return 0;
}
)";

std::vector<TransformKind> all_kinds() { return {std::begin(kAllTransformKinds), std::end(kAllTransformKinds)}; }

void expect_equivalent(const Ast& a, const Ast& b, const std::vector<std::string>& inputs, const std::string& what) {
  for (const auto& in : inputs) {
    ExecResult ra = run(a, in);
    ExecResult rb = run(b, in);
    ASSERT_EQ(ra.stdout_bytes, rb.stdout_bytes) << what << " input=" << in;
    ASSERT_EQ(ra.status, rb.status) << what;
  }
}

}  // namespace

TEST(Sites, OneForLoop) {
  Ast ast = parse("int main(){int s=0; for(int i=0;i<3;i++){s+=i;} return s;}");
  EXPECT_EQ(applicable_sites(ast, TransformKind::ForToWhile).size(), 1u);
}

TEST(Sites, NoIoMeansNoApiSites) {
  Ast ast = parse("int main(){int s=0; return s;}");
  EXPECT_TRUE(applicable_sites(ast, TransformKind::IoCToCpp).empty());
  EXPECT_TRUE(applicable_sites(ast, TransformKind::IoCppToC).empty());
}

TEST(Sites, LoopProgram) {
  Ast ast = parse(kLoopProgram);
  EXPECT_EQ(applicable_sites(ast, TransformKind::ForToWhile).size(), 1u);
  EXPECT_GE(applicable_sites(ast, TransformKind::IoCppToC).size(), 1u);
}

TEST(Sites, ContinueBlocksForToWhile) {
  Ast ast = parse("int main(){for(int i=0;i<3;i++){ if(i==1) continue; printf(\"%d\", i);} return 0;}");
  EXPECT_TRUE(applicable_sites(ast, TransformKind::ForToWhile).empty());
}

TEST(Sites, DeterministicPreOrder) {
  for (const auto& s : testing_support::shipped_corpus().samples) {
    Ast ast = parse(s.code);
    for (auto k : kAllTransformKinds) {
      auto a = applicable_sites(ast, k);
      auto b = applicable_sites(ast, k);
      ASSERT_EQ(a, b);
      for (std::size_t i = 1; i < a.size(); ++i) ASSERT_LE(a[i - 1].path, a[i].path) << s.id << " " << kind_name(k);
    }
  }
}

TEST(Apply, ForToWhileOnLoopProgram) {
  Ast ast = parse(kLoopProgram);
  Rng rng(1);
  Ast out = apply(ast, applicable_sites(ast, TransformKind::ForToWhile)[0], rng);
  std::string text = print_program(out);
  EXPECT_EQ(text.find("for ("), std::string::npos);
  EXPECT_NE(text.find("while ("), std::string::npos);
  expect_equivalent(ast, out, {"5\n3 9 2 9 1\n", "1\n-4\n", "3\n0 0 0\n"}, "for_to_while");
}

TEST(Apply, DeclMergeAndSplitAreInverse) {
  Ast ast = parse("int main(){int a; int b; a = 1; b = 2; printf(\"%d\", a + b); return 0;}");
  Rng rng(3);
  auto sites = applicable_sites(ast, TransformKind::DeclMerge);
  ASSERT_EQ(sites.size(), 1u);
  Ast merged = apply(ast, sites[0], rng);
  EXPECT_NE(print_program(merged).find("int a, b;"), std::string::npos) << print_program(merged);
  auto split_sites = applicable_sites(merged, TransformKind::DeclSplit);
  ASSERT_EQ(split_sites.size(), 1u);
  Ast split = apply(merged, split_sites[0], rng);
  EXPECT_EQ(print_program(split), print_program(ast));
}

TEST(Apply, IoRoundTripPreservesBytes) {
  for (int x : {-1, 0, 7}) {
    std::string src = "int main(){int x = " + std::to_string(x) + "; printf(\"%d\\n\", x); return 0;}";
    Ast ast = parse(src);
    Rng rng(5);
    Ast cpp = apply(ast, applicable_sites(ast, TransformKind::IoCToCpp)[0], rng);
    EXPECT_NE(print_program(cpp).find("cout << x << \"\\n\";"), std::string::npos) << print_program(cpp);
    Ast back = apply(cpp, applicable_sites(cpp, TransformKind::IoCppToC)[0], rng);
    // Headers for both APIs stay; the body is the original again.
    std::string b = print_program(back), a = print_program(ast);
    ASSERT_GE(b.size(), a.size());
    EXPECT_EQ(b.substr(b.size() - a.size()), a);
    EXPECT_EQ(run(cpp, "").stdout_bytes, std::to_string(x) + "\n");
    EXPECT_EQ(run(back, "").stdout_bytes, std::to_string(x) + "\n");
  }
}

TEST(Apply, WhileToForAndIfElseSwap) {
  Ast ast = parse("int main(){int i=0; while(i<4){ if(i%2==0) printf(\"e\"); else printf(\"o\"); i++; } return 0;}");
  Rng rng(9);
  Ast f = apply(ast, applicable_sites(ast, TransformKind::WhileToFor)[0], rng);
  EXPECT_NE(print_program(f).find("for (; i < 4;)"), std::string::npos) << print_program(f);
  Ast s = apply(ast, applicable_sites(ast, TransformKind::IfElseSwap)[0], rng);
  EXPECT_NE(print_program(s).find("if (!(i % 2 == 0))"), std::string::npos) << print_program(s);
  EXPECT_EQ(run(f, "").stdout_bytes, "eoeo");
  EXPECT_EQ(run(s, "").stdout_bytes, "eoeo");
}

TEST(Apply, ReturnNormalizeAddsMissingReturn) {
  Ast ast = parse("int main(){printf(\"a\");}");
  auto sites = applicable_sites(ast, TransformKind::ReturnNormalize);
  ASSERT_FALSE(sites.empty());
  Rng rng(2);
  Ast out = apply(ast, sites[0], rng);
  EXPECT_NE(print_program(out).find("return 0;"), std::string::npos);
}

TEST(Apply, UnusedDeclNamesAreFresh) {
  for (const auto& s : testing_support::shipped_corpus().samples) {
    Ast ast = parse(s.code);
    auto before = collect_identifiers(ast);
    std::set<std::string> old(before.begin(), before.end());
    auto sites = applicable_sites(ast, TransformKind::UnusedDecl);
    ASSERT_FALSE(sites.empty()) << s.id;
    Rng rng(fnv1a(s.id));
    Ast out = apply(ast, sites[0], rng);
    auto after = collect_identifiers(out);
    std::vector<std::string> added;
    for (const auto& id : after) {
      if (!old.count(id)) added.push_back(id);
    }
    ASSERT_EQ(added.size(), 1u) << s.id;
  }
}

TEST(Apply, InapplicableSiteThrows) {
  Ast ast = parse("int main(){return 0;}");
  Rng rng(1);
  EXPECT_THROW(apply(ast, Site{{0, 0}, TransformKind::ForToWhile}, rng), InapplicableSite);
  EXPECT_THROW(apply(ast, Site{{7}, TransformKind::DeclMerge}, rng), InapplicableSite);
}

TEST(Apply, SameSeedSameResult) {
  Ast ast = parse(kLoopProgram);
  auto site = applicable_sites(ast, TransformKind::UnusedDecl)[0];
  Rng a(42), b(42);
  EXPECT_EQ(print_program(apply(ast, site, a)), print_program(apply(ast, site, b)));
}

// Every applicable single transform at every site keeps stdout and status on
// three oracle inputs per program.
TEST(Preservation, EverySiteOfEveryKindOnCorpus) {
  std::size_t checked = 0;
  for (const auto& s : testing_support::shipped_corpus().samples) {
    Ast ast = parse(s.code);
    auto inputs = oracle_inputs(s.id, 17, 3);
    std::vector<ExecResult> ref;
    for (const auto& in : inputs) ref.push_back(run(ast, in));
    for (auto k : kAllTransformKinds) {
      for (const auto& site : applicable_sites(ast, k)) {
        Rng rng(derive_seed(fnv1a(s.id), checked));
        Ast out = apply(ast, site, rng);
        Ast reparsed = parse(print_program(out));
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          ASSERT_EQ(run(reparsed, inputs[i]), ref[i]) << s.id << " " << kind_name(k);
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Sequence, MixedKindChain) {
  Ast ast = parse(kLoopProgram);
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile, TransformKind::UnusedDecl, TransformKind::BraceToggle,
                                      TransformKind::IoCppToC};
  ChainResult r = apply_sequence(ast, 3, kinds, 11, "loop");
  EXPECT_EQ(r.record.steps.size(), 3u);
  EXPECT_EQ(r.record.origin_id, "loop");
  for (const auto& st : r.record.steps) EXPECT_NE(std::find(kinds.begin(), kinds.end(), st.kind), kinds.end());
  expect_equivalent(ast, r.ast, {"5\n3 9 2 9 1\n", "2\n-1 -1\n"}, "chain");
}

TEST(Sequence, NothingApplicableThrows) {
  Ast ast = parse("int main(){return 0;}");
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile};
  EXPECT_THROW(apply_sequence(ast, 1, kinds, 1), NoApplicableTransform);
}

TEST(Sequence, EarlyStopRecordsShorterChain) {
  Ast ast = parse("int main(){int s=0; for(int i=0;i<3;i++){s+=i;} printf(\"%d\", s); return 0;}");
  std::vector<TransformKind> kinds = {TransformKind::ForToWhile};
  ChainResult r = apply_sequence(ast, 3, kinds, 1);
  EXPECT_EQ(r.record.steps.size(), 1u);
}

TEST(Sequence, ReplayReproducesBytes) {
  auto kinds = all_kinds();
  for (const auto& s : testing_support::shipped_corpus().samples) {
    Ast ast = parse(s.code);
    ChainResult r = apply_sequence(ast, 4, kinds, fnv1a(s.id), s.id);
    ASSERT_EQ(print_program(replay(ast, r.record)), print_program(r.ast)) << s.id;
  }
}

TEST(Sequence, ComposeMatchesSequentialReplay) {
  auto kinds = all_kinds();
  const auto& s = testing_support::shipped_corpus().samples[3];
  Ast ast = parse(s.code);
  ChainResult one = apply_sequence(ast, 2, kinds, 1, s.id);
  ChainResult two = apply_sequence(one.ast, 2, kinds, 2, s.id);
  TransformRecord both = compose(one.record, two.record);
  EXPECT_EQ(both.steps.size(), one.record.steps.size() + two.record.steps.size());
  EXPECT_EQ(print_program(replay(ast, both)), print_program(two.ast));
}

TEST(Kinds, NamesRoundTripAndFamilies) {
  for (auto k : kAllTransformKinds) {
    auto parsed = parse_kind(kind_name(k));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, k);
  }
  EXPECT_EQ(parse_kind_list("all").size(), std::size(kAllTransformKinds));
  for (auto k : parse_kind_list("api")) EXPECT_EQ(family_of(k), TransformFamily::Api);
  EXPECT_THROW(parse_kind_list("nope"), DataError);
}
