#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sparqlaug/errors.hpp"
#include "sparqlaug/metrics.hpp"

using namespace sparqlaug;

namespace {

TokenSequence toks(std::initializer_list<const char*> words) {
  return TokenSequence(words.begin(), words.end());
}

TokenSequence random_tokens(std::mt19937& rng, std::size_t min_len, std::size_t max_len,
                            int alphabet) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  TokenSequence out(len(rng));
  for (auto& t : out) t = "t" + std::to_string(sym(rng));
  return out;
}

std::string join(const TokenSequence& t) {
  std::string s;
  for (const auto& w : t) s += (s.empty() ? "" : " ") + w;
  return s;
}

// Straightforward BLEU kept independent of the library's n-gram keys.
double bleu_oracle(const TokenSequence& c, const TokenSequence& r) {
  const int orders = std::min<int>(4, static_cast<int>(c.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    std::map<TokenSequence, int> cc, rc;
    for (std::size_t i = 0; i + n <= c.size(); ++i) ++cc[TokenSequence(c.begin() + i, c.begin() + i + n)];
    for (std::size_t i = 0; i + n <= r.size(); ++i) ++rc[TokenSequence(r.begin() + i, r.begin() + i + n)];
    int hit = 0;
    for (const auto& [g, k] : cc) hit += std::min(k, rc.count(g) ? rc[g] : 0);
    const double total = static_cast<double>(c.size() - n + 1);
    log_sum += std::log(hit > 0 ? hit / total : 1.0 / (2.0 * total));
  }
  const double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(r.size()) / c.size()));
  return bp * std::exp(log_sum / orders);
}

std::size_t chunk_oracle(const std::vector<int>& perm) {
  std::size_t chunks = 1;
  for (std::size_t i = 1; i < perm.size(); ++i) chunks += perm[i] != perm[i - 1] + 1;
  return chunks;
}

}  // namespace

TEST(TokenizeQuery, DocumentedExample) {
  EXPECT_EQ(tokenize_query("SELECT ?x WHERE { ?x a :C . }"),
            toks({"SELECT", "?x", "WHERE", "{", "?x", "a", ":C", ".", "}"}));
}

TEST(TokenizeQuery, DetachmentRules) {
  EXPECT_EQ(tokenize_query("word"), toks({"word"}));
  EXPECT_EQ(tokenize_query("{?x :p 3.5.}"), toks({"{", "?x", ":p", "3.5", ".", "}"}));
  EXPECT_EQ(tokenize_query("FILTER(?a!=?b)"), toks({"FILTER", "(", "?a", "!=", "?b", ")"}));
  EXPECT_EQ(tokenize_query("? ?x?y"), toks({"?", "?x", "?y"}));
  EXPECT_EQ(tokenize_query("?s :p ?o . # in taxon"),
            toks({"?s", ":p", "?o", ".", "#", "in", "taxon"}));
  EXPECT_EQ(tokenize_query("<http://e/a.b#c> ;,"), toks({"<http://e/a.b#c>", ";", ","}));
  EXPECT_EQ(tokenize_query("SELECT", {.lowercase = true}), toks({"select"}));
  EXPECT_THROW(tokenize_query(" \n\t "), EmptyInput);
}

TEST(Bleu, IdentityAndBrevity) {
  const auto five = toks({"a", "b", "c", "d", "e"});
  EXPECT_DOUBLE_EQ(bleu(five, five).score, 1.0);
  const auto r = bleu(toks({"a", "b", "c", "d"}), five);
  EXPECT_NEAR(r.score, std::exp(-0.25), 1e-12);
  EXPECT_EQ(r.floored, 0);
}

TEST(Bleu, DisjointIsTheSmoothingFloor) {
  const auto c = toks({"a", "b", "c", "d"});
  const auto r = bleu(c, toks({"e", "f", "g", "h"}));
  EXPECT_EQ(r.floored, 4);
  const double floor = std::pow((1.0 / 8) * (1.0 / 6) * (1.0 / 4) * (1.0 / 2), 0.25);
  EXPECT_NEAR(r.score, floor, 1e-12);
}

TEST(Bleu, ShortCandidateUsesAvailableOrders) {
  const auto r = bleu(toks({"a", "b"}), toks({"a", "b"}));
  EXPECT_EQ(r.precisions.size(), 2u);
  EXPECT_DOUBLE_EQ(r.score, 1.0);
  EXPECT_THROW(bleu({}, toks({"a"})), EmptyInput);
}

TEST(Bleu, MatchesOracleAndIsSymmetricForEqualLengths) {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto c = random_tokens(rng, 1, 12, 4);
    const auto r = random_tokens(rng, 1, 12, 4);
    EXPECT_NEAR(bleu(c, r).score, bleu_oracle(c, r), 1e-12);
    const auto r2 = random_tokens(rng, c.size(), c.size(), 4);
    EXPECT_DOUBLE_EQ(bleu(c, r2).brevity_penalty, 1.0);
    EXPECT_NEAR(bleu(c, r2).score, bleu(r2, c).score, 1e-12);
  }
}

TEST(SubwordVocabulary, GreedyLongestMatch) {
  SubwordVocabulary v({"ab", "a", "b"});
  EXPECT_EQ(v.segment_word("abab"), (std::vector<std::string>{"ab", "ab"}));
  EXPECT_EQ(v.segment_word("abz"), (std::vector<std::string>{"ab", "z"}));
  EXPECT_EQ(v.entries(), (std::vector<std::string>{"ab", "a", "b"}));
  const std::string marker(SubwordVocabulary::kWordBoundary);
  EXPECT_EQ(v.segment("ab ba"), (TokenSequence{marker + "ab", marker + "b", "a"}));
}

TEST(SubwordVocabulary, ClosureAndFileFormat) {
  EXPECT_THROW(SubwordVocabulary({"ab", "a"}), VocabularyClosureError);
  auto v = SubwordVocabulary::from_text("é\nx\néx\n\n");
  EXPECT_EQ(v.segment_word("éxé"), (std::vector<std::string>{"éx", "é"}));
}

TEST(SpBleu, IdentityVocabularyReducesToBleu) {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_tokens(rng, 1, 10, 6);
    const auto r = random_tokens(rng, 1, 10, 6);
    std::vector<std::string> pieces;
    for (const auto* seq : {&c, &r}) {
      for (const auto& t : *seq) {
        pieces.push_back(t);
        for (char ch : t) pieces.emplace_back(1, ch);
      }
    }
    const SubwordVocabulary vocab(pieces);
    EXPECT_NEAR(sp_bleu(join(c), join(r), vocab), bleu(c, r).score, 1e-12);
  }
  EXPECT_DOUBLE_EQ(sp_bleu("a b", "a b", SubwordVocabulary({"a", "b"})), 1.0);
}

TEST(Meteor, HandComputedValues) {
  EXPECT_NEAR(meteor(toks({"a", "b"}), toks({"b", "a"})), 0.5, 1e-12);
  TokenSequence ten;
  for (int i = 0; i < 10; ++i) ten.push_back("w" + std::to_string(i));
  EXPECT_NEAR(meteor(ten, ten), 0.9995, 1e-12);
  EXPECT_EQ(meteor(toks({"a"}), toks({"b"})), 0.0);
}

TEST(Meteor, MoreChunksScoreStrictlyLower) {
  for (int n = 2; n <= 6; ++n) {
    TokenSequence ref;
    std::vector<int> perm;
    for (int i = 0; i < n; ++i) {
      ref.push_back("w" + std::to_string(i));
      perm.push_back(i);
    }
    std::map<std::size_t, double> by_chunks;
    do {
      TokenSequence cand;
      for (int i : perm) cand.push_back(ref[i]);
      const double score = meteor(cand, ref);
      auto [it, fresh] = by_chunks.emplace(chunk_oracle(perm), score);
      if (!fresh) {
        EXPECT_DOUBLE_EQ(it->second, score);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto it = std::next(by_chunks.begin()); it != by_chunks.end(); ++it) {
      EXPECT_LT(it->second, std::prev(it)->second);
    }
  }
}

TEST(RougeL, HandExampleAndRecallWeighting) {
  EXPECT_DOUBLE_EQ(rouge_l(toks({"a", "b", "c", "d"}), toks({"a", "c", "b", "d"})), 0.75);
  EXPECT_EQ(rouge_l(toks({"a"}), toks({"b"})), 0.0);
  // P = 1, R = 0.5: F_beta moves toward R as beta grows.
  const auto c = toks({"a"});
  const auto r = toks({"a", "b"});
  EXPECT_NEAR(rouge_l(c, r), 2.0 / 3.0, 1e-15);
  EXPECT_LT(rouge_l(c, r, 3.0), rouge_l(c, r));
}

TEST(RougeL, ExhaustiveAgainstBruteForceLcs) {
  // All sequences over {a,b,c} up to length 5; the LCS is the longest
  // subsequence of the candidate that the reference also contains.
  std::vector<TokenSequence> all{{}};
  for (std::size_t begin = 0, len = 0; len < 5; ++len) {
    const std::size_t end = all.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const char* s : {"a", "b", "c"}) {
        auto next = all[i];
        next.push_back(s);
        all.push_back(next);
      }
    }
    begin = end;
  }
  auto is_subsequence = [](const TokenSequence& sub, const TokenSequence& seq) {
    std::size_t k = 0;
    for (const auto& t : seq) k += k < sub.size() && sub[k] == t;
    return k == sub.size();
  };
  for (const auto& c : all) {
    if (c.empty()) continue;
    for (const auto& r : all) {
      if (r.empty()) continue;
      std::size_t best = 0;
      for (unsigned mask = 0; mask < (1u << c.size()); ++mask) {
        TokenSequence sub;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (mask & (1u << i)) sub.push_back(c[i]);
        }
        if (sub.size() > best && is_subsequence(sub, r)) best = sub.size();
      }
      ASSERT_EQ(lcs_length(c, r), best);
      const double p = static_cast<double>(best) / c.size();
      const double rec = static_cast<double>(best) / r.size();
      const double f = best == 0 ? 0.0 : 2.0 * p * rec / (p + rec);
      ASSERT_EQ(rouge_l(c, r), f);
    }
  }
}

TEST(TokenF1, MultisetOverlap) {
  EXPECT_EQ(token_f1(toks({"a", "b"}), toks({"b", "c"})), 0.5);
  EXPECT_EQ(token_f1(toks({"a", "a", "b"}), toks({"a", "b", "b"})), 2.0 / 3.0);
  EXPECT_EQ(token_f1(toks({"a"}), toks({"b"})), 0.0);
  EXPECT_EQ(token_f1(toks({"a", "b"}), toks({"a", "b"})), 1.0);
}

TEST(EvaluateCorpus, MeansAndEdgeCases) {
  const std::string q = "SELECT ?a ?b ?c WHERE { ?a ?b ?c . }";
  const std::vector<std::pair<std::string, std::string>> same = {{q, q}};
  const auto one = evaluate_corpus(same);
  const auto pair = score_pair(q, q);
  EXPECT_EQ(one.bleu, pair.bleu);
  EXPECT_EQ(one.meteor, pair.meteor);
  EXPECT_FALSE(one.sp_bleu);
  EXPECT_DOUBLE_EQ(one.rouge_l, 1.0);
  EXPECT_GE(one.meteor, 0.999);

  const std::vector<std::pair<std::string, std::string>> half = {{"x y", "x y"}, {"p q", "r s"}};
  EXPECT_DOUBLE_EQ(evaluate_corpus(half).f1, 0.5);
  EXPECT_DOUBLE_EQ(evaluate_corpus(half).rouge_l, 0.5);

  EXPECT_THROW(evaluate_corpus({}), EmptyCorpus);
  EXPECT_THROW(score_pair("a", "  "), EmptyInput);
  const SubwordVocabulary vocab({"a"});
  const auto blank = score_pair("  ", "a", &vocab);
  EXPECT_EQ(blank.bleu, 0.0);
  EXPECT_EQ(blank.sp_bleu, 0.0);
}

TEST(EvaluateCorpus, LowercaseOption) {
  const std::vector<std::pair<std::string, std::string>> pairs = {{"select ?x", "SELECT ?x"}};
  EXPECT_LT(evaluate_corpus(pairs).f1, 1.0);
  EXPECT_DOUBLE_EQ(evaluate_corpus(pairs, nullptr, {.lowercase = true}).f1, 1.0);
}

TEST(FormatReport, ColumnsInTableOrder) {
  MetricReport r;
  r.bleu = 0.3521;
  r.meteor = 0.4;
  r.rouge_l = 0.6374;
  r.f1 = 0.5;
  const std::string text = format_report(r);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "BLEU      SP-BLEU   METEOR    ROUGE-L   F1-score");
  EXPECT_NE(text.find("0.352     -         0.400     0.637     0.500"), std::string::npos);
}
