#pragma once

// Text-overlap metrics between candidate and reference query text: BLEU,
// subword BLEU, exact-match METEOR, ROUGE-L and multiset token F1, with
// macro-averaged corpus aggregation.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sparqlaug {

using TokenSequence = std::vector<std::string>;

struct TokenizeOptions {
  bool lowercase = false;
};

/// Whitespace split, then `{ } ( ) , ;` detached everywhere, `.` detached
/// at token edges, `?` detached unless it starts a variable name, `#`
/// detached from comment words. `<...>` IRIs stay whole.
/// Throws EmptyInput when nothing remains.
TokenSequence tokenize_query(std::string_view text, const TokenizeOptions& options = {});

struct BleuScore {
  double score = 0.0;
  double brevity_penalty = 1.0;
  std::vector<double> precisions;
  /// Orders whose zero precision was floored at 1/(2 * candidate n-grams).
  int floored = 0;
};

/// Clipped n-gram precision BLEU with brevity penalty. Orders above the
/// candidate length are left out of the geometric mean.
BleuScore bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
               int max_n = 4);

class SubwordVocabulary {
 public:
  static constexpr std::string_view kWordBoundary = "\xE2\x96\x81";  // U+2581

  /// Throws VocabularyClosureError when some entry contains a character
  /// that is not itself an entry.
  explicit SubwordVocabulary(std::vector<std::string> pieces);

  /// One piece per line; blank lines ignored.
  static SubwordVocabulary from_text(std::string_view text);

  /// Greedy longest-match segmentation of a single word. Characters
  /// outside the vocabulary become single-character pieces.
  std::vector<std::string> segment_word(std::string_view word) const;

  /// Segments each whitespace-separated word and prefixes the boundary
  /// marker to the word's first piece.
  TokenSequence segment(std::string_view text) const;

  /// Sorted by length (descending), then lexicographically.
  const std::vector<std::string>& entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_set<std::string> lookup_;
  std::size_t max_chars_ = 0;
};

double sp_bleu(std::string_view candidate, std::string_view reference,
               const SubwordVocabulary& vocab);

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

/// Exact-match METEOR. Alignment matches every candidate token, left to
/// right, with the leftmost unused equal reference token.
double meteor(std::span<const std::string> candidate, std::span<const std::string> reference,
              const MeteorParams& params = {});

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// LCS-based F-measure; beta = 1 gives the balanced F1, larger values
/// weight recall.
double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference,
               double beta = 1.0);

double token_f1(std::span<const std::string> candidate, std::span<const std::string> reference);

struct PairScores {
  double bleu = 0.0;
  std::optional<double> sp_bleu;
  double meteor = 0.0;
  double rouge_l = 0.0;
  double f1 = 0.0;
};

struct MetricReport {
  double bleu = 0.0;
  std::optional<double> sp_bleu;
  double meteor = 0.0;
  double rouge_l = 0.0;
  double f1 = 0.0;
  std::size_t pairs = 0;
};

/// All metrics for one (candidate, reference) text pair. An empty
/// candidate scores 0 everywhere; an empty reference throws EmptyInput.
PairScores score_pair(std::string_view candidate, std::string_view reference,
                      const SubwordVocabulary* vocab = nullptr,
                      const TokenizeOptions& options = {});

/// Macro average over pairs (pairwise summation in index order).
/// Throws EmptyCorpus.
MetricReport evaluate_corpus(std::span<const std::pair<std::string, std::string>> pairs,
                             const SubwordVocabulary* vocab = nullptr,
                             const TokenizeOptions& options = {});

/// Table header and one row, scores to three decimals, `-` for an absent
/// SP-BLEU.
std::string format_report(const MetricReport& report);

}  // namespace sparqlaug
