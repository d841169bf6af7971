#include "sparqlaug/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "sparqlaug/errors.hpp"

namespace sparqlaug {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool detached(char c) {
  return c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == ';' || c == '#';
}

bool var_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

void split_chunk(std::string_view chunk, TokenSequence& out) {
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const char c = chunk[i];
    if (c == '<') {
      const std::size_t close = chunk.find('>', i + 1);
      if (close != std::string_view::npos) {
        flush();
        out.emplace_back(chunk.substr(i, close - i + 1));
        i = close;
        continue;
      }
    }
    if (detached(c)) {
      flush();
      out.emplace_back(1, c);
      continue;
    }
    if (c == '?') {
      flush();
      if (i + 1 < chunk.size() && var_char(chunk[i + 1])) {
        current += c;
      } else {
        out.emplace_back("?");
      }
      continue;
    }
    if (!current.empty() && current.front() == '?' && !var_char(c)) flush();
    if (c == '.') {
      const bool at_edge = current.empty() || i + 1 == chunk.size() ||
                           detached(chunk[i + 1]) || chunk[i + 1] == '.';
      if (at_edge) {
        flush();
        out.emplace_back(".");
        continue;
      }
    }
    current += c;
  }
  flush();
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<std::string_view> code_points(std::string_view s) {
  std::vector<std::string_view> cps;
  for (std::size_t i = 0; i < s.size();) {
    const std::size_t n = std::min(utf8_length(static_cast<unsigned char>(s[i])), s.size() - i);
    cps.push_back(s.substr(i, n));
    i += n;
  }
  return cps;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > begin) words.push_back(text.substr(begin, i - begin));
  }
  return words;
}

std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  std::unordered_map<std::string, int> counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < len; ++k) {
      key += tokens[i + k];
      key += '\x1f';
    }
    ++counts[key];
  }
  return counts;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 2) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void require_tokens(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) throw EmptyInput();
}

}  // namespace

TokenSequence tokenize_query(std::string_view text, const TokenizeOptions& options) {
  TokenSequence tokens;
  for (std::string_view chunk : split_whitespace(text)) split_chunk(chunk, tokens);
  if (tokens.empty()) throw EmptyInput();
  if (options.lowercase) {
    for (auto& t : tokens) {
      for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return tokens;
}

BleuScore bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
               int max_n) {
  require_tokens(candidate, reference);
  BleuScore result;
  const int orders = std::min<int>(max_n, static_cast<int>(candidate.size()));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    long matches = 0;
    for (const auto& [gram, count] : cand) {
      if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
    }
    const double total = static_cast<double>(candidate.size()) - n + 1;
    double p = static_cast<double>(matches) / total;
    if (matches == 0) {
      p = 1.0 / (2.0 * total);
      ++result.floored;
    }
    result.precisions.push_back(p);
    log_sum += std::log(p);
  }
  const double ratio =
      static_cast<double>(reference.size()) / static_cast<double>(candidate.size());
  result.brevity_penalty = std::min(1.0, std::exp(1.0 - ratio));
  result.score = result.brevity_penalty * std::exp(log_sum / orders);
  return result;
}

SubwordVocabulary::SubwordVocabulary(std::vector<std::string> pieces) {
  for (auto& p : pieces) {
    if (!p.empty()) lookup_.insert(std::move(p));
  }
  for (const auto& entry : lookup_) {
    const auto cps = code_points(entry);
    max_chars_ = std::max(max_chars_, cps.size());
    if (cps.size() == 1) continue;
    for (auto cp : cps) {
      if (!lookup_.contains(std::string(cp))) {
        throw VocabularyClosureError("vocabulary entry '" + entry + "' uses character '" +
                                     std::string(cp) + "' that is not an entry");
      }
    }
  }
  entries_.assign(lookup_.begin(), lookup_.end());
  std::sort(entries_.begin(), entries_.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
}

SubwordVocabulary SubwordVocabulary::from_text(std::string_view text) {
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) pieces.emplace_back(line);
    start = end + 1;
  }
  return SubwordVocabulary(std::move(pieces));
}

std::vector<std::string> SubwordVocabulary::segment_word(std::string_view word) const {
  const auto cps = code_points(word);
  std::vector<std::string> pieces;
  std::size_t i = 0;
  while (i < cps.size()) {
    const std::size_t longest = std::min(std::max<std::size_t>(max_chars_, 1), cps.size() - i);
    for (std::size_t len = longest; len >= 1; --len) {
      const std::size_t begin = static_cast<std::size_t>(cps[i].data() - word.data());
      const std::size_t end =
          static_cast<std::size_t>(cps[i + len - 1].data() - word.data()) + cps[i + len - 1].size();
      std::string piece(word.substr(begin, end - begin));
      if (len == 1 || lookup_.contains(piece)) {
        pieces.push_back(std::move(piece));
        i += len;
        break;
      }
    }
  }
  return pieces;
}

TokenSequence SubwordVocabulary::segment(std::string_view text) const {
  TokenSequence out;
  for (std::string_view word : split_whitespace(text)) {
    auto pieces = segment_word(std::string(kWordBoundary) + std::string(word));
    if (pieces.size() > 1 && pieces.front() == kWordBoundary) {
      pieces[1] = std::string(kWordBoundary) + pieces[1];
      pieces.erase(pieces.begin());
    }
    std::move(pieces.begin(), pieces.end(), std::back_inserter(out));
  }
  return out;
}

double sp_bleu(std::string_view candidate, std::string_view reference,
               const SubwordVocabulary& vocab) {
  const auto cand = vocab.segment(candidate);
  const auto ref = vocab.segment(reference);
  return bleu(cand, ref).score;
}

double meteor(std::span<const std::string> candidate, std::span<const std::string> reference,
              const MeteorParams& params) {
  require_tokens(candidate, reference);
  std::vector<bool> used(reference.size(), false);
  std::vector<long> align(candidate.size(), -1);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      if (!used[j] && reference[j] == candidate[i]) {
        used[j] = true;
        align[i] = static_cast<long>(j);
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;
  std::size_t chunks = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] < 0) continue;
    const bool continues = i > 0 && align[i - 1] >= 0 && align[i - 1] + 1 == align[i];
    if (!continues) ++chunks;
  }
  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(candidate.size());
  const double recall = m / static_cast<double>(reference.size());
  const double fmean =
      precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
  const double penalty = params.gamma * std::pow(static_cast<double>(chunks) / m, params.beta);
  return fmean * (1.0 - penalty);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row[b.size()];
}

double rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference,
               double beta) {
  require_tokens(candidate, reference);
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  return (1.0 + b2) * p * r / (r + b2 * p);
}

double token_f1(std::span<const std::string> candidate, std::span<const std::string> reference) {
  require_tokens(candidate, reference);
  std::unordered_map<std::string_view, long> counts;
  for (const auto& t : reference) ++counts[t];
  long overlap = 0;
  for (const auto& t : candidate) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

PairScores score_pair(std::string_view candidate, std::string_view reference,
                      const SubwordVocabulary* vocab, const TokenizeOptions& options) {
  const TokenSequence ref = tokenize_query(reference, options);
  PairScores scores;
  if (vocab) scores.sp_bleu = 0.0;
  TokenSequence cand;
  try {
    cand = tokenize_query(candidate, options);
  } catch (const EmptyInput&) {
    return scores;
  }
  scores.bleu = bleu(cand, ref).score;
  scores.meteor = meteor(cand, ref);
  scores.rouge_l = rouge_l(cand, ref);
  scores.f1 = token_f1(cand, ref);
  if (vocab) {
    if (options.lowercase) {
      std::string c(candidate), r(reference);
      for (auto* s : {&c, &r}) {
        for (auto& ch : *s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
      scores.sp_bleu = sp_bleu(c, r, *vocab);
    } else {
      scores.sp_bleu = sp_bleu(candidate, reference, *vocab);
    }
  }
  return scores;
}

MetricReport evaluate_corpus(std::span<const std::pair<std::string, std::string>> pairs,
                             const SubwordVocabulary* vocab, const TokenizeOptions& options) {
  if (pairs.empty()) throw EmptyCorpus();
  std::vector<double> b, s, m, r, f;
  for (const auto& [candidate, reference] : pairs) {
    const PairScores p = score_pair(candidate, reference, vocab, options);
    b.push_back(p.bleu);
    m.push_back(p.meteor);
    r.push_back(p.rouge_l);
    f.push_back(p.f1);
    if (p.sp_bleu) s.push_back(*p.sp_bleu);
  }
  const double n = static_cast<double>(pairs.size());
  MetricReport report;
  report.pairs = pairs.size();
  report.bleu = pairwise_sum(b) / n;
  report.meteor = pairwise_sum(m) / n;
  report.rouge_l = pairwise_sum(r) / n;
  report.f1 = pairwise_sum(f) / n;
  if (vocab) report.sp_bleu = pairwise_sum(s) / n;
  return report;
}

std::string format_report(const MetricReport& report) {
  auto cell = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  auto pad = [](std::string s) {
    s.resize(std::max<std::size_t>(s.size() + 1, 10), ' ');
    return s;
  };
  std::string out;
  for (const char* h : {"BLEU", "SP-BLEU", "METEOR", "ROUGE-L"}) out += pad(h);
  out += "F1-score\n";
  out += pad(cell(report.bleu)) + pad(cell(report.sp_bleu)) + pad(cell(report.meteor)) +
         pad(cell(report.rouge_l)) + cell(report.f1) + "\n";
  return out;
}

}  // namespace sparqlaug
