#include <gtest/gtest.h>

#include <numeric>
#include <string>
#include <vector>

#include "segmentation_fixtures.hpp"
#include "textfract/corpus/extract.hpp"

using namespace textfract;
using namespace textfract::corpus;

namespace {

AbbreviationLexicon lexicon_for(const std::string& lang) {
  return AbbreviationLexicon::load(std::string(TEXTFRACT_DATA_DIR) + "/lexicons/" + lang + ".txt", lang);
}

std::vector<std::size_t> lengths_of(const Segmentation& seg) {
  std::vector<std::size_t> out;
  for (const auto& s : seg.sentences) out.push_back(s.word_count);
  return out;
}

std::vector<std::string> words_of(const Document& doc) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) {
    if (t.kind == TokenKind::Word) out.push_back(t.surface);
  }
  return out;
}

const char* kChapter =
    "It was a bright cold day in April, and the clocks were striking thirteen. "
    "Mr. Jones, of the Manor Farm, had locked the hen-houses for the night, but was too drunk to remember "
    "to shut the pop-holes.\n\n"
    "With the ring of light from his lantern dancing from side to side, he lurched across the yard! "
    "Was it late? It was. "
    "The old boar (he was twelve years old!) had lately grown rather stout. "
    "J. K. Jones said nothing... and the night went on. The end.";

}  // namespace

TEST(Tokenize, MinimalSentence) {
  const auto doc = tokenize("He left.");
  ASSERT_EQ(doc.tokens.size(), 3u);
  EXPECT_EQ(doc.tokens[0].kind, TokenKind::Word);
  EXPECT_EQ(doc.tokens[0].surface, "He");
  EXPECT_EQ(doc.tokens[1].surface, "left");
  EXPECT_EQ(doc.tokens[2].kind, TokenKind::Terminator);
  EXPECT_EQ(doc.tokens[2].surface, ".");
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) EXPECT_EQ(doc.tokens[i].position, i);
}

TEST(Tokenize, Empty) {
  const auto doc = tokenize("");
  EXPECT_TRUE(doc.tokens.empty());
  EXPECT_EQ(doc.source_hash, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Tokenize, HandCountedMicroText) {
  const auto doc = tokenize("Cats sleep. Dogs bark loudly!");
  std::size_t words = 0, terms = 0;
  for (const auto& t : doc.tokens) {
    words += t.kind == TokenKind::Word;
    terms += t.kind == TokenKind::Terminator;
  }
  EXPECT_EQ(words, 5u);
  EXPECT_EQ(terms, 2u);
}

TEST(Tokenize, WordShapes) {
  const auto doc = tokenize("Don't re-enter ’twas rock'n'roll 3.14 1,000 e.g. U.S. end-");
  EXPECT_EQ(words_of(doc), (std::vector<std::string>{"Don't", "re-enter", "twas", "rock'n'roll", "3.14", "1,000",
                                                     "e.g", "U.S", "end"}));
}

TEST(Tokenize, NormalizationComposes) {
  const auto doc = tokenize("Cafe\xCC\x81 au lait.");
  EXPECT_EQ(doc.tokens[0].surface, "Caf\xC3\xA9");
  EXPECT_EQ(doc.tokens[0].length, 4u);
  TokenizerConfig raw;
  raw.normalization = NormalizationForm::None;
  EXPECT_EQ(tokenize("Cafe\xCC\x81", raw).tokens[0].length, 5u);
  TokenizerConfig compat;
  compat.normalization = NormalizationForm::NFKC;
  EXPECT_EQ(tokenize("\xEF\xAC\x81ne", compat).tokens[0].surface, "fine");
}

TEST(Tokenize, EllipsisAndMarks) {
  const auto doc = tokenize("Wait... (no) «oui» — end…");
  std::vector<std::string> surfaces;
  for (const auto& t : doc.tokens) surfaces.push_back(t.surface);
  EXPECT_EQ(surfaces, (std::vector<std::string>{"Wait", "...", "(", "no", ")", "«", "oui", "»", "—", "end", "…"}));
  EXPECT_TRUE(is_ellipsis(doc.tokens[1]));
  EXPECT_TRUE(is_ellipsis(doc.tokens.back()));
  EXPECT_EQ(doc.tokens[2].kind, TokenKind::Other);
}

TEST(Tokenize, ParagraphAndSpacingFlags) {
  const auto doc = tokenize("A b.\nC d.\n\nE f.");
  EXPECT_TRUE(doc.tokens[0].paragraph_start);
  EXPECT_FALSE(doc.tokens[2].space_before);
  EXPECT_FALSE(doc.tokens[3].paragraph_start);
  EXPECT_TRUE(doc.tokens[6].paragraph_start);
  EXPECT_TRUE(doc.tokens[6].space_before);
}

TEST(Tokenize, ConfigurableSets) {
  TokenizerConfig cfg;
  cfg.terminators = U"!";
  const auto doc = tokenize("a. b! c?", cfg);
  EXPECT_EQ(doc.tokens[1].kind, TokenKind::Other);
  EXPECT_EQ(doc.tokens[3].kind, TokenKind::Terminator);
  EXPECT_EQ(doc.tokens[5].kind, TokenKind::Other);
  cfg.extra_word_chars = U"_";
  EXPECT_EQ(words_of(tokenize("snake_case x", cfg)).front(), "snake_case");
  EXPECT_NE(TokenizerConfig{}.canonical(), cfg.canonical());
}

TEST(Tokenize, InvalidUtf8ReportsOffset) {
  try {
    tokenize(std::string("ok \xC3\x28 bad"));
    FAIL();
  } catch (const DecodingError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_EQ(e.kind(), ErrorKind::Decoding);
  }
}

TEST(Tokenize, ByteOrderMarkDropped) {
  const auto doc = tokenize("\xEF\xBB\xBFHello.");
  EXPECT_EQ(doc.tokens[0].surface, "Hello");
}

TEST(Tokenize, Deterministic) {
  const auto a = tokenize(kChapter), b = tokenize(kChapter);
  ASSERT_EQ(a.tokens.size(), b.tokens.size());
  for (std::size_t i = 0; i < a.tokens.size(); ++i) EXPECT_EQ(a.tokens[i].surface, b.tokens[i].surface);
  EXPECT_EQ(a.source_hash, b.source_hash);
}

TEST(Lexicon, ParseFormat) {
  const auto lex = AbbreviationLexicon::parse("# comment\nMr.\n  Dr  \n!I\n\nvs # trailing\n", "en");
  EXPECT_EQ(lex.size(), 3u);
  EXPECT_TRUE(lex.contains("Mr"));
  EXPECT_TRUE(lex.contains("mr"));
  EXPECT_TRUE(lex.contains("DR"));
  EXPECT_TRUE(lex.contains("vs"));
  EXPECT_FALSE(lex.contains("I"));
  EXPECT_TRUE(lex.is_non_initial("I"));
  EXPECT_EQ(lex.language(), "en");
  EXPECT_THROW(AbbreviationLexicon::load("/nonexistent/lexicon.txt"), Error);
}

TEST(Lexicon, ShippedLanguagesLoad) {
  for (const char* lang : {"en", "fr", "de", "it", "es", "pl", "ru"}) EXPECT_GT(lexicon_for(lang).size(), 5u) << lang;
}

class SegmentationFixture : public ::testing::TestWithParam<fixtures::SegmentationCase> {};

TEST_P(SegmentationFixture, HandLabelledLengths) {
  const auto& c = GetParam();
  const auto seg = segment_sentences(tokenize(c.text), lexicon_for(c.lang));
  EXPECT_EQ(lengths_of(seg), c.lengths) << c.text;
}

INSTANTIATE_TEST_SUITE_P(Snippets, SegmentationFixture, ::testing::ValuesIn(fixtures::segmentation_cases()),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(Segmentation, AtLeastThirtyFixtures) { EXPECT_GE(fixtures::segmentation_cases().size(), 30u); }

TEST(Segmentation, ReportCounters) {
  const auto lex = lexicon_for("en");
  const auto seg = segment_sentences(tokenize(kChapter), lex);
  EXPECT_EQ(seg.report.lexicon_hits, 1u);
  EXPECT_EQ(seg.report.initial_hits, 2u);
  EXPECT_EQ(seg.report.bracket_suppressed, 1u);
  EXPECT_EQ(seg.report.ellipsis_continuations, 1u);
  EXPECT_EQ(seg.report.sentences, seg.sentences.size());
  EXPECT_EQ(lengths_of(seg), (std::vector<std::size_t>{14, 23, 18, 3, 2, 13, 10, 2}));
}

TEST(Segmentation, BracketRuleCanBeDisabled) {
  SegmenterConfig cfg;
  cfg.bracket_rule = false;
  const auto seg = segment_sentences(tokenize("He said (really? yes!) that it was fine."), lexicon_for("en"), cfg);
  EXPECT_EQ(lengths_of(seg), (std::vector<std::size_t>{3, 1, 4}));
}

TEST(Segmentation, UnknownLanguageFallsBackToInitials) {
  const AbbreviationLexicon none;
  EXPECT_EQ(lengths_of(segment_sentences(tokenize("Mr. Smith came. A. B. left."), none)),
            (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Segmentation, TailHandling) {
  const auto lex = lexicon_for("en");
  const auto doc = tokenize("One two. Three four five");
  const auto dropped = segment_sentences(doc, lex);
  EXPECT_EQ(dropped.report.dropped_tail_words, 3u);
  EXPECT_FALSE(dropped.report.tail_emitted);
  SegmenterConfig keep;
  keep.keep_unterminated_tail = true;
  const auto kept = segment_sentences(doc, lex, keep);
  ASSERT_EQ(kept.sentences.size(), 2u);
  EXPECT_FALSE(kept.sentences.back().terminated);
  EXPECT_TRUE(kept.report.tail_emitted);
}

TEST(Segmentation, SpansAreOrderedAndDisjoint) {
  const auto doc = tokenize(kChapter);
  const auto seg = segment_sentences(doc, lexicon_for("en"));
  std::size_t prev_end = 0;
  std::size_t words = 0;
  for (const auto& s : seg.sentences) {
    EXPECT_GE(s.begin, prev_end);
    EXPECT_LT(s.begin, s.end);
    prev_end = s.end;
    words += s.word_count;
  }
  EXPECT_EQ(words, doc.word_count());
}

TEST(SentenceLengths, WordsAndCharacters) {
  const auto doc = tokenize("Mr. Smith arrived. He left.");
  const auto seg = segment_sentences(doc, lexicon_for("en"));
  const auto w = sentence_length_series(seg.sentences, LengthUnit::Words);
  EXPECT_EQ(w.values, (std::vector<std::uint32_t>{3, 2}));
  const auto c = sentence_length_series(seg.sentences, LengthUnit::Characters);
  EXPECT_EQ(c.values, (std::vector<std::uint32_t>{2 + 5 + 7, 2 + 4}));
  EXPECT_FALSE(w.meets_minimum());
  EXPECT_EQ(w.source.from, 1u);
  EXPECT_EQ(w.source.to, 2u);
  EXPECT_THROW(sentence_length_series({}, LengthUnit::Words), Error);
}

TEST(SentenceLengths, HandCountedChapter) {
  const auto seg = segment_sentences(tokenize(kChapter), lexicon_for("en"));
  const auto w = sentence_length_series(seg.sentences, LengthUnit::Words, {"chapter", "", 0, 0}, 5);
  EXPECT_EQ(w.values, (std::vector<std::uint32_t>{14, 23, 18, 3, 2, 13, 10, 2}));
  EXPECT_TRUE(w.meets_minimum());
  for (auto v : w.values) EXPECT_GE(v, 1u);
}

TEST(Slice, BoundsAndConcatenation) {
  SentenceLengthSeries s;
  s.values = {5, 1, 9, 2};
  s.source = {"t", "h", 1, 4};
  EXPECT_EQ(slice_series(s, 1, 2).values, (std::vector<std::uint32_t>{5, 1}));
  EXPECT_EQ(slice_series(s, 1, 4).values, s.values);
  const auto tail = slice_series(s, 3, 4);
  EXPECT_EQ(tail.source.from, 3u);
  EXPECT_EQ(tail.source.to, 4u);
  EXPECT_EQ(slice_series(tail, 2, 2).source.from, 4u);
  for (std::size_t k = 1; k < 4; ++k) {
    auto a = slice_series(s, 1, k).values;
    const auto b = slice_series(s, k + 1, 4).values;
    a.insert(a.end(), b.begin(), b.end());
    EXPECT_EQ(a, s.values);
  }
  EXPECT_THROW(slice_series(s, 0, 2), Error);
  EXPECT_THROW(slice_series(s, 3, 2), Error);
  EXPECT_THROW(slice_series(s, 1, 5), Error);
}

TEST(Recurrence, SimpleGaps) {
  EXPECT_EQ(word_recurrence_series(tokenize("the cat the"), "the").gaps, (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(word_recurrence_series(tokenize("a a. a, a"), "a").gaps, (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(word_recurrence_series(tokenize("The x THE y the"), "the").gaps, (std::vector<std::uint32_t>{2, 2}));
  EXPECT_THROW(word_recurrence_series(tokenize("The x THE y the"), "the", false), InsufficientOccurrencesError);
}

TEST(Recurrence, InsufficientOccurrences) {
  try {
    word_recurrence_series(tokenize("the cat sat"), "the", false);
    FAIL();
  } catch (const InsufficientOccurrencesError& e) {
    EXPECT_EQ(e.count(), 1u);
  }
  EXPECT_THROW(word_recurrence_series(tokenize("cat"), "dog"), InsufficientOccurrencesError);
}

TEST(Recurrence, MatchesLinearScan) {
  const auto doc = tokenize(kChapter);
  const auto words = words_of(doc);
  std::vector<std::uint32_t> expected;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (unicode::fold_case(words[i]) != "the") continue;
    if (last >= 0) expected.push_back(static_cast<std::uint32_t>(static_cast<std::ptrdiff_t>(i) - last));
    last = static_cast<std::ptrdiff_t>(i);
  }
  const auto r = word_recurrence_series(doc, "the");
  EXPECT_EQ(r.gaps, expected);
  std::vector<std::size_t> at;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (unicode::fold_case(words[i]) == "the") at.push_back(i);
  }
  EXPECT_EQ(std::accumulate(r.gaps.begin(), r.gaps.end(), std::size_t{0}), at.back() - at.front());
}

TEST(Recurrence, SentenceEndsReproduceLengths) {
  const auto doc = tokenize(kChapter);
  const auto seg = segment_sentences(doc, lexicon_for("en"));
  const auto slv = sentence_length_series(seg.sentences, LengthUnit::Words);
  const auto ends = sentence_end_recurrence(doc, seg.sentences);
  EXPECT_EQ(ends.gaps, slv.values);
}

TEST(RankFrequency, Basic) {
  const auto t = rank_frequency(tokenize("the cat the"));
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries[0].rank, 1u);
  EXPECT_EQ(t.entries[0].surface, "the");
  EXPECT_EQ(t.entries[0].count, 2u);
  EXPECT_EQ(t.entries[1].surface, "cat");
  EXPECT_EQ(t.entries[1].rank, 2u);
}

TEST(RankFrequency, TerminatorPseudoWord) {
  const auto t = rank_frequency(tokenize("a. b."), true);
  EXPECT_EQ(t.entries[0].surface, kDefaultTerminatorPseudoWord);
  EXPECT_EQ(t.entries[0].count, 2u);
  EXPECT_EQ(t.entries[0].rank, 1u);
  const auto named = rank_frequency(tokenize("a. b? c!"), true, true, "<stop>");
  EXPECT_EQ(named.entries[0].surface, "<stop>");
  EXPECT_EQ(named.entries[0].count, 3u);
}

TEST(RankFrequency, TiesKeepFirstOccurrenceAndCountsSum) {
  const auto doc = tokenize(kChapter);
  const auto t = rank_frequency(doc, true);
  std::size_t terms = 0;
  for (const auto& tok : doc.tokens) terms += tok.kind == TokenKind::Terminator;
  EXPECT_EQ(t.total(), doc.word_count() + terms);
  for (std::size_t i = 1; i < t.entries.size(); ++i) {
    EXPECT_LE(t.entries[i].count, t.entries[i - 1].count);
    EXPECT_EQ(t.entries[i].rank, i + 1);
  }
  const auto simple = rank_frequency(tokenize("b a c a b"));
  EXPECT_EQ(simple.entries[0].surface, "b");
  EXPECT_EQ(simple.entries[1].surface, "a");
  EXPECT_EQ(simple.entries[2].surface, "c");
}

TEST(Zipf, ExactPowerLaw) {
  RankFrequencyTable t;
  for (std::size_t r = 1; r <= 2000; ++r) t.entries.push_back({r, "w" + std::to_string(r), 1000000 / r});
  const auto fit = fit_zipf(t);
  EXPECT_NEAR(fit.slope, -1.0, 1e-3);
  EXPECT_EQ(fit.rank_lo, 10u);
  EXPECT_EQ(fit.rank_hi, 1000u);
}
