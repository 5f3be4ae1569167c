#pragma once

// Hand-labelled snippets: expected sentence lengths in words under the
// default tokenizer and segmenter with the shipped lexicon for `lang`.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace fixtures {

struct SegmentationCase {
  const char* name;
  const char* lang;
  const char* text;
  std::vector<std::size_t> lengths;
};

inline void PrintTo(const SegmentationCase& c, std::ostream* os) { *os << c.name; }

inline const std::vector<SegmentationCase>& segmentation_cases() {
  static const std::vector<SegmentationCase> cases = {
      {"mr_title", "en", "Mr. Smith arrived. He left.", {3, 2}},
      {"spaced_initials", "en", "A. B. Smith wrote. Done.", {4, 1}},
      {"dr_and_mrs", "en", "Dr. Watson met Mrs. Hudson. They talked.", {5, 2}},
      {"mixed_terminators", "en", "It rained. It poured! Did it stop? No.", {2, 2, 3, 1}},
      {"marks_in_parentheses", "en", "He said (really? yes!) that it was fine. Then he left.", {8, 3}},
      {"question_in_quotes_lowercase_tag", "en", "\"Where are you going?\" asked Tom. He shrugged.", {6, 2}},
      {"exclamation_in_quotes_capital_next", "en", "\"Stop!\" He ran.", {1, 2}},
      {"ellipsis_before_capital", "en", "Well... I think so. Yes.", {1, 3, 1}},
      {"ellipsis_before_lowercase", "en", "He paused... and went on. Done.", {5, 1}},
      {"decimal_and_year", "en", "The price rose 3.5 percent in 2020. Analysts were surprised.", {7, 3}},
      {"apostrophes_and_hyphens", "en", "Don't over-think the well-known rule. It's fine.", {5, 2}},
      {"eg_abbreviation", "en", "Bring fruit, e.g. apples and pears. Thanks.", {6, 1}},
      {"three_initials", "en", "J. R. R. Tolkien wrote it. Then he rested.", {6, 3}},
      {"dotted_acronym", "en", "The U.S.A. is large. Yes.", {4, 1}},
      {"pronoun_i_ends_sentence", "en", "Then came I. The end.", {3, 2}},
      {"saint", "en", "St. Peter's Square was full. We left.", {5, 2}},
      {"terminator_runs", "en", "What?! Really?! Yes.", {1, 1, 1}},
      {"dropped_tail", "en", "First sentence here. Trailing words without end", {3}},
      {"empty_text", "en", "", {}},
      {"punctuation_only", "en", "... !!! ?", {}},
      {"parenthetical_without_marks", "en", "He left (he had to). Then rain came.", {5, 3}},
      {"period_inside_straight_quotes", "en", "He said \"no.\" Then he left.", {3, 3}},
      {"curly_quotes", "en", "“Are you sure?” she asked. “Yes.”", {5, 1}},
      {"dialogue_dash", "en", "— Yes, he said. — No.", {3, 1}},
      {"lowercase_after_period", "en", "it ended. then more.", {2, 2}},
      {"thousands_separator", "en", "We counted 1,234 birds. Wow.", {4, 1}},
      {"unicode_ellipsis", "en", "Wait… Then go. Ok.", {1, 2, 1}},
      {"bracket_then_capital", "en", "The test (did it pass?) Yes it did.", {5, 3}},
      {"abbreviation_mid_sentence", "en", "He met Dr. Who. Then he left.", {4, 3}},
      {"prof_and_mrs", "en", "Prof. Adams and Mrs. Lee agreed. Good.", {6, 1}},
      {"paragraph_resets_quotes", "en", "He said \"hello\n\nThis is new. Yes.", {6, 1}},
      {"exclamation_quote_lowercase_tag", "en", "\"Help!\" cried the boy. Nobody came.", {4, 2}},
      {"line_break_inside_sentence", "en", "This sentence\nspans two lines. Next.", {5, 1}},
      {"french_guillemets", "fr", "«Où vas-tu?» demanda-t-il. Il partit.", {3, 2}},
      {"french_monsieur", "fr", "M. Dupont est arrivé. Il pleut.", {4, 2}},
      {"german_zb", "de", "Das ist z.B. ein Test. Gut.", {5, 1}},
      {"spanish_inverted_question", "es", "¿Dónde está? No sé.", {2, 2}},
      {"polish_prof", "pl", "Prof. Nowak przyszedł. Dobrze.", {3, 1}},
      {"russian_year_abbreviation", "ru",
       "Это было в 1900 г. в Москве. "
       "Да.",
       {7, 1}},
      {"plain_declaratives", "en", "One two three. Four five. Six. Seven eight nine ten.", {3, 2, 1, 4}},
  };
  return cases;
}

}  // namespace fixtures
