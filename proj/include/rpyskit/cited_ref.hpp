#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpyskit/corpus.hpp"

namespace rpys {

/// A parsed WoS cited-reference string ("Author, Year, Source, Vvol, Ppage, DOI doi").
struct RawCitedRef {
  std::string original;
  std::string first_author;
  std::optional<int> ref_year;
  std::string source;
  std::optional<std::string> volume;
  std::optional<std::string> first_page;
  std::optional<std::string> doi;
  std::string parent_record_id;

  bool operator==(const RawCitedRef &) const = default;
};

/// Lowercase, drop ASCII punctuation, collapse runs of whitespace.
std::string normalize_text(std::string_view s);

/// Lowercases and strips resolver prefixes; empty result unless it starts with "10.".
std::optional<std::string> normalize_doi(std::string_view s);

/// Keeps only the digits of a volume or page designator.
std::string digits_only(std::string_view s);

/// Never throws. Fields that do not parse stay unset.
RawCitedRef parse_cited_ref(std::string_view cr, std::string_view parent = {});

/// Parses every CR string of every record, in record order.
std::vector<RawCitedRef> extract_cited_refs(const Corpus &corpus);

}  // namespace rpys
