#include "rpyskit/cited_ref.hpp"

#include <algorithm>
#include <cctype>

namespace rpys {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(s[i])) != std::toupper(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

// Splits on commas that are not inside square brackets ("DOI [10.1/a, 10.1/b]").
std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    else if (s[i] == ']' && depth > 0) --depth;
    else if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::optional<int> parse_year_token(std::string_view tok) {
  if (tok.size() != 4) return std::nullopt;
  int y = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    y = y * 10 + (c - '0');
  }
  if (y < kMinYear || y > 2100 || !is_valid_year(y)) return std::nullopt;
  return y;
}

std::optional<std::string> designator(std::string_view field) {
  field.remove_prefix(1);
  field = trim(field);
  if (field.empty()) return std::nullopt;
  return std::string(field);
}

// "V287", "P795", "VS1"; anything with an embedded space is not a designator.
bool looks_like_designator(std::string_view field, char tag) {
  if (field.size() < 2 || std::toupper(static_cast<unsigned char>(field[0])) != tag) return false;
  return field.find(' ') == std::string_view::npos;
}

}  // namespace

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (c < 0x80 && std::ispunct(c)) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::optional<std::string> normalize_doi(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    s.remove_prefix(1);
    auto end = s.find_first_of(",]");
    s = trim(s.substr(0, end));
  }
  std::string d;
  d.reserve(s.size());
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    d.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "http://dx.doi.org/",
                                   "https://dx.doi.org/", "doi:"}) {
    if (d.starts_with(prefix)) {
      d.erase(0, prefix.size());
      break;
    }
  }
  if (!d.starts_with("10.") || d.size() <= 3) return std::nullopt;
  return d;
}

std::string digits_only(std::string_view s) {
  std::string out;
  for (char c : s)
    if (std::isdigit(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

RawCitedRef parse_cited_ref(std::string_view cr, std::string_view parent) {
  RawCitedRef ref;
  ref.original = std::string(cr);
  ref.parent_record_id = std::string(parent);

  auto fields = split_fields(cr);
  if (!fields.empty()) ref.first_author = normalize_text(fields[0]);
  if (fields.size() > 1) ref.ref_year = parse_year_token(fields[1]);
  if (fields.size() > 2 && !starts_with_ci(fields[2], "DOI ")) ref.source = normalize_text(fields[2]);

  for (std::size_t i = 2; i < fields.size(); ++i) {
    std::string_view f = fields[i];
    if (starts_with_ci(f, "DOI ")) {
      if (!ref.doi) ref.doi = normalize_doi(f.substr(4));
    } else if (i > 2 && !ref.volume && looks_like_designator(f, 'V')) {
      ref.volume = designator(f);
    } else if (i > 2 && !ref.first_page && looks_like_designator(f, 'P')) {
      ref.first_page = designator(f);
    }
  }
  return ref;
}

std::vector<RawCitedRef> extract_cited_refs(const Corpus &corpus) {
  std::vector<RawCitedRef> out;
  out.reserve(corpus.total_cited_refs());
  for (const auto &rec : corpus.records)
    for (const auto &cr : rec.cited_refs) out.push_back(parse_cited_ref(cr, rec.record_id));
  return out;
}

}  // namespace rpys
