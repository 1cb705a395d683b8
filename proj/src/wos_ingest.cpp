#include <cctype>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rpyskit/corpus.hpp"

namespace rpys {

int max_valid_year() {
  static const int year = [] {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    return tm.tm_year + 1900 + 1;
  }();
  return year;
}

std::string_view to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::Auto: return "auto";
    case ExportFormat::Tagged: return "tagged";
    case ExportFormat::Tabular: return "tabular";
  }
  return "auto";
}

ExportFormat export_format_from_string(std::string_view s) {
  if (s == "auto") return ExportFormat::Auto;
  if (s == "tagged") return ExportFormat::Tagged;
  if (s == "tabular") return ExportFormat::Tabular;
  throw FormatError("unknown export format '" + std::string(s) + "' (expected auto, tagged or tabular)");
}

std::size_t Corpus::total_cited_refs() const {
  std::size_t n = 0;
  for (const auto &r : records) n += r.cited_refs.size();
  return n;
}

namespace {

void append_utf8(std::string &out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_utf16(std::string_view bytes, bool little_endian) {
  std::string out;
  out.reserve(bytes.size() / 2);
  auto unit = [&](std::size_t i) -> std::uint32_t {
    auto lo = static_cast<unsigned char>(bytes[i]);
    auto hi = static_cast<unsigned char>(bytes[i + 1]);
    return little_endian ? (hi << 8 | lo) : (lo << 8 | hi);
  };
  for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
    std::uint32_t u = unit(i);
    if (u >= 0xD800 && u < 0xDC00 && i + 3 < bytes.size()) {
      std::uint32_t lo = unit(i + 2);
      if (lo >= 0xDC00 && lo < 0xE000) {
        append_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00));
        i += 2;
        continue;
      }
    }
    append_utf8(out, (u >= 0xD800 && u < 0xE000) ? 0xFFFD : u);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

struct Line {
  std::string_view text;
  std::size_t offset;
};

std::vector<Line> split_lines(std::string_view s) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto nl = s.find('\n', pos);
    auto end = nl == std::string_view::npos ? s.size() : nl;
    auto text = s.substr(pos, end - pos);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back({text, pos});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    auto piece = trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (p == std::string_view::npos) break;
    start = p + sep.size();
  }
  return out;
}

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Fields of one record, keyed by two-letter WoS tag.
using FieldMap = std::map<std::string, std::vector<std::string>, std::less<>>;

class RecordBuilder {
 public:
  explicit RecordBuilder(ParsedExport &out) : out_(out) {}

  void add(FieldMap fields, std::size_t row) {
    CitingRecord rec;
    auto first = [&](std::string_view tag) -> std::string {
      auto it = fields.find(tag);
      if (it == fields.end() || it->second.empty()) return {};
      return std::string(trim(it->second.front()));
    };
    auto joined = [&](std::string_view tag) -> std::string {
      auto it = fields.find(tag);
      if (it == fields.end()) return {};
      return join(it->second, " ");
    };

    std::string py = first("PY");
    if (!py.empty()) {
      int y = 0;
      bool ok = py.size() == 4;
      for (char c : py) ok = ok && std::isdigit(static_cast<unsigned char>(c));
      if (ok) y = std::stoi(py);
      if (ok && is_valid_year(y)) rec.pub_year = y;
      else out_.warnings.push_back({row, "unparseable PY '" + py + "'; year marked unknown"});
    } else {
      out_.warnings.push_back({row, "missing PY; year marked unknown"});
    }

    rec.title = joined("TI");
    rec.source = joined("SO");
    if (auto it = fields.find("CR"); it != fields.end()) {
      for (auto &cr : it->second)
        if (!is_blank(cr)) rec.cited_refs.push_back(std::move(cr));
    }
    out_.cited_refs_seen += rec.cited_refs.size();

    rec.record_id = first("UT");
    if (rec.record_id.empty()) {
      std::string au;
      if (auto it = fields.find("AU"); it != fields.end()) au = join(it->second, "; ");
      rec.record_id = synthesize_record_id(au, rec.title, py, rec.source);
    }
    if (!seen_.insert(rec.record_id).second) {
      out_.warnings.push_back({row, "duplicate record id " + rec.record_id + " dropped (" +
                                        std::to_string(rec.cited_refs.size()) + " cited refs)"});
      out_.cited_refs_dropped += rec.cited_refs.size();
      return;
    }
    out_.corpus.records.push_back(std::move(rec));
  }

 private:
  ParsedExport &out_;
  std::unordered_set<std::string> seen_;
};

void parse_tagged(std::string_view text, ParsedExport &out) {
  RecordBuilder builder(out);
  FieldMap fields;
  std::string current_tag;
  bool in_record = false;
  bool saw_ef = false;
  std::size_t record_start = 0;
  std::size_t row = 0;

  for (const auto &line : split_lines(text)) {
    if (saw_ef) {
      if (!is_blank(line.text)) throw FramingError("content after EF terminator", line.offset);
      continue;
    }
    if (is_blank(line.text)) continue;

    // Continuation lines are indented by three spaces.
    if (line.text.size() >= 3 && line.text.substr(0, 3) == "   ") {
      if (!in_record || current_tag.empty()) {
        if (in_record) throw FramingError("continuation line without a field tag", line.offset);
        continue;  // header continuation
      }
      fields[current_tag].emplace_back(trim(line.text));
      continue;
    }

    std::string tag(line.text.substr(0, 2));
    std::string_view value = line.text.size() > 3 ? trim(line.text.substr(3)) : std::string_view{};

    if (tag == "ER") {
      if (!in_record) throw FramingError("ER terminator without an open record", line.offset);
      builder.add(std::move(fields), ++row);
      fields.clear();
      current_tag.clear();
      in_record = false;
    } else if (tag == "EF") {
      if (in_record) throw FramingError("record not terminated by ER before EF", line.offset);
      saw_ef = true;
    } else if (!in_record && (tag == "FN" || tag == "VR")) {
      continue;
    } else {
      if (!in_record) {
        in_record = true;
        record_start = line.offset;
      }
      current_tag = tag;
      auto &vals = fields[tag];
      if (!value.empty()) vals.emplace_back(value);
    }
  }
  if (in_record)
    throw FramingError("record starting at offset " + std::to_string(record_start) +
                           " not terminated by ER",
                       text.size());
  if (!saw_ef) throw FramingError("missing EF end-of-file terminator", text.size());
}

void parse_tabular(std::string_view text, ParsedExport &out) {
  RecordBuilder builder(out);
  auto lines = split_lines(text);
  std::size_t li = 0;
  while (li < lines.size() && is_blank(lines[li].text)) ++li;
  if (li == lines.size()) return;

  std::vector<std::string> header;
  {
    std::string_view h = lines[li].text;
    std::size_t start = 0;
    while (true) {
      auto p = h.find('\t', start);
      header.emplace_back(trim(h.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
      if (p == std::string_view::npos) break;
      start = p + 1;
    }
  }
  static const std::set<std::string, std::less<>> known{"PT", "AU", "TI", "SO", "PY", "UT", "CR"};
  bool any_known = false;
  for (const auto &h : header) any_known = any_known || known.contains(h);
  if (!any_known) throw FormatError("tabular header carries none of the WoS field tags PT AU TI SO PY UT CR");

  std::size_t row = 0;
  for (++li; li < lines.size(); ++li) {
    std::string_view l = lines[li].text;
    if (is_blank(l)) continue;
    ++row;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      auto p = l.find('\t', start);
      cells.push_back(l.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
      if (p == std::string_view::npos) break;
      start = p + 1;
    }
    // WoS pads rows with a trailing tab; only a short row is suspicious.
    if (cells.size() < header.size())
      out.warnings.push_back({row, "row has " + std::to_string(cells.size()) + " fields, header has " +
                                       std::to_string(header.size())});
    FieldMap fields;
    for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c) {
      const auto &tag = header[c];
      if (!known.contains(tag)) continue;
      std::string_view cell = trim(cells[c]);
      if (cell.empty()) continue;
      if (tag == "CR" || tag == "AU") fields[tag] = split_on(cell, "; ");
      else fields[tag] = {std::string(cell)};
    }
    builder.add(std::move(fields), row);
  }
}

}  // namespace

std::string decode_to_utf8(std::string_view bytes) {
  if (bytes.size() >= 2) {
    auto b0 = static_cast<unsigned char>(bytes[0]);
    auto b1 = static_cast<unsigned char>(bytes[1]);
    if (b0 == 0xFF && b1 == 0xFE) return decode_utf16(bytes.substr(2), true);
    if (b0 == 0xFE && b1 == 0xFF) return decode_utf16(bytes.substr(2), false);
  }
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") return std::string(bytes.substr(3));
  return std::string(bytes);
}

ParsedExport parse_export(std::string_view bytes, ExportFormat hint, std::string path) {
  ParsedExport out;
  std::string text = decode_to_utf8(bytes);

  ExportFormat fmt = hint;
  if (is_blank(text)) {
    out.corpus.provenance.push_back({std::move(path), fmt, 0});
    return out;
  }
  if (fmt == ExportFormat::Auto) {
    std::string_view sv(text);
    auto first_line = sv.substr(0, sv.find('\n'));
    if (sv.starts_with("FN ")) fmt = ExportFormat::Tagged;
    else if (first_line.find('\t') != std::string_view::npos) fmt = ExportFormat::Tabular;
    else throw FormatError("cannot determine export format: expected leading 'FN ' or a tab-delimited header");
  }
  if (fmt == ExportFormat::Tagged) parse_tagged(text, out);
  else parse_tabular(text, out);

  out.corpus.provenance.push_back({std::move(path), fmt, out.corpus.records.size()});
  return out;
}

ParsedExport parse_export_file(const std::string &path, ExportFormat hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open input file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_export(bytes, hint, path);
  } catch (const FramingError &e) {
    throw FramingError(e.detail(), e.offset(), path);
  } catch (const FormatError &e) {
    throw FormatError(path + ": " + e.what());
  }
}

Corpus corpus_union(const std::vector<Corpus> &corpora) {
  Corpus out;
  std::unordered_set<std::string> seen;
  for (const auto &c : corpora) {
    for (const auto &rec : c.records)
      if (seen.insert(rec.record_id).second) out.records.push_back(rec);
    out.provenance.insert(out.provenance.end(), c.provenance.begin(), c.provenance.end());
  }
  return out;
}

std::string synthesize_record_id(std::string_view authors, std::string_view title,
                                 std::string_view year, std::string_view source) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  mix(authors);
  mix(title);
  mix(year);
  mix(source);
  static constexpr char hex[] = "0123456789abcdef";
  std::string id = "SYN:";
  for (int shift = 60; shift >= 0; shift -= 4) id.push_back(hex[(h >> shift) & 0xF]);
  return id;
}

}  // namespace rpys
