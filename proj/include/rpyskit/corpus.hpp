#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rpys {

/// Earliest publication year accepted anywhere in the toolkit.
inline constexpr int kMinYear = 1500;

/// Latest accepted publication year: the current calendar year plus one.
int max_valid_year();

inline bool is_valid_year(int y) { return y >= kMinYear && y <= max_valid_year(); }

enum class ExportFormat { Auto, Tagged, Tabular };

std::string_view to_string(ExportFormat f);
ExportFormat export_format_from_string(std::string_view s);

/// One citing publication. `pub_year` is empty when PY was missing or
/// unparseable; such records still feed the cited-side spectrum.
struct CitingRecord {
  std::string record_id;
  std::optional<int> pub_year;
  std::string title;
  std::string source;
  std::vector<std::string> cited_refs;

  bool operator==(const CitingRecord &) const = default;
};

struct ProvenanceEntry {
  std::string path;
  ExportFormat format = ExportFormat::Auto;
  std::size_t record_count = 0;

  bool operator==(const ProvenanceEntry &) const = default;
};

struct Corpus {
  std::vector<CitingRecord> records;
  std::vector<ProvenanceEntry> provenance;

  std::size_t total_cited_refs() const;
  bool operator==(const Corpus &) const = default;
};

struct ParseWarning {
  std::size_t row = 0;  // 1-based record/row index within the file
  std::string message;
};

struct ParsedExport {
  Corpus corpus;
  std::vector<ParseWarning> warnings;
  /// CR entries read from every block/row, and those discarded with
  /// duplicate records: corpus.total_cited_refs() == seen - dropped.
  std::size_t cited_refs_seen = 0;
  std::size_t cited_refs_dropped = 0;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tagged export lacking ER/EF terminators.
class FramingError : public IngestError {
 public:
  FramingError(std::string detail, std::size_t offset, const std::string &path = {})
      : IngestError((path.empty() ? "" : path + ": ") + detail + " at byte offset " + std::to_string(offset)),
        detail_(std::move(detail)),
        offset_(offset) {}
  const std::string &detail() const { return detail_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

class FormatError : public IngestError {
 public:
  using IngestError::IngestError;
};

/// Decodes UTF-8 (with or without BOM) or BOM-prefixed UTF-16LE/BE to UTF-8.
std::string decode_to_utf8(std::string_view bytes);

/// Parses a Web of Science export. `path` only labels the provenance entry.
ParsedExport parse_export(std::string_view bytes, ExportFormat hint = ExportFormat::Auto,
                          std::string path = {});

ParsedExport parse_export_file(const std::string &path, ExportFormat hint = ExportFormat::Auto);

/// Merges corpora keeping the first occurrence of each record_id.
Corpus corpus_union(const std::vector<Corpus> &corpora);

/// Stable accession used when an export row has no UT value.
std::string synthesize_record_id(std::string_view authors, std::string_view title,
                                 std::string_view year, std::string_view source);

}  // namespace rpys
