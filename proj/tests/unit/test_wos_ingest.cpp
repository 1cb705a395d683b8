#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "rpyskit/corpus.hpp"

using namespace rpys;

namespace {

const char *kOneRecord =
    "FN Clarivate Analytics Web of Science\n"
    "VR 1.0\n"
    "PT J\n"
    "AU Hahn, H\n"
    "TI Mutations of the human homolog of Drosophila patched\n"
    "SO CELL\n"
    "PY 1996\n"
    "CR NUSSLEINVOLHARD C, 1980, NATURE, V287, P795\n"
    "   Jacob A, 1827, DUBLIN HOSP REP, V4, P232\n"
    "   GORLIN RJ, 1960, NEW ENGL J MED, V262, P908\n"
    "UT WOS:A1996UQ06600018\n"
    "ER\n"
    "\n"
    "EF\n";

std::string utf16le(const std::string &ascii) {
  std::string out = "\xFF\xFE";
  for (char c : ascii) {
    out += c;
    out += '\0';
  }
  return out;
}

}  // namespace

TEST_CASE("one tagged record with three CR lines") {
  auto p = parse_export(kOneRecord, ExportFormat::Auto, "one.txt");
  REQUIRE(p.corpus.records.size() == 1);
  const auto &r = p.corpus.records[0];
  CHECK(r.record_id == "WOS:A1996UQ06600018");
  CHECK(r.pub_year == 1996);
  CHECK(r.source == "CELL");
  CHECK(r.cited_refs.size() == 3);
  CHECK(r.cited_refs[1] == "Jacob A, 1827, DUBLIN HOSP REP, V4, P232");
  REQUIRE(p.corpus.provenance.size() == 1);
  CHECK(p.corpus.provenance[0].path == "one.txt");
  CHECK(p.corpus.provenance[0].format == ExportFormat::Tagged);
  CHECK(p.corpus.provenance[0].record_count == 1);
  CHECK(p.warnings.empty());
}

TEST_CASE("empty file gives an empty corpus with one provenance entry") {
  for (std::string text : {"", "   \n\n"}) {
    auto p = parse_export(text, ExportFormat::Auto, "empty.txt");
    CHECK(p.corpus.records.empty());
    REQUIRE(p.corpus.provenance.size() == 1);
    CHECK(p.corpus.provenance[0].record_count == 0);
  }
}

TEST_CASE("missing terminators are framing errors with an offset") {
  std::string no_er = kOneRecord;
  no_er.erase(no_er.find("ER\n"), 3);
  CHECK_THROWS_AS(parse_export(no_er), FramingError);

  std::string no_ef = kOneRecord;
  no_ef.erase(no_ef.find("EF\n"));
  try {
    parse_export(no_ef);
    FAIL("expected FramingError");
  } catch (const FramingError &e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
}

TEST_CASE("UTF-16 exports decode to the same corpus") {
  auto a = parse_export(kOneRecord);
  auto b = parse_export(utf16le(kOneRecord));
  CHECK(a.corpus.records == b.corpus.records);
  CHECK(decode_to_utf8("\xEF\xBB\xBFPT J") == "PT J");
}

TEST_CASE("tabular export with CR split on '; '") {
  std::string text =
      "PT\tAU\tTI\tSO\tPY\tCR\tUT\n"
      "J\tA, B\tFirst\tNATURE\t2001\tX A, 1990, J Y, V1, P2; Z Q, 1991, J W\tWOS:1\n"
      "J\tC, D\tSecond\tCELL\tn/a\t\tWOS:2\n";
  auto p = parse_export(text);
  CHECK(p.corpus.provenance[0].format == ExportFormat::Tabular);
  REQUIRE(p.corpus.records.size() == 2);
  CHECK(p.corpus.records[0].cited_refs.size() == 2);
  CHECK_FALSE(p.corpus.records[1].pub_year.has_value());
  CHECK(p.warnings.size() == 1);  // unparseable PY
}

TEST_CASE("tabular without known tags is a format error") {
  CHECK_THROWS_AS(parse_export("foo\tbar\n1\t2\n", ExportFormat::Tabular), FormatError);
}

TEST_CASE("records without UT get a stable synthesized id") {
  std::string text = kOneRecord;
  text.erase(text.find("UT "), std::string("UT WOS:A1996UQ06600018\n").size());
  auto a = parse_export(text);
  auto b = parse_export(text);
  REQUIRE(a.corpus.records.size() == 1);
  CHECK(a.corpus.records[0].record_id.rfind("SYN:", 0) == 0);
  CHECK(a.corpus.records[0].record_id == b.corpus.records[0].record_id);
}

TEST_CASE("duplicate ids inside one file are dropped with a warning") {
  std::string text = kOneRecord;
  std::string block = text.substr(text.find("PT J"), text.find("EF\n") - text.find("PT J"));
  text.insert(text.find("EF\n"), block);
  auto p = parse_export(text);
  CHECK(p.corpus.records.size() == 1);
  CHECK(p.warnings.size() == 1);
  CHECK(p.cited_refs_seen - p.cited_refs_dropped == p.corpus.total_cited_refs());
}

TEST_CASE("corpus_union") {
  auto c = parse_export(kOneRecord).corpus;
  CHECK(corpus_union({c, c}).records.size() == c.records.size());

  Corpus a, b;
  for (int i = 0; i < 2; ++i) a.records.push_back({"A" + std::to_string(i), 2000, "", "", {}});
  for (int i = 0; i < 3; ++i) b.records.push_back({"B" + std::to_string(i), 2000, "", "", {}});
  CHECK(corpus_union({a, b}).records.size() == 5);
}

TEST_CASE("four overlapping search fixtures: per-file counts and union") {
  auto searches = fixtures::make_overlapping_searches();
  std::vector<Corpus> parts;
  std::vector<std::size_t> counts;
  std::size_t raw = 0;
  for (const auto &s : searches) {
    auto p = parse_export(fixtures::to_tagged(s));
    counts.push_back(p.corpus.records.size());
    raw += p.corpus.records.size();
    parts.push_back(std::move(p.corpus));
  }
  CHECK(counts == std::vector<std::size_t>{1148, 244, 918, 92});
  CHECK(raw == 2402);
  CHECK(corpus_union(parts).records.size() == 1948);
}

TEST_CASE("tagged and tabular serializations parse alike") {
  auto searches = fixtures::make_overlapping_searches();
  auto a = parse_export(fixtures::to_tagged(searches[3])).corpus;
  auto b = parse_export(fixtures::to_tabular(searches[3])).corpus;
  CHECK(a.records == b.records);
}

TEST_CASE("parse_export_file names the path on failure") {
  auto dir = std::filesystem::temp_directory_path() / "rpyskit_ingest_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "broken.txt").string();
  std::ofstream(path) << "FN x\nVR 1.0\nPT J\nPY 2000\n";
  try {
    parse_export_file(path);
    FAIL("expected FramingError");
  } catch (const FramingError &e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }
  CHECK_THROWS_AS(parse_export_file((dir / "missing.txt").string()), IngestError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("year bounds") {
  CHECK(is_valid_year(1500));
  CHECK_FALSE(is_valid_year(1499));
  CHECK(is_valid_year(max_valid_year()));
  CHECK_FALSE(is_valid_year(max_valid_year() + 1));
}
