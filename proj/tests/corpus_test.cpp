#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "difftree/corpus.hpp"
#include "difftree/errors.hpp"
#include "difftree/synth.hpp"

namespace difftree {
namespace {

std::string record(const std::string& id, const std::string& date,
                   const std::string& authors, const std::string& refs = "",
                   const std::string& title = "T") {
  return R"({"paper_id": ")" + id + R"(", "title": ")" + title + R"(", "pub_date": ")" + date +
         R"(", "author_ids": [)" + authors + R"(], "references": [)" + refs +
         R"(], "fields_of_study": []})";
}

LoadedCorpus read(const std::string& text, const std::string& innovation = "I") {
  std::istringstream in(text);
  return read_corpus(in, innovation);
}

std::size_t papers_by(const Corpus& c, const std::string& author) {
  std::size_t n = 0;
  for (const auto& p : c.papers()) {
    n += std::count(p.author_ids.begin(), p.author_ids.end(), author);
  }
  return n;
}

TEST(LoadCorpusTest, WellFormedRecordsLoadWithoutDrops) {
  const auto loaded = read(record("I", "2000-01-01", R"("z")") + "\n" +
                           record("P1", "2001-01-01", R"("a")", R"("I")") + "\n" +
                           record("P2", "2002-01-01", R"("b")", R"("I")") + "\n" +
                           record("P3", "2003-01-01", R"("c")", R"("P1")") + "\n");
  EXPECT_EQ(loaded.corpus.size(), 4u);
  EXPECT_EQ(loaded.report.dropped, 0u);
  EXPECT_EQ(loaded.report.malformed, 0u);
}

TEST(LoadCorpusTest, MissingDateDropsRecord) {
  std::string text = record("I", "2000-01-01", R"("z")") + "\n";
  for (int i = 1; i <= 3; ++i) {
    text += record("P" + std::to_string(i), "2001-01-01", R"("a")", R"("I")") + "\n";
  }
  text += R"({"paper_id": "P4", "title": "T", "author_ids": ["a"], "references": ["I"]})"
          "\n";
  const auto loaded = read(text);
  EXPECT_EQ(loaded.corpus.size(), 4u);
  EXPECT_EQ(loaded.report.dropped, 1u);
  EXPECT_FALSE(loaded.corpus.contains("P4"));
}

TEST(LoadCorpusTest, MissingTitleOrAuthorsDrops) {
  const auto loaded = read(record("I", "2000-01-01", R"("z")") + "\n" +
                           record("P1", "2001-01-01", R"("a")", "", "") + "\n" +
                           record("P2", "2001-01-01", "") + "\n" +
                           R"({"paper_id": "P3", "title": null, "pub_date": "2001-01-01", "author_ids": ["a"]})" "\n");
  EXPECT_EQ(loaded.corpus.size(), 1u);
  EXPECT_EQ(loaded.report.dropped, 3u);
}

TEST(LoadCorpusTest, FixtureSerializesAndReloads) {
  std::stringstream buf;
  write_corpus(buf, fixture_f1());
  const auto loaded = read_corpus(buf, "I");
  std::set<PaperId> ids;
  for (const auto& p : loaded.corpus.papers()) ids.insert(p.paper_id);
  EXPECT_EQ(ids, (std::set<PaperId>{"I", "P0", "P1", "P2", "P3", "P4"}));
  EXPECT_EQ(loaded.corpus, fixture_f1());
}

TEST(LoadCorpusTest, MalformedLinesAreReportedWithLineNumbers) {
  std::string text = record("I", "2000-01-01", R"("z")") + "\n";
  for (int i = 1; i <= 10; ++i) {
    text += record("P" + std::to_string(i), "2001-01-01", R"("a")", R"("I")") + "\n";
  }
  text += "{not json\n";
  const auto loaded = read(text);
  EXPECT_EQ(loaded.report.malformed, 1u);
  EXPECT_EQ(loaded.corpus.size(), 11u);
  ASSERT_FALSE(loaded.report.messages.empty());
  EXPECT_NE(loaded.report.messages.back().find("line 12"), std::string::npos);
}

TEST(LoadCorpusTest, TooManyMalformedLinesAborts) {
  std::string text = record("I", "2000-01-01", R"("z")") + "\n";
  for (int i = 1; i <= 8; ++i) {
    text += record("P" + std::to_string(i), "2001-01-01", R"("a")", R"("I")") + "\n";
  }
  text += record("X", "2001-02-30", R"("a")") + "\n";  // 1 of 10: allowed
  EXPECT_NO_THROW(read(text));
  text += "[1, 2]\n";  // 2 of 11: over the limit
  EXPECT_THROW(read(text), DataError);
}

TEST(LoadCorpusTest, WrongTypesAndDuplicatesAreMalformed) {
  std::string text = record("I", "2000-01-01", R"("z")") + "\n";
  for (int i = 1; i <= 20; ++i) {
    text += record("P" + std::to_string(i), "2001-01-01", R"("a")", R"("I")") + "\n";
  }
  text += record("P1", "2001-01-01", R"("a")") + "\n";
  text += R"({"paper_id": "Q", "title": "T", "pub_date": "2001-01-01", "author_ids": "a"})" "\n";
  const auto loaded = read(text);
  EXPECT_EQ(loaded.report.malformed, 2u);
  EXPECT_EQ(loaded.corpus.size(), 21u);
}

TEST(LoadCorpusTest, OutOfRangeDateIsMalformed) {
  std::string text = record("I", "2000-01-01", R"("z")") + "\n";
  for (int i = 1; i <= 10; ++i) {
    text += record("P" + std::to_string(i), "2001-01-01", R"("a")", R"("I")") + "\n";
  }
  text += record("Old", "1899-12-31", R"("a")") + "\n";
  const auto loaded = read(text);
  EXPECT_EQ(loaded.report.malformed, 1u);
  EXPECT_FALSE(loaded.corpus.contains("Old"));
}

TEST(LoadCorpusTest, MissingInnovationAndUnreadableFileFail) {
  EXPECT_THROW(read(record("P1", "2001-01-01", R"("a")") + "\n"), DataError);
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", "I"), DataError);
}

TEST(LoadCorpusTest, YearOnlyDatesAreFlaggedAndRoundTrip) {
  const auto loaded = read(record("I", "2000", R"("z")") + "\n");
  EXPECT_EQ(loaded.report.year_only_dates, 1u);
  const PaperRecord& p = loaded.corpus.innovation();
  EXPECT_TRUE(p.year_only_date);
  EXPECT_EQ(p.pub_date, Date::from_ymd(2000, 1, 1));
  std::stringstream buf;
  write_corpus(buf, loaded.corpus);
  EXPECT_NE(buf.str().find(R"("pub_date":"2000")"), std::string::npos);
  EXPECT_EQ(read_corpus(buf, "I").corpus, loaded.corpus);
}

TEST(LoadCorpusTest, DuplicateAuthorsWithinRecordCollapse) {
  const auto loaded = read(record("I", "2000-01-01", R"("z", "y", "z")") + "\n");
  EXPECT_EQ(loaded.corpus.innovation().author_ids, (std::vector<AuthorId>{"z", "y"}));
}

TEST(CorpusTest, DanglingReferencesAreKeptAndCounted) {
  const auto loaded = read(record("I", "2000-01-01", R"("z")") + "\n" +
                           record("P1", "2001-01-01", R"("a")", R"("I", "GONE")") + "\n" +
                           record("P2", "2002-01-01", R"("b")", R"("GONE")") + "\n");
  EXPECT_EQ(loaded.corpus.dangling_reference_count(), 2u);
  EXPECT_TRUE(loaded.corpus.is_dangling("GONE"));
  EXPECT_EQ(loaded.corpus.find("P1")->references.size(), 2u);
  EXPECT_EQ(citation_closure(loaded.corpus), (std::set<PaperId>{"P1"}));
}

TEST(CorpusTest, ConstructorRejectsInvalidRecords) {
  const Date d = Date::from_ymd(2000, 1, 1);
  EXPECT_THROW(Corpus({{"I", "t", d, false, {}, {}, {}}}, "I"), DataError);
  EXPECT_THROW(Corpus({{"I", "t", d, false, {"a", "a"}, {}, {}}}, "I"), DataError);
  EXPECT_THROW(Corpus({{"I", "t", d, false, {"a"}, {}, {}}, {"I", "t", d, false, {"b"}, {}, {}}}, "I"),
               DataError);
  EXPECT_THROW(Corpus({{"I", "t", Date::from_ymd(2100, 1, 2), false, {"a"}, {}, {}}}, "I"),
               DataError);
}

TEST(MergeTest, CollapsesMergedAuthorsWithinPaper) {
  const Corpus c({{"I", "t", Date::from_ymd(2000, 1, 1), false, {"a1", "a2"}, {}, {}}}, "I");
  const Corpus merged = apply_merges(c, {{"a2", "a1"}});
  EXPECT_EQ(merged.innovation().author_ids, (std::vector<AuthorId>{"a1"}));
}

TEST(MergeTest, EmptyMapIsIdentity) {
  const Corpus c = fixture_f1();
  EXPECT_EQ(apply_merges(c, {}), c);
}

TEST(MergeTest, MergedAuthorInheritsPapers) {
  const Date d = Date::from_ymd(2001, 1, 1);
  const Corpus c({{"I", "t", d, false, {"a1"}, {}, {}},
                  {"P1", "t", d, false, {"a3"}, {"I"}, {}},
                  {"P2", "t", d, false, {"a3", "b"}, {"I"}, {}}},
                 "I");
  const std::size_t before = papers_by(c, "a1");
  const Corpus merged = apply_merges(c, {{"a3", "a1"}});
  EXPECT_EQ(papers_by(merged, "a1"), before + 2);
  EXPECT_EQ(papers_by(merged, "a3"), 0u);
  EXPECT_EQ(merged.merge_map().at("a3"), "a1");
}

TEST(MergeTest, ChainedMapIsRejected) {
  EXPECT_THROW(apply_merges(fixture_f1(), {{"A", "B"}, {"B", "C"}}), DataError);
}

TEST(MergeTest, IdempotentOnSyntheticCorpora) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Corpus c = generate({Regime::Mixed, 40, Date::from_ymd(2000, 1, 1), 3, 0.6, seed}).corpus;
    MergeMap m;
    for (std::size_t k = 2; k <= 40; k += 3 + seed % 4) {
      m["a" + std::string(6 - std::to_string(k).size(), '0') + std::to_string(k)] = "a000001";
    }
    const Corpus once = apply_merges(c, m);
    EXPECT_EQ(apply_merges(once, m), once) << "seed " << seed;
  }
}

TEST(MergeMapCsvTest, ReadsHeaderAndRows) {
  std::istringstream in("raw_id,canonical_id\na2,a1\n\"x,1\",y\n");
  const MergeMap m = read_merge_map(in);
  EXPECT_EQ(m, (MergeMap{{"a2", "a1"}, {"x,1", "y"}}));
}

TEST(MergeMapCsvTest, RejectsMissingHeaderChainsAndConflicts) {
  std::istringstream empty("");
  EXPECT_THROW(read_merge_map(empty), DataError);
  std::istringstream chain("raw,canonical\na,b\nb,c\n");
  EXPECT_THROW(read_merge_map(chain), DataError);
  std::istringstream conflict("raw,canonical\na,b\na,c\n");
  EXPECT_THROW(read_merge_map(conflict), DataError);
  std::istringstream ragged("raw,canonical\na,b,c\n");
  EXPECT_THROW(read_merge_map(ragged), DataError);
}

TEST(ClosureTest, EmptyWhenNobodyCites) {
  const Date d = Date::from_ymd(2001, 1, 1);
  const Corpus c({{"I", "t", d, false, {"a"}, {}, {}}, {"P", "t", d, false, {"b"}, {"X"}, {}}},
                 "I");
  EXPECT_TRUE(citation_closure(c).empty());
}

TEST(ClosureTest, FixtureClosure) {
  const Closure cl = closure_generations(fixture_f1());
  EXPECT_EQ(cl.generation1, (std::set<PaperId>{"P1", "P2", "P4"}));
  EXPECT_EQ(cl.generation2, (std::set<PaperId>{"P3"}));
  EXPECT_EQ(citation_closure(fixture_f1()), (std::set<PaperId>{"P1", "P2", "P3", "P4"}));
}

TEST(ClosureTest, PaperCitingBothGenerationsCountsOnce) {
  const Date d = Date::from_ymd(2001, 1, 1);
  const Corpus c({{"I", "t", d, false, {"a"}, {}, {}},
                  {"P1", "t", d, false, {"b"}, {"I"}, {}},
                  {"P2", "t", d, false, {"c"}, {"I", "P1"}, {}},
                  {"P3", "t", d, false, {"c"}, {"P2"}, {}},
                  {"P4", "t", d, false, {"c"}, {"P3"}, {}}},
                 "I");
  const Closure cl = closure_generations(c);
  EXPECT_EQ(cl.generation1, (std::set<PaperId>{"P1", "P2"}));
  EXPECT_EQ(cl.generation2, (std::set<PaperId>{"P3"}));
  EXPECT_EQ(cl.size(), 3u);
}

TEST(ClosureTest, SubsetOfCorpusWithoutInnovation) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Corpus c = generate({Regime::Mixed, 60, Date::from_ymd(2000, 1, 1), 5, 0.5, seed}).corpus;
    for (const auto& id : citation_closure(c)) {
      EXPECT_TRUE(c.contains(id));
      EXPECT_NE(id, c.innovation_id());
    }
  }
}

TEST(CorpusTest, RoundTripsThroughLineFormat) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Corpus c = generate({Regime::Mixed, 80, Date::from_ymd(1990, 3, 4), 11, 0.4, seed}).corpus;
    std::stringstream buf;
    write_corpus(buf, c);
    const auto reloaded = read_corpus(buf, c.innovation_id());
    EXPECT_EQ(reloaded.corpus, c);
    EXPECT_EQ(reloaded.report.malformed, 0u);
  }
}

TEST(CorpusTest, WithoutKeepsInnovation) {
  const Corpus c = fixture_f1().without({"I", "P1", "P4"});
  EXPECT_TRUE(c.contains("I"));
  EXPECT_FALSE(c.contains("P1"));
  EXPECT_EQ(c.size(), 4u);
  EXPECT_TRUE(c.is_dangling("P1"));
}

}  // namespace
}  // namespace difftree
