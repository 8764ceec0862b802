#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "difftree/date.hpp"

namespace difftree {

using PaperId = std::string;
using AuthorId = std::string;

// Raw author id -> canonical author id. Must be one level deep.
using MergeMap = std::map<AuthorId, AuthorId>;

struct PaperRecord {
  PaperId paper_id;
  std::string title;
  Date pub_date;
  // The source only gave a year; pub_date holds January 1 of that year.
  bool year_only_date = false;
  std::vector<AuthorId> author_ids;
  std::vector<PaperId> references;
  std::vector<std::string> fields_of_study;

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

// Immutable, validated collection of papers around one innovation paper.
class Corpus {
 public:
  // Throws DataError on duplicate ids, empty/duplicate author lists, out of
  // range dates, or a missing innovation paper.
  Corpus(std::vector<PaperRecord> papers, PaperId innovation_id, MergeMap merge_map = {});

  std::span<const PaperRecord> papers() const { return papers_; }
  std::size_t size() const { return papers_.size(); }
  const PaperId& innovation_id() const { return innovation_id_; }
  const PaperRecord& innovation() const { return papers_[innovation_index_]; }
  const MergeMap& merge_map() const { return merge_map_; }

  // nullptr when the id is not in the corpus.
  const PaperRecord* find(const PaperId& id) const;
  bool contains(const PaperId& id) const { return index_.contains(id); }

  // References naming papers that are not part of the corpus.
  std::size_t dangling_reference_count() const { return dangling_references_; }
  bool is_dangling(const PaperId& ref) const { return !contains(ref); }

  // Copy of this corpus with the given papers removed. The innovation paper
  // is never removed.
  Corpus without(const std::set<PaperId>& removed) const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.innovation_id_ == b.innovation_id_ && a.papers_ == b.papers_ &&
           a.merge_map_ == b.merge_map_;
  }

 private:
  std::vector<PaperRecord> papers_;
  PaperId innovation_id_;
  MergeMap merge_map_;
  std::unordered_map<PaperId, std::size_t> index_;
  std::size_t innovation_index_ = 0;
  std::size_t dangling_references_ = 0;
};

struct LoadReport {
  std::size_t lines = 0;       // non-blank lines seen
  std::size_t loaded = 0;
  std::size_t dropped = 0;     // missing title, authors, or date
  std::size_t malformed = 0;   // unparseable or invalid records
  std::size_t year_only_dates = 0;
  std::vector<std::string> messages;  // one per dropped/malformed line
};

struct LoadedCorpus {
  Corpus corpus;
  LoadReport report;
};

// Reads line-delimited JSON records. Malformed lines are skipped and
// reported; more than 10% malformed lines aborts with DataError.
LoadedCorpus read_corpus(std::istream& in, const PaperId& innovation_id);
LoadedCorpus load_corpus(const std::filesystem::path& path, const PaperId& innovation_id);

// Writes the records back in the same line format. Year-only dates are
// written as "YYYY" so that reading the output reproduces the corpus.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

// Merge map CSV: header row, then raw_id,canonical_id rows. Rejects chains.
MergeMap read_merge_map(std::istream& in);
MergeMap load_merge_map(const std::filesystem::path& path);

// Rewrites merged author ids to their canonical ids and collapses duplicates
// within each author list. Throws DataError on chained maps.
Corpus apply_merges(const Corpus& corpus, const MergeMap& merge_map);

// Papers citing the innovation (generation 1) and papers citing a
// generation-1 paper (generation 2). The innovation paper is excluded.
struct Closure {
  std::set<PaperId> generation1;
  std::set<PaperId> generation2;  // disjoint from generation1

  std::set<PaperId> members() const;
  bool contains(const PaperId& id) const {
    return generation1.contains(id) || generation2.contains(id);
  }
  bool empty() const { return generation1.empty() && generation2.empty(); }
  std::size_t size() const { return generation1.size() + generation2.size(); }
};

Closure closure_generations(const Corpus& corpus);
std::set<PaperId> citation_closure(const Corpus& corpus);

}  // namespace difftree
