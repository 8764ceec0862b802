#include "difftree/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "difftree/csv.hpp"
#include "difftree/errors.hpp"

namespace difftree {

using nlohmann::json;

namespace {

void dedupe_in_order(std::vector<AuthorId>& ids) {
  std::unordered_set<AuthorId> seen;
  std::vector<AuthorId> out;
  out.reserve(ids.size());
  for (auto& id : ids) {
    if (seen.insert(id).second) out.push_back(std::move(id));
  }
  ids = std::move(out);
}

void validate_merge_map(const MergeMap& merge_map) {
  for (const auto& [raw, canonical] : merge_map) {
    if (raw.empty() || canonical.empty()) {
      throw DataError("merge map contains an empty author id");
    }
    if (raw != canonical && merge_map.contains(canonical)) {
      throw DataError("merge map is chained: " + raw + " -> " + canonical + " -> " +
                      merge_map.at(canonical));
    }
  }
}

std::vector<std::string> string_list(const json& record, const char* key, bool required) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) throw std::invalid_argument(std::string("missing field ") + key);
    return {};
  }
  if (!it->is_array()) throw std::invalid_argument(std::string(key) + " is not a list");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) throw std::invalid_argument(std::string(key) + " holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Missing-value conditions that drop a record rather than flag it malformed.
bool missing_string(const json& record, const char* key) {
  const auto it = record.find(key);
  return it == record.end() || it->is_null() || (it->is_string() && it->get_ref<const std::string&>().empty());
}

}  // namespace

Corpus::Corpus(std::vector<PaperRecord> papers, PaperId innovation_id, MergeMap merge_map)
    : papers_(std::move(papers)),
      innovation_id_(std::move(innovation_id)),
      merge_map_(std::move(merge_map)) {
  validate_merge_map(merge_map_);
  index_.reserve(papers_.size());
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    const PaperRecord& p = papers_[i];
    if (p.paper_id.empty()) throw DataError("paper with empty paper_id");
    if (!index_.emplace(p.paper_id, i).second) {
      throw DataError("duplicate paper_id " + p.paper_id);
    }
    if (p.author_ids.empty()) throw DataError("paper " + p.paper_id + " has no authors");
    std::unordered_set<AuthorId> seen(p.author_ids.begin(), p.author_ids.end());
    if (seen.size() != p.author_ids.size()) {
      throw DataError("paper " + p.paper_id + " lists an author twice");
    }
    if (p.pub_date < min_pub_date() || p.pub_date > max_pub_date()) {
      throw DataError("paper " + p.paper_id + " has out of range date " + p.pub_date.to_string());
    }
  }
  const auto it = index_.find(innovation_id_);
  if (it == index_.end()) {
    throw DataError("innovation paper " + innovation_id_ + " is not in the corpus");
  }
  innovation_index_ = it->second;
  for (const auto& p : papers_) {
    for (const auto& ref : p.references) {
      if (!index_.contains(ref)) ++dangling_references_;
    }
  }
}

const PaperRecord* Corpus::find(const PaperId& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &papers_[it->second];
}

Corpus Corpus::without(const std::set<PaperId>& removed) const {
  std::vector<PaperRecord> kept;
  kept.reserve(papers_.size());
  for (const auto& p : papers_) {
    if (p.paper_id == innovation_id_ || !removed.contains(p.paper_id)) kept.push_back(p);
  }
  return Corpus(std::move(kept), innovation_id_, merge_map_);
}

LoadedCorpus read_corpus(std::istream& in, const PaperId& innovation_id) {
  LoadReport report;
  std::vector<PaperRecord> papers;
  std::unordered_set<PaperId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++report.lines;
    const auto note = [&](const std::string& what) {
      report.messages.push_back("line " + std::to_string(line_no) + ": " + what);
    };
    try {
      const json record = json::parse(line);
      if (!record.is_object()) throw std::invalid_argument("record is not an object");
      if (missing_string(record, "paper_id")) throw std::invalid_argument("missing paper_id");
      if (missing_string(record, "title") || missing_string(record, "pub_date")) {
        ++report.dropped;
        note("dropped: missing title or pub_date");
        continue;
      }
      PaperRecord p;
      p.paper_id = record.at("paper_id").get<std::string>();
      p.title = record.at("title").get<std::string>();
      p.author_ids = string_list(record, "author_ids", false);
      if (p.author_ids.empty()) {
        ++report.dropped;
        note("dropped: no authors");
        continue;
      }
      if (std::any_of(p.author_ids.begin(), p.author_ids.end(),
                      [](const std::string& a) { return a.empty(); })) {
        throw std::invalid_argument("empty author id");
      }
      dedupe_in_order(p.author_ids);
      p.references = string_list(record, "references", false);
      p.fields_of_study = string_list(record, "fields_of_study", false);

      const auto date_text = record.at("pub_date").get<std::string>();
      const auto parsed = parse_date(date_text);
      if (!parsed) throw std::invalid_argument("unparseable pub_date '" + date_text + "'");
      if (parsed->date < min_pub_date() || parsed->date > max_pub_date()) {
        throw std::invalid_argument("pub_date out of range: " + date_text);
      }
      p.pub_date = parsed->date;
      p.year_only_date = parsed->year_only;
      if (!ids.insert(p.paper_id).second) {
        throw std::invalid_argument("duplicate paper_id " + p.paper_id);
      }
      if (p.year_only_date) {
        ++report.year_only_dates;
        note("year-only pub_date normalized to " + p.pub_date.to_string());
      }
      papers.push_back(std::move(p));
    } catch (const std::exception& e) {
      ++report.malformed;
      note(std::string("malformed: ") + e.what());
    }
  }
  if (report.malformed * 10 > report.lines) {
    throw DataError("too many malformed lines: " + std::to_string(report.malformed) + " of " +
                    std::to_string(report.lines));
  }
  report.loaded = papers.size();
  return LoadedCorpus{Corpus(std::move(papers), innovation_id), std::move(report)};
}

LoadedCorpus load_corpus(const std::filesystem::path& path, const PaperId& innovation_id) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return read_corpus(in, innovation_id);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus.papers()) {
    nlohmann::ordered_json record;
    record["paper_id"] = p.paper_id;
    record["title"] = p.title;
    record["pub_date"] =
        p.year_only_date ? std::to_string(p.pub_date.year()) : p.pub_date.to_string();
    record["author_ids"] = p.author_ids;
    record["references"] = p.references;
    record["fields_of_study"] = p.fields_of_study;
    out << record.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_corpus(out, corpus);
}

MergeMap read_merge_map(std::istream& in) {
  const auto header = csv::read_row(in);
  if (!header || header->size() != 2) throw DataError("merge map needs a two-column header row");
  MergeMap merge_map;
  std::size_t row_no = 1;
  while (auto row = csv::read_row(in)) {
    ++row_no;
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 2) {
      throw DataError("merge map row " + std::to_string(row_no) + " does not have two columns");
    }
    auto [it, inserted] = merge_map.emplace((*row)[0], (*row)[1]);
    if (!inserted && it->second != (*row)[1]) {
      throw DataError("merge map maps " + (*row)[0] + " to two different ids");
    }
  }
  validate_merge_map(merge_map);
  return merge_map;
}

MergeMap load_merge_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return read_merge_map(in);
}

Corpus apply_merges(const Corpus& corpus, const MergeMap& merge_map) {
  validate_merge_map(merge_map);
  std::vector<PaperRecord> papers(corpus.papers().begin(), corpus.papers().end());
  for (auto& p : papers) {
    for (auto& a : p.author_ids) {
      if (const auto it = merge_map.find(a); it != merge_map.end()) a = it->second;
    }
    dedupe_in_order(p.author_ids);
  }
  MergeMap combined = corpus.merge_map();
  for (const auto& [raw, canonical] : merge_map) combined.insert_or_assign(raw, canonical);
  return Corpus(std::move(papers), corpus.innovation_id(), std::move(combined));
}

std::set<PaperId> Closure::members() const {
  std::set<PaperId> out = generation1;
  out.insert(generation2.begin(), generation2.end());
  return out;
}

Closure closure_generations(const Corpus& corpus) {
  Closure closure;
  const PaperId& root = corpus.innovation_id();
  for (const auto& p : corpus.papers()) {
    if (p.paper_id == root) continue;
    if (std::find(p.references.begin(), p.references.end(), root) != p.references.end()) {
      closure.generation1.insert(p.paper_id);
    }
  }
  for (const auto& p : corpus.papers()) {
    if (p.paper_id == root || closure.generation1.contains(p.paper_id)) continue;
    for (const auto& ref : p.references) {
      if (closure.generation1.contains(ref)) {
        closure.generation2.insert(p.paper_id);
        break;
      }
    }
  }
  return closure;
}

std::set<PaperId> citation_closure(const Corpus& corpus) {
  return closure_generations(corpus).members();
}

}  // namespace difftree
