#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "difftree/corpus.hpp"
#include "difftree/execution.hpp"

namespace difftree {

inline constexpr const char* kUnknownDomain = "unknown";

struct AdopterProfile {
  AuthorId author_id;
  Date t_first_adopt;  // first closure paper
  Date t_first_paper;  // first paper anywhere in the corpus
  Date t_source;       // when the innovation (or the citation x learned it from) appeared
  std::set<AuthorId> coauthors;  // over closure papers only
  std::string domain = kUnknownDomain;
  std::size_t n_direct_citations = 0;
  std::size_t n_publications = 0;

  friend bool operator==(const AdopterProfile&, const AdopterProfile&) = default;
};

// One profile per author of a closure paper, sorted by author_id.
std::vector<AdopterProfile> extract_adopters(const Corpus& corpus, Exec exec = Exec::Parallel);
std::vector<AdopterProfile> extract_adopters(const Corpus& corpus, const Closure& closure,
                                             Exec exec = Exec::Parallel);

// Modal field tag over the given papers; ties go to the alphabetically
// smallest tag. Each tag counts once per paper.
std::string modal_domain(std::span<const PaperRecord* const> papers);

// Adopters keyed by the calendar year of t_first_adopt.
std::map<int, std::size_t> adopters_by_year(std::span<const AdopterProfile> profiles);

// Closure papers dated before the innovation itself.
std::vector<PaperId> predating_closure_papers(const Corpus& corpus, const Closure& closure);

// CSV: author_id,t_first_adopt,t_first_paper,t_source,domain,n_direct_citations,n_publications
// Coauthor sets are not part of the format and read back empty.
void write_profiles_csv(std::ostream& out, std::span<const AdopterProfile> profiles);
std::vector<AdopterProfile> read_profiles_csv(std::istream& in);

}  // namespace difftree
