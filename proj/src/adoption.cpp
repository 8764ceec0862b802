#include "difftree/adoption.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "difftree/csv.hpp"
#include "difftree/errors.hpp"

namespace difftree {

namespace {

struct AuthorPapers {
  std::vector<const PaperRecord*> all;
  std::vector<const PaperRecord*> closure;
};

AdopterProfile build_profile(const AuthorId& author, const AuthorPapers& papers,
                             const Corpus& corpus, const Closure& closure) {
  AdopterProfile profile;
  profile.author_id = author;
  profile.n_publications = papers.all.size();

  profile.t_first_paper = papers.all.front()->pub_date;
  for (const auto* p : papers.all) {
    profile.t_first_paper = std::min(profile.t_first_paper, p->pub_date);
    if (closure.generation1.contains(p->paper_id)) ++profile.n_direct_citations;
  }

  profile.t_first_adopt = papers.closure.front()->pub_date;
  bool cites_directly = false;
  for (const auto* p : papers.closure) {
    profile.t_first_adopt = std::min(profile.t_first_adopt, p->pub_date);
    cites_directly = cites_directly || closure.generation1.contains(p->paper_id);
    for (const auto& coauthor : p->author_ids) {
      if (coauthor != author) profile.coauthors.insert(coauthor);
    }
  }

  if (cites_directly) {
    profile.t_source = corpus.innovation().pub_date;
  } else {
    // Earliest generation-1 paper cited by any of x's first adopting papers.
    bool found = false;
    for (const auto* p : papers.closure) {
      if (p->pub_date != profile.t_first_adopt) continue;
      for (const auto& ref : p->references) {
        if (!closure.generation1.contains(ref)) continue;
        const Date d = corpus.find(ref)->pub_date;
        if (!found || d < profile.t_source) profile.t_source = d;
        found = true;
      }
    }
    if (!found) profile.t_source = corpus.innovation().pub_date;
  }

  profile.domain = modal_domain(papers.all);
  return profile;
}

}  // namespace

std::string modal_domain(std::span<const PaperRecord* const> papers) {
  std::map<std::string, std::size_t> counts;
  for (const auto* p : papers) {
    const std::set<std::string> tags(p->fields_of_study.begin(), p->fields_of_study.end());
    for (const auto& tag : tags) {
      if (!tag.empty()) ++counts[tag];
    }
  }
  std::string best = kUnknownDomain;
  std::size_t best_count = 0;
  for (const auto& [tag, n] : counts) {
    if (n > best_count) {
      best = tag;
      best_count = n;
    }
  }
  return best;
}

std::vector<AdopterProfile> extract_adopters(const Corpus& corpus, Exec exec) {
  return extract_adopters(corpus, closure_generations(corpus), exec);
}

std::vector<AdopterProfile> extract_adopters(const Corpus& corpus, const Closure& closure,
                                             Exec exec) {
  std::unordered_map<AuthorId, AuthorPapers> by_author;
  for (const auto& p : corpus.papers()) {
    const bool in_closure = closure.contains(p.paper_id);
    for (const auto& a : p.author_ids) {
      auto& entry = by_author[a];
      entry.all.push_back(&p);
      if (in_closure) entry.closure.push_back(&p);
    }
  }

  std::vector<const AuthorId*> adopters;
  for (const auto& [author, papers] : by_author) {
    if (!papers.closure.empty()) adopters.push_back(&author);
  }
  std::sort(adopters.begin(), adopters.end(),
            [](const AuthorId* a, const AuthorId* b) { return *a < *b; });

  const auto n = static_cast<std::ptrdiff_t>(adopters.size());
  std::vector<AdopterProfile> profiles(adopters.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      profiles[i] = build_profile(*adopters[i], by_author.at(*adopters[i]), corpus, closure);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      profiles[i] = build_profile(*adopters[i], by_author.at(*adopters[i]), corpus, closure);
    }
  }
  return profiles;
}

std::map<int, std::size_t> adopters_by_year(std::span<const AdopterProfile> profiles) {
  std::map<int, std::size_t> counts;
  for (const auto& p : profiles) ++counts[p.t_first_adopt.year()];
  return counts;
}

std::vector<PaperId> predating_closure_papers(const Corpus& corpus, const Closure& closure) {
  std::vector<PaperId> out;
  const Date released = corpus.innovation().pub_date;
  for (const auto& id : closure.members()) {
    if (corpus.find(id)->pub_date < released) out.push_back(id);
  }
  return out;
}

void write_profiles_csv(std::ostream& out, std::span<const AdopterProfile> profiles) {
  csv::write_row(out, {"author_id", "t_first_adopt", "t_first_paper", "t_source", "domain",
                       "n_direct_citations", "n_publications"});
  for (const auto& p : profiles) {
    csv::write_row(out, {p.author_id, p.t_first_adopt.to_string(), p.t_first_paper.to_string(),
                         p.t_source.to_string(), p.domain, std::to_string(p.n_direct_citations),
                         std::to_string(p.n_publications)});
  }
}

std::vector<AdopterProfile> read_profiles_csv(std::istream& in) {
  const auto header = csv::read_row(in);
  if (!header || header->size() != 7 || header->front() != "author_id") {
    throw DataError("profiles CSV: unexpected header");
  }
  const auto date = [](const std::string& text) {
    const auto parsed = parse_date(text);
    if (!parsed || parsed->year_only) throw DataError("profiles CSV: bad date " + text);
    return parsed->date;
  };
  std::vector<AdopterProfile> out;
  while (auto row = csv::read_row(in)) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 7) throw DataError("profiles CSV: row with wrong column count");
    AdopterProfile p;
    p.author_id = (*row)[0];
    p.t_first_adopt = date((*row)[1]);
    p.t_first_paper = date((*row)[2]);
    p.t_source = date((*row)[3]);
    p.domain = (*row)[4];
    try {
      p.n_direct_citations = std::stoul((*row)[5]);
      p.n_publications = std::stoul((*row)[6]);
    } catch (const std::exception&) {
      throw DataError("profiles CSV: bad count for " + p.author_id);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace difftree
