#include "difftree/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

#include "difftree/csv.hpp"
#include "difftree/errors.hpp"
#include "difftree/tree.hpp"

namespace difftree {

std::optional<Regime> parse_regime(std::string_view text) {
  if (text == "broadcast") return Regime::Broadcast;
  if (text == "chain") return Regime::Chain;
  if (text == "mixed") return Regime::Mixed;
  return std::nullopt;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Broadcast: return "broadcast";
    case Regime::Chain: return "chain";
    case Regime::Mixed: return "mixed";
  }
  return "mixed";
}

namespace {

const std::vector<std::string> kDomains = {"Biology", "Computer Science", "Mathematics",
                                           "Physics"};

std::string adopter_id(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "a%06zu", k);
  return buf;
}

// Small fixed-algorithm helpers over mt19937_64 so output does not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

class Builder {
 public:
  explicit Builder(const SynthSpec& spec) : spec_(spec) {
    PaperRecord innovation;
    innovation.paper_id = kSynthInnovationId;
    innovation.title = "Innovation";
    innovation.pub_date = spec.start_date;
    innovation.author_ids = {"inventor"};
    innovation.fields_of_study = {"Computer Science"};
    papers_.push_back(std::move(innovation));
  }

  Date adoption_date(std::size_t k) const {
    return spec_.start_date + static_cast<long>(k) * spec_.spacing_days;
  }

  PaperId add(std::vector<AuthorId> authors, Date date, std::vector<PaperId> refs,
              std::vector<std::string> fields) {
    PaperRecord p;
    p.paper_id = "P" + std::to_string(papers_.size());
    p.title = "Paper " + p.paper_id;
    p.pub_date = date;
    p.author_ids = std::move(authors);
    p.references = std::move(refs);
    p.fields_of_study = std::move(fields);
    papers_.push_back(std::move(p));
    return papers_.back().paper_id;
  }

  std::vector<PaperRecord> take() { return std::move(papers_); }

 private:
  const SynthSpec& spec_;
  std::vector<PaperRecord> papers_;
};

void validate(const SynthSpec& spec) {
  if (spec.n_adopters < 1) throw UsageError("synthetic corpus needs at least one adopter");
  if (spec.spacing_days < 1) throw UsageError("spacing_days must be at least 1");
  if (!(spec.viral_fraction >= 0.0 && spec.viral_fraction <= 1.0)) {
    throw UsageError("viral_fraction must lie in [0, 1]");
  }
  if (spec.start_date < min_pub_date()) throw UsageError("start_date precedes the accepted range");
  // Mixed adds follow-up papers up to two spacings past the last adopter.
  const long span = (static_cast<long>(spec.n_adopters) + 2) * spec.spacing_days;
  if (max_pub_date() - spec.start_date < span) {
    throw UsageError("synthetic dates would run past " + max_pub_date().to_string());
  }
}

int depth_of(const std::map<AuthorId, std::optional<AuthorId>>& parents) {
  std::map<AuthorId, int> layer;
  int depth = 0;
  // Ids sort in adoption order and parents adopt earlier.
  for (const auto& [id, parent] : parents) {
    const int l = parent ? layer.at(*parent) + 1 : 1;
    layer[id] = l;
    depth = std::max(depth, l);
  }
  return depth;
}

}  // namespace

SynthCorpus generate(const SynthSpec& spec) {
  validate(spec);
  Builder b(spec);
  std::map<AuthorId, std::optional<AuthorId>> parents;
  const std::size_t n = spec.n_adopters;

  switch (spec.regime) {
    case Regime::Broadcast:
      for (std::size_t k = 1; k <= n; ++k) {
        b.add({adopter_id(k)}, b.adoption_date(k), {kSynthInnovationId}, {"Computer Science"});
        parents[adopter_id(k)] = std::nullopt;
      }
      break;

    case Regime::Chain: {
      PaperId previous;
      for (std::size_t k = 1; k <= n; ++k) {
        std::vector<AuthorId> authors;
        if (k > 1) authors.push_back(adopter_id(k - 1));
        authors.push_back(adopter_id(k));
        // Odd papers cite the innovation, even papers cite their odd predecessor.
        std::vector<PaperId> refs = {k % 2 == 1 ? PaperId(kSynthInnovationId) : previous};
        previous = b.add(std::move(authors), b.adoption_date(k), std::move(refs),
                         {"Computer Science"});
        parents[adopter_id(k)] =
            k == 1 ? std::nullopt : std::optional<AuthorId>(adopter_id(k - 1));
      }
      break;
    }

    case Regime::Mixed: {
      Rng rng(spec.seed);
      std::vector<PaperId> generation1;
      std::vector<std::size_t> parent_of(n + 1, 0);  // 0: root
      // Closure papers only reach earlier adopters, so every earlier
      // coauthor of adopter k appears on k's adopting paper.
      for (std::size_t k = 1; k <= n; ++k) {
        const AuthorId self = adopter_id(k);
        const Date date = b.adoption_date(k);
        std::vector<AuthorId> authors;
        std::optional<AuthorId> parent;
        if (k > 1 && rng.chance(spec.viral_fraction)) {
          const std::size_t p = 1 + rng.below(k - 1);
          std::size_t earliest = p;
          authors.push_back(adopter_id(p));
          // Bringing in p's own parent adds no new coauthor pair, and the
          // grandparent adopted first, so it becomes k's parent instead.
          if (parent_of[p] != 0 && rng.chance(0.3)) {
            earliest = parent_of[p];
            authors.push_back(adopter_id(earliest));
          }
          parent_of[k] = earliest;
          parent = adopter_id(earliest);
        }
        authors.push_back(self);
        if (rng.chance(0.5)) std::reverse(authors.begin(), authors.end());

        const std::string domain = kDomains[rng.below(kDomains.size())];
        const bool direct = generation1.empty() || rng.chance(0.7);
        std::vector<PaperId> refs = {direct ? PaperId(kSynthInnovationId)
                                            : generation1[rng.below(generation1.size())]};
        if (rng.chance(0.1)) refs.push_back("EXT" + std::to_string(k));
        const PaperId adopting = b.add(authors, date, std::move(refs), {domain});
        if (direct) generation1.push_back(adopting);
        parents[self] = parent;

        // Earlier career outside the closure.
        if (rng.chance(0.3)) {
          const long back = 1 + static_cast<long>(rng.below(2000));
          Date earlier = date + (-back);
          if (earlier < min_pub_date()) earlier = min_pub_date();
          b.add({self}, earlier, {"EXT0"}, {kDomains[rng.below(kDomains.size())]});
        }
        // Repeat adoption after the first: solo, or again with the parent.
        if (rng.chance(0.2)) {
          std::vector<AuthorId> again = {self};
          if (parent && rng.chance(0.5)) again.insert(again.begin(), *parent);
          const Date later = date + static_cast<long>(1 + rng.below(static_cast<std::size_t>(spec.spacing_days)));
          b.add(std::move(again), later, {kSynthInnovationId}, {domain});
        }
      }
      break;
    }
  }

  SynthCorpus out{Corpus(b.take(), kSynthInnovationId), std::move(parents), 0};
  out.expected_depth = depth_of(out.expected_parent);
  return out;
}

Corpus fixture_f1() {
  const auto d = [](int y, unsigned m, unsigned day) { return Date::from_ymd(y, m, day); };
  const std::vector<std::string> cs = {"computer science"};
  std::vector<PaperRecord> papers = {
      {"I", "Innovation", d(2000, 1, 1), false, {"Z"}, {}, cs},
      {"P0", "Earlier work", d(1999, 6, 1), false, {"B"}, {}, cs},
      {"P1", "First adoption", d(2001, 1, 1), false, {"A"}, {"I"}, cs},
      {"P2", "Joint adoption", d(2002, 1, 1), false, {"A", "B"}, {"I"}, cs},
      {"P3", "Second generation", d(2003, 1, 1), false, {"B", "C"}, {"P1"}, cs},
      {"P4", "Independent adoption", d(2004, 1, 1), false, {"D"}, {"I"}, cs},
  };
  return Corpus(std::move(papers), "I");
}

void write_ground_truth_csv(std::ostream& out, const SynthCorpus& synth) {
  csv::write_row(out, {"author_id", "expected_parent"});
  for (const auto& [id, parent] : synth.expected_parent) {
    csv::write_row(out, {id, parent ? *parent : std::string(kRootLabel)});
  }
}

}  // namespace difftree
