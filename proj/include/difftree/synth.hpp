#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "difftree/corpus.hpp"

namespace difftree {

enum class Regime { Broadcast, Chain, Mixed };

std::optional<Regime> parse_regime(std::string_view text);
std::string_view to_string(Regime regime);

struct SynthSpec {
  Regime regime = Regime::Mixed;
  std::size_t n_adopters = 100;
  Date start_date = Date::from_ymd(2000, 1, 1);
  long spacing_days = 7;
  double viral_fraction = 0.5;  // Mixed only
  std::uint64_t seed = 1;
};

struct SynthCorpus {
  Corpus corpus;
  // Expected parent of every adopter; nullopt means the root.
  std::map<AuthorId, std::optional<AuthorId>> expected_parent;
  int expected_depth = 0;
};

inline constexpr const char* kSynthInnovationId = "I";

// Deterministic in spec. Adopter k (1-based) is "a" followed by k padded to
// six digits and first adopts on start_date + k * spacing_days. The
// innovation paper is dated start_date. Throws UsageError for an invalid
// spec or when the dates would leave the accepted range.
SynthCorpus generate(const SynthSpec& spec);

// Small worked example: innovation I and papers P0..P4 by authors A..D.
Corpus fixture_f1();

// CSV: author_id,expected_parent with ROOT for root children.
void write_ground_truth_csv(std::ostream& out, const SynthCorpus& synth);

}  // namespace difftree
