#include "difftree/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "difftree/adoption.hpp"
#include "difftree/bootstrap.hpp"
#include "difftree/corpus.hpp"
#include "difftree/errors.hpp"
#include "difftree/metrics.hpp"
#include "difftree/report.hpp"
#include "difftree/synth.hpp"
#include "difftree/tree.hpp"

namespace difftree::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string input;
  std::string innovation;
  std::string merge_map;
  std::string out_dir;
  double fraction = 0.1;
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  std::size_t min_pubs = 1;
  std::string sv_variant = "mean";
  // synth
  std::string regime = "mixed";
  std::size_t n_adopters = 100;
  long spacing_days = 7;
  double viral_fraction = 0.5;
  std::string start_date = "2000-01-01";
};

struct Pipeline {
  Corpus corpus;
  LoadReport load;
  Closure closure;
  std::vector<AdopterProfile> profiles;
  DiffusionTree tree;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

template <typename Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_file(path, buf.str());
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".write-probe";
  {
    std::ofstream test(probe);
    if (!test) throw UsageError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

Pipeline load_pipeline(const Flags& f, std::ostream& err) {
  auto loaded = load_corpus(f.input, f.innovation);
  for (const auto& msg : loaded.report.messages) err << "warning: " << msg << '\n';
  Corpus corpus = std::move(loaded.corpus);
  if (!f.merge_map.empty()) corpus = apply_merges(corpus, load_merge_map(f.merge_map));

  Closure closure = closure_generations(corpus);
  if (closure.empty()) err << "warning: no paper cites " << f.innovation << '\n';
  for (const auto& id : predating_closure_papers(corpus, closure)) {
    err << "warning: closure paper " << id << " predates the innovation\n";
  }
  auto profiles = extract_adopters(corpus, closure);
  DiffusionTree tree = profiles.empty() ? DiffusionTree(corpus.innovation_id(), {})
                                        : build_tree(profiles, corpus.innovation_id());
  return Pipeline{std::move(corpus), std::move(loaded.report), std::move(closure),
                  std::move(profiles), std::move(tree)};
}

void write_tree_artifacts(const Pipeline& p, const fs::path& dir) {
  write_with(dir / "profiles.csv", [&](std::ostream& o) { write_profiles_csv(o, p.profiles); });
  write_with(dir / "tree.csv", [&](std::ostream& o) { write_tree_csv(o, p.tree); });
}

SvVariant sv_variant_of(const Flags& f) {
  const auto v = parse_sv_variant(f.sv_variant);
  if (!v) throw UsageError("--sv-variant must be mean or sum");
  return *v;
}

int cmd_ingest(const Flags& f, std::ostream& out, std::ostream& err) {
  const Pipeline p = load_pipeline(f, err);
  const fs::path dir(f.out_dir);
  write_with(dir / "corpus.jsonl", [&](std::ostream& o) { write_corpus(o, p.corpus); });
  write_with(dir / "profiles.csv", [&](std::ostream& o) { write_profiles_csv(o, p.profiles); });
  out << "ingest: " << p.corpus.size() << " papers, " << p.load.dropped << " dropped, "
      << p.load.malformed << " malformed, " << p.closure.size() << " in closure, "
      << p.profiles.size() << " adopters\n";
  return kOk;
}

int cmd_build_tree(const Flags& f, std::ostream& out, std::ostream& err) {
  const Pipeline p = load_pipeline(f, err);
  write_tree_artifacts(p, f.out_dir);
  out << "build-tree: " << p.tree.size() << " adopters, depth " << p.tree.depth() << ", "
      << (p.tree.layer_sizes().empty() ? 0 : p.tree.layer_sizes().front()) << " broadcasting\n";
  return kOk;
}

int cmd_metrics(const Flags& f, std::ostream& out, std::ostream& err) {
  const SvVariant variant = sv_variant_of(f);
  const Pipeline p = load_pipeline(f, err);
  const MetricsReport report = compute_metrics(p.tree, p.profiles, {f.min_pubs, variant});
  const fs::path dir(f.out_dir);
  write_tree_artifacts(p, dir);
  write_file(dir / "metrics.json", serialize_metrics(report));
  write_with(dir / "layers.csv", [&](std::ostream& o) { write_layers_csv(o, report); });
  write_with(dir / "years.csv", [&](std::ostream& o) { write_years_csv(o, report); });
  write_with(dir / "domains.csv", [&](std::ostream& o) { write_domains_csv(o, report); });
  if (report.anomalies > 0) {
    err << "warning: " << report.anomalies << " negative interval(s) clamped to 0\n";
  }
  out << "metrics: depth=" << report.depth << " structural_virality="
      << (report.structural_virality ? format_number(*report.structural_virality) : "absent")
      << " cascade_virality=" << format_number(report.cascade_virality) << '\n';
  return kOk;
}

int cmd_bootstrap(const Flags& f, std::ostream& out, std::ostream& err) {
  const SvVariant variant = sv_variant_of(f);
  auto loaded = load_corpus(f.input, f.innovation);
  for (const auto& msg : loaded.report.messages) err << "warning: " << msg << '\n';
  Corpus corpus = std::move(loaded.corpus);
  if (!f.merge_map.empty()) corpus = apply_merges(corpus, load_merge_map(f.merge_map));
  const BootstrapResult result =
      bootstrap_metrics(corpus, {f.fraction, f.trials, f.seed, variant});
  if (result.skipped > 0) err << "warning: " << result.skipped << " trial(s) skipped\n";
  write_file(fs::path(f.out_dir) / "bootstrap.json", serialize_bootstrap(result));
  const MeanSd& depth = result.summary.at("depth");
  out << "bootstrap: " << result.completed << " trials, depth mean=" << format_number(depth.mean)
      << " sd=" << format_number(depth.sd) << '\n';
  return kOk;
}

int cmd_export_dot(const Flags& f, std::ostream& out, std::ostream& err) {
  const Pipeline p = load_pipeline(f, err);
  write_file(fs::path(f.out_dir) / "tree.dot", export_dot(p.tree));
  out << "export-dot: " << p.tree.size() + 1 << " nodes, " << p.tree.size() << " edges\n";
  return kOk;
}

int cmd_synth(const Flags& f, std::ostream& out, std::ostream&) {
  SynthSpec spec;
  const auto regime = parse_regime(f.regime);
  if (!regime) throw UsageError("--regime must be broadcast, chain or mixed");
  spec.regime = *regime;
  spec.n_adopters = f.n_adopters;
  spec.spacing_days = f.spacing_days;
  spec.viral_fraction = f.viral_fraction;
  spec.seed = f.seed;
  const auto start = parse_date(f.start_date);
  if (!start || start->year_only) throw UsageError("--start must be YYYY-MM-DD");
  spec.start_date = start->date;

  const SynthCorpus synth = generate(spec);
  const fs::path dir(f.out_dir);
  write_with(dir / "corpus.jsonl", [&](std::ostream& o) { write_corpus(o, synth.corpus); });
  write_with(dir / "ground_truth.csv", [&](std::ostream& o) { write_ground_truth_csv(o, synth); });
  out << "synth: " << to_string(spec.regime) << ", " << synth.corpus.size() << " papers, "
      << synth.expected_parent.size() << " adopters, expected depth " << synth.expected_depth
      << ", innovation " << kSynthInnovationId << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reconstructs innovation diffusion trees from citation and coauthorship records"};
  app.require_subcommand(1);
  Flags f;

  const auto corpus_flags = [&](CLI::App* sub) {
    sub->add_option("--input", f.input, "Line-delimited JSON paper records")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--innovation", f.innovation, "paper_id of the innovation")->required();
    sub->add_option("--merge-map", f.merge_map, "CSV raw_id,canonical_id")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", f.out_dir, "Output directory")->required();
  };
  const auto metric_flags = [&](CLI::App* sub) {
    sub->add_option("--min-pubs", f.min_pubs, "Repeat-adoption publication threshold")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    sub->add_option("--sv-variant", f.sv_variant, "Structural virality: mean or sum")
        ->check(CLI::IsMember({"mean", "sum"}));
  };

  auto* ingest = app.add_subcommand("ingest", "Load, validate and merge a corpus");
  corpus_flags(ingest);
  auto* build = app.add_subcommand("build-tree", "Write adopter profiles and the diffusion tree");
  corpus_flags(build);
  auto* metrics = app.add_subcommand("metrics", "Compute the metrics report");
  corpus_flags(metrics);
  metric_flags(metrics);
  auto* boot = app.add_subcommand("bootstrap", "Resample generation-1 citations");
  corpus_flags(boot);
  boot->add_option("--fraction", f.fraction, "Share of generation-1 papers kept per trial")
      ->check(CLI::Range(0.0, 1.0));
  boot->add_option("--trials", f.trials, "Number of trials")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  boot->add_option("--seed", f.seed, "Random seed");
  boot->add_option("--sv-variant", f.sv_variant, "Structural virality: mean or sum")
      ->check(CLI::IsMember({"mean", "sum"}));
  auto* dot = app.add_subcommand("export-dot", "Write the diffusion tree as DOT");
  corpus_flags(dot);
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth->add_option("--regime", f.regime, "broadcast, chain or mixed")
      ->check(CLI::IsMember({"broadcast", "chain", "mixed"}));
  synth->add_option("--n", f.n_adopters, "Number of adopters")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  synth->add_option("--spacing", f.spacing_days, "Days between adoptions")
      ->check(CLI::Range(1L, 36500L));
  synth->add_option("--viral-fraction", f.viral_fraction, "Mixed regime virality share")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--start", f.start_date, "Innovation date YYYY-MM-DD");
  synth->add_option("--seed", f.seed, "Random seed");
  synth->add_option("--out", f.out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (boot->parsed() && !(f.fraction > 0.0)) throw UsageError("--fraction must lie in (0, 1]");
    prepare_out_dir(f.out_dir);
    if (ingest->parsed()) return cmd_ingest(f, out, err);
    if (build->parsed()) return cmd_build_tree(f, out, err);
    if (metrics->parsed()) return cmd_metrics(f, out, err);
    if (boot->parsed()) return cmd_bootstrap(f, out, err);
    if (dot->parsed()) return cmd_export_dot(f, out, err);
    if (synth->parsed()) return cmd_synth(f, out, err);
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace difftree::cli
