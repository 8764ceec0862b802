#include "difftree/report.hpp"

#include "difftree/csv.hpp"
#include "difftree/errors.hpp"

namespace difftree {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double value) { return json(value).dump(); }

namespace {

ordered_json ratio_json(const Ratio& r) {
  ordered_json j;
  j["num"] = r.num();
  j["den"] = r.den();
  j["value"] = r.value();
  return j;
}

Ratio ratio_from(const json& j) { return Ratio(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>()); }

ordered_json summary_json(const Summary& s) {
  ordered_json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["median"] = s.median;
  return j;
}

Summary summary_from(const json& j) {
  return Summary{j.at("count").get<std::size_t>(), j.at("mean").get<double>(),
                 j.at("median").get<double>()};
}

ordered_json distribution_json(const RatioDistribution& d) {
  ordered_json j;
  j["ratios"] = d.ratios;
  j["summary"] = summary_json(d.summary);
  return j;
}

RatioDistribution distribution_from(const json& j) {
  return RatioDistribution{j.at("ratios").get<std::vector<double>>(), summary_from(j.at("summary"))};
}

}  // namespace

ordered_json metrics_to_json(const MetricsReport& r) {
  ordered_json doc;
  doc["innovation_id"] = r.innovation_id;
  doc["node_count"] = r.node_count;
  doc["depth"] = r.depth;
  doc["layer_sizes"] = r.layer_sizes;

  ordered_json years = ordered_json::array();
  for (const auto& [year, counts] : r.channel_by_year) {
    ordered_json row;
    row["year"] = year;
    row["broadcasting"] = counts.broadcasting;
    row["virality"] = counts.virality;
    years.push_back(std::move(row));
  }
  doc["channel_by_year"] = std::move(years);

  doc["active_members"] = r.active_members;
  ordered_json activation = ordered_json::array();
  for (const auto& a : r.activation_rate) activation.push_back(ratio_json(a));
  doc["activation_rate"] = std::move(activation);
  ordered_json growth = ordered_json::array();
  for (const auto& g : r.growth_rate) growth.push_back(g ? ratio_json(*g) : ordered_json(nullptr));
  doc["growth_rate"] = std::move(growth);

  ordered_json speed = ordered_json::array();
  for (const auto& layer : r.speed.layers) {
    ordered_json row;
    row["layer"] = layer.layer;
    row["speed"] = summary_json(layer.speed);
    row["interval_days"] = summary_json(layer.interval_days);
    speed.push_back(std::move(row));
  }
  doc["speed_by_layer"] = std::move(speed);

  ordered_json sv;
  sv["variant"] = std::string(to_string(r.sv_variant));
  sv["value"] = r.structural_virality ? ordered_json(*r.structural_virality) : ordered_json(nullptr);
  doc["structural_virality"] = std::move(sv);
  doc["cascade_virality"] = r.cascade_virality;

  ordered_json domains = ordered_json::array();
  for (const auto& [key, count] : r.domain_by_layer) {
    ordered_json row;
    row["layer"] = key.first;
    row["domain"] = key.second;
    row["count"] = count;
    domains.push_back(std::move(row));
  }
  doc["domain_by_layer"] = std::move(domains);

  ordered_json repeat;
  repeat["min_pubs"] = r.repeat_adoption.min_pubs;
  repeat["broadcasting"] = distribution_json(r.repeat_adoption.broadcasting);
  repeat["virality"] = distribution_json(r.repeat_adoption.virality);
  doc["repeat_adoption"] = std::move(repeat);
  doc["anomalies"] = r.anomalies;
  return doc;
}

MetricsReport metrics_from_json(const json& doc) {
  try {
    MetricsReport r;
    r.innovation_id = doc.at("innovation_id").get<std::string>();
    r.node_count = doc.at("node_count").get<std::size_t>();
    r.depth = doc.at("depth").get<int>();
    r.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    for (const auto& row : doc.at("channel_by_year")) {
      r.channel_by_year[row.at("year").get<int>()] =
          ChannelCounts{row.at("broadcasting").get<std::size_t>(), row.at("virality").get<std::size_t>()};
    }
    r.active_members = doc.at("active_members").get<std::vector<std::size_t>>();
    for (const auto& a : doc.at("activation_rate")) r.activation_rate.push_back(ratio_from(a));
    for (const auto& g : doc.at("growth_rate")) {
      r.growth_rate.push_back(g.is_null() ? std::nullopt : std::optional<Ratio>(ratio_from(g)));
    }
    for (const auto& row : doc.at("speed_by_layer")) {
      r.speed.layers.push_back(LayerSpeed{row.at("layer").get<int>(), summary_from(row.at("speed")),
                                          summary_from(row.at("interval_days"))});
    }
    const auto& sv = doc.at("structural_virality");
    const auto variant = parse_sv_variant(sv.at("variant").get<std::string>());
    if (!variant) throw DataError("unknown structural virality variant");
    r.sv_variant = *variant;
    if (!sv.at("value").is_null()) r.structural_virality = sv.at("value").get<double>();
    r.cascade_virality = doc.at("cascade_virality").get<double>();
    for (const auto& row : doc.at("domain_by_layer")) {
      r.domain_by_layer[{row.at("layer").get<int>(), row.at("domain").get<std::string>()}] =
          row.at("count").get<std::size_t>();
    }
    const auto& repeat = doc.at("repeat_adoption");
    r.repeat_adoption.min_pubs = repeat.at("min_pubs").get<std::size_t>();
    r.repeat_adoption.broadcasting = distribution_from(repeat.at("broadcasting"));
    r.repeat_adoption.virality = distribution_from(repeat.at("virality"));
    r.anomalies = doc.at("anomalies").get<std::size_t>();
    r.speed.anomalies = r.anomalies;
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("metrics report: ") + e.what());
  }
}

std::string serialize_metrics(const MetricsReport& report) {
  return metrics_to_json(report).dump(2) + "\n";
}

ordered_json bootstrap_to_json(const BootstrapResult& result) {
  ordered_json doc;
  doc["fraction"] = result.options.fraction;
  doc["trials"] = result.options.trials;
  doc["seed"] = result.options.seed;
  doc["sv_variant"] = std::string(to_string(result.options.sv_variant));
  doc["sample_size"] = result.sample_size;
  doc["completed"] = result.completed;
  doc["skipped"] = result.skipped;
  ordered_json summary;
  for (const char* name : {"depth", "structural_virality", "cascade_virality", "broadcast_share"}) {
    const auto it = result.summary.find(name);
    if (it == result.summary.end()) continue;
    ordered_json entry;
    entry["mean"] = it->second.mean;
    entry["sd"] = it->second.sd;
    summary[name] = std::move(entry);
  }
  doc["summary"] = std::move(summary);
  return doc;
}

std::string serialize_bootstrap(const BootstrapResult& result) {
  return bootstrap_to_json(result).dump(2) + "\n";
}

void write_layers_csv(std::ostream& out, const MetricsReport& r) {
  csv::write_row(out, {"layer", "size", "active", "activation_rate", "growth_rate", "ds_count",
                       "ds_mean", "ds_median", "it_mean", "it_median"});
  for (std::size_t k = 0; k < r.layer_sizes.size(); ++k) {
    const Ratio& a = r.activation_rate[k];
    const auto& g = r.growth_rate[k];
    const LayerSpeed& s = r.speed.layers[k];
    csv::write_row(out, {std::to_string(k + 1), std::to_string(r.layer_sizes[k]),
                         std::to_string(r.active_members[k]), format_number(a.value()),
                         g ? format_number(g->value()) : std::string(),
                         std::to_string(s.speed.count), format_number(s.speed.mean),
                         format_number(s.speed.median), format_number(s.interval_days.mean),
                         format_number(s.interval_days.median)});
  }
}

void write_years_csv(std::ostream& out, const MetricsReport& r) {
  csv::write_row(out, {"year", "broadcasting", "virality"});
  for (const auto& [year, counts] : r.channel_by_year) {
    csv::write_row(out, {std::to_string(year), std::to_string(counts.broadcasting),
                         std::to_string(counts.virality)});
  }
}

void write_domains_csv(std::ostream& out, const MetricsReport& r) {
  csv::write_row(out, {"layer", "domain", "count"});
  for (const auto& [key, count] : r.domain_by_layer) {
    csv::write_row(out, {std::to_string(key.first), key.second, std::to_string(count)});
  }
}

}  // namespace difftree
