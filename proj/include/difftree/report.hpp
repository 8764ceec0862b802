#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "difftree/bootstrap.hpp"
#include "difftree/metrics.hpp"

namespace difftree {

// Shortest round-trip decimal form of a double; stable across runs.
std::string format_number(double value);

// Key order is fixed, so equal reports serialize to equal bytes.
nlohmann::ordered_json metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& doc);
std::string serialize_metrics(const MetricsReport& report);

nlohmann::ordered_json bootstrap_to_json(const BootstrapResult& result);
std::string serialize_bootstrap(const BootstrapResult& result);

// Plot-ready tables.
// layer,size,active,activation_rate,growth_rate,ds_count,ds_mean,ds_median,it_mean,it_median
void write_layers_csv(std::ostream& out, const MetricsReport& report);
// year,broadcasting,virality
void write_years_csv(std::ostream& out, const MetricsReport& report);
// layer,domain,count
void write_domains_csv(std::ostream& out, const MetricsReport& report);

}  // namespace difftree
