#pragma once

// Chain files are JSON:
//
//   {
//     "id": "vnf-autoscale",
//     "category": "nal" | "ott",
//     "priority": 1,                 // lower wins arbitration
//     "tick_period_ms": 600000,      // optional, 0 = tier period
//     "source_domain": ["waterloo"], // node ids or region names
//     "destination_domain": ["waterloo-vm4"],
//     "steps": [
//       {"id": "m", "kind": "monitor", "function": "monitor.vnf_traffic",
//        "qos": {"max_latency_ms": 20, "min_bandwidth": 10, "cpu": 250,
//                "mem": 256, "storage": 0, "min_reliability": 0.99,
//                "coverage": ["waterloo"]},
//        "params": {"target": 3000}}
//     ],
//     "edges": [["m", "a"], ...]    // optional, see default_edges
//   }
//
// Every qos field is optional; an absent max_latency_ms means unbounded.
// Param values may be numbers, strings or booleans and are kept as text.
//
// Catalog files are JSON:
//
//   {"entries": [{"output_kind": "traffic_forecast_peak",
//                 "target": "owner:vnf-firewall",
//                 "knob": "vnf.cpu.millicores",
//                 "scale": 28.0, "offset": 400.0,
//                 "min": 250, "max": 4000, "integer": true}]}

#include <filesystem>
#include <string>

#include "aiaas/chain/catalog.hpp"
#include "aiaas/chain/chain.hpp"

namespace aiaas::chain {

/// Throws ParseError on malformed JSON and ValidationError on schema
/// violations. Structural rules are left to validate_chain.
MklChain parse_chain(const std::string& text);
std::string render_chain(const MklChain& chain);
MklChain load_chain(const std::filesystem::path& path);
void save_chain(const std::filesystem::path& path, const MklChain& chain);

Catalog parse_catalog(const std::string& text);
std::string render_catalog(const Catalog& catalog);
Catalog load_catalog(const std::filesystem::path& path);
void save_catalog(const std::filesystem::path& path, const Catalog& catalog);

}  // namespace aiaas::chain
