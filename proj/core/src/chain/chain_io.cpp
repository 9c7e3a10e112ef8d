#include "aiaas/chain/chain_io.hpp"

#include <cmath>

#include "aiaas/common/error.hpp"
#include "aiaas/metrics/csv.hpp"
#include "chain/chain_json.hpp"

namespace aiaas::chain {

namespace detail {

using aiaas::detail::get_or;
using aiaas::detail::get_required;
using aiaas::detail::Json;

namespace {

QosRequirements qos_from_json(const Json& j, const std::string& ctx) {
  QosRequirements q;
  if (j.is_null()) return q;
  if (!j.is_object()) throw ValidationError(ctx + ".qos: expected an object");
  q.max_latency_ms = get_or(j, "max_latency_ms", q.max_latency_ms);
  q.min_bandwidth = get_or(j, "min_bandwidth", q.min_bandwidth);
  q.cpu = get_or(j, "cpu", q.cpu);
  q.mem = get_or(j, "mem", q.mem);
  q.storage = get_or(j, "storage", q.storage);
  q.min_reliability = get_or(j, "min_reliability", q.min_reliability);
  q.coverage = get_or(j, "coverage", q.coverage);
  return q;
}

Json qos_to_json(const QosRequirements& q) {
  Json j{{"min_bandwidth", q.min_bandwidth}, {"cpu", q.cpu},
         {"mem", q.mem},                     {"storage", q.storage},
         {"min_reliability", q.min_reliability}, {"coverage", q.coverage}};
  if (std::isfinite(q.max_latency_ms)) j["max_latency_ms"] = q.max_latency_ms;
  return j;
}

std::string param_text(const Json& v, const std::string& ctx) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return metrics::format_double(v.get<double>());
  throw ValidationError(ctx + ": parameter values must be numbers, strings or booleans");
}

}  // namespace

MklChain chain_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("chain: expected an object");
  MklChain c;
  c.id = get_required<std::string>(j, "id", "chain");
  const std::string ctx = "chain '" + c.id + "'";
  c.category = parse_category(get_or<std::string>(j, "category", "nal"));
  c.priority = get_or(j, "priority", 0);
  c.tick_period_ms = get_or<std::int64_t>(j, "tick_period_ms", 0);
  c.source_domain = get_or(j, "source_domain", std::vector<std::string>{});
  c.destination_domain = get_or(j, "destination_domain", std::vector<std::string>{});
  const Json& steps = get_required<Json>(j, "steps", ctx);
  if (!steps.is_array()) throw ValidationError(ctx + ".steps: expected an array");
  for (const Json& sj : steps) {
    MklStep s;
    s.id = get_required<std::string>(sj, "id", ctx + " step");
    const std::string sctx = ctx + " step '" + s.id + "'";
    s.kind = parse_step_kind(get_required<std::string>(sj, "kind", sctx));
    s.function_ref = get_required<std::string>(sj, "function", sctx);
    s.qos = qos_from_json(sj.contains("qos") ? sj.at("qos") : Json(), sctx);
    if (sj.contains("params")) {
      const Json& pj = sj.at("params");
      if (!pj.is_object()) throw ValidationError(sctx + ".params: expected an object");
      for (const auto& [k, v] : pj.items()) s.params[k] = param_text(v, sctx + ".params." + k);
    }
    c.steps.push_back(std::move(s));
  }
  if (j.contains("edges")) {
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError(ctx + ".edges: each edge is [from, to]");
      c.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  } else {
    c.edges = default_edges(c.steps);
  }
  return c;
}

Json chain_to_json(const MklChain& c) {
  Json steps = Json::array();
  for (const MklStep& s : c.steps) {
    Json params = Json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    steps.push_back(Json{{"id", s.id},
                         {"kind", to_string(s.kind)},
                         {"function", s.function_ref},
                         {"qos", qos_to_json(s.qos)},
                         {"params", params}});
  }
  Json edges = Json::array();
  for (const auto& [a, b] : c.edges) edges.push_back(Json::array({a, b}));
  return Json{{"id", c.id},
              {"category", to_string(c.category)},
              {"priority", c.priority},
              {"tick_period_ms", c.tick_period_ms},
              {"source_domain", c.source_domain},
              {"destination_domain", c.destination_domain},
              {"steps", steps},
              {"edges", edges}};
}

Catalog catalog_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : get_required<Json>(j, "entries", "catalog");
  if (!arr.is_array()) throw ValidationError("catalog.entries: expected an array");
  Catalog cat;
  for (const Json& ej : arr) {
    CatalogEntry e;
    e.output_kind = get_required<std::string>(ej, "output_kind", "catalog entry");
    const std::string ctx = "catalog entry '" + e.output_kind + "'";
    e.target_selector = get_required<std::string>(ej, "target", ctx);
    e.knob = get_required<std::string>(ej, "knob", ctx);
    e.scale = get_or(ej, "scale", e.scale);
    e.offset = get_or(ej, "offset", e.offset);
    e.min = get_required<double>(ej, "min", ctx);
    e.max = get_required<double>(ej, "max", ctx);
    e.integer = get_or(ej, "integer", e.integer);
    e.validate();
    cat.entries.push_back(std::move(e));
  }
  return cat;
}

Json catalog_to_json(const Catalog& cat) {
  Json arr = Json::array();
  for (const CatalogEntry& e : cat.entries) {
    arr.push_back(Json{{"output_kind", e.output_kind}, {"target", e.target_selector}, {"knob", e.knob},
                       {"scale", e.scale},             {"offset", e.offset},          {"min", e.min},
                       {"max", e.max},                 {"integer", e.integer}});
  }
  return Json{{"entries", arr}};
}

}  // namespace detail

namespace {

template <typename F>
auto schema_errors(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace

MklChain parse_chain(const std::string& text) {
  const auto j = aiaas::detail::parse_json_text(text, "chain");
  return schema_errors([&] { return detail::chain_from_json(j); });
}

std::string render_chain(const MklChain& chain) { return aiaas::detail::dump_canonical(detail::chain_to_json(chain)); }

MklChain load_chain(const std::filesystem::path& path) { return parse_chain(aiaas::detail::read_text_file(path)); }

void save_chain(const std::filesystem::path& path, const MklChain& chain) {
  aiaas::detail::write_text_file(path, render_chain(chain));
}

Catalog parse_catalog(const std::string& text) {
  const auto j = aiaas::detail::parse_json_text(text, "catalog");
  return schema_errors([&] { return detail::catalog_from_json(j); });
}

std::string render_catalog(const Catalog& catalog) {
  return aiaas::detail::dump_canonical(detail::catalog_to_json(catalog));
}

Catalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(aiaas::detail::read_text_file(path));
}

void save_catalog(const std::filesystem::path& path, const Catalog& catalog) {
  aiaas::detail::write_text_file(path, render_catalog(catalog));
}

}  // namespace aiaas::chain
