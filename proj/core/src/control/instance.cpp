#include "aiaas/control/instance.hpp"

#include <cmath>

#include "aiaas/chain/knobs.hpp"
#include "aiaas/common/error.hpp"

namespace aiaas::control {

namespace {

const sdi::Allocation* first_node_allocation(const sdi::TopologyState& state, const std::string& selector) {
  if (selector.rfind("allocation:", 0) == 0) return state.find_allocation(selector.substr(11));
  if (selector.rfind("owner:", 0) == 0) {
    for (const sdi::Allocation* a : state.allocations_of(selector.substr(6))) {
      if (!a->link) return a;
    }
    return nullptr;
  }
  throw ValidationError("selector '" + selector + "' must start with owner: or allocation:");
}

void monitor_knob(const StepContext& ctx, StepIo& io) {
  const std::string selector = ctx.step.param_text("target", "");
  const std::string knob = ctx.step.param_text("knob", "vnf.cpu.millicores");
  const sdi::Allocation* a = first_node_allocation(ctx.state, selector);
  if (a == nullptr) throw NotFoundError("monitor.knob: no allocation matches '" + selector + "'");
  io.observations["knob"] = static_cast<double>(chain::read_knob(ctx.state, a->id, knob));
}

void analyze_setpoint(const StepContext& ctx, StepIo& io) {
  chain::AnalysisOutput out;
  out.kind = ctx.step.param_text("output_kind", "knob_setpoint");
  out.value = ctx.step.param_number("target", 0.0);
  out.timestamp_ms = ctx.now_ms;
  io.analyses.push_back(std::move(out));
}

void plan_catalog(const StepContext& ctx, StepIo& io) {
  for (const chain::AnalysisOutput& a : io.analyses) {
    if (ctx.catalog.find(a.kind).empty()) continue;  // informational output
    for (chain::ActionProposal& p :
         chain::catalog_translate(ctx.catalog, a, ctx.chain.destination_domain, ctx.state, ctx.chain.id)) {
      p.timestamp_ms = ctx.now_ms;
      io.proposals.push_back(std::move(p));
    }
  }
}

void knowledge_store(const StepContext& ctx, StepIo& io) {
  for (const auto& [name, v] : io.observations) io.records.push_back({ctx.now_ms, "obs:" + name, v});
  for (const auto& a : io.analyses) io.records.push_back({ctx.now_ms, "analysis:" + a.kind, a.value});
  for (const auto& p : io.proposals) io.records.push_back({ctx.now_ms, "proposal:" + p.knob_key(), p.value});
}

bool same_structure(const chain::MklChain& a, const chain::MklChain& b) {
  if (a.steps.size() != b.steps.size() || a.edges != b.edges || a.source_domain != b.source_domain ||
      a.destination_domain != b.destination_domain) {
    return false;
  }
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (a.steps[i].id != b.steps[i].id || a.steps[i].kind != b.steps[i].kind || a.steps[i].qos != b.steps[i].qos) {
      return false;
    }
  }
  return true;
}

}  // namespace

FunctionRegistry FunctionRegistry::with_builtins() {
  FunctionRegistry r;
  r.add("monitor.knob", monitor_knob);
  r.add("analyze.setpoint", analyze_setpoint);
  r.add("plan.catalog", plan_catalog);
  r.add("execute.apply", [](const StepContext&, StepIo&) {});
  r.add("knowledge.store", knowledge_store);
  return r;
}

void FunctionRegistry::add(std::string name, StepFunction fn) { functions_[std::move(name)] = std::move(fn); }

const StepFunction* FunctionRegistry::find(std::string_view name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::string_view to_string(InstanceState s) {
  switch (s) {
    case InstanceState::Instantiated: return "instantiated";
    case InstanceState::Running: return "running";
    case InstanceState::Scaling: return "scaling";
    case InstanceState::Terminated: return "terminated";
  }
  return "?";
}

MklInstance MklInstance::instantiate(const chain::MklChain& chain, sdi::TopologyState& state, std::string id,
                                     const chain::EmbedOptions& options) {
  MklInstance inst;
  inst.id_ = id.empty() ? chain.id : std::move(id);
  inst.chain_ = chain;
  inst.embed_options_ = options;
  inst.embed_options_.owner = inst.id_;
  inst.embed_options_.reserve = true;
  const chain::EmbedResult r = chain::embed(chain, state, inst.embed_options_);
  if (!r.feasible()) {
    throw InfeasibleError(r.constraint, "chain '" + chain.id + "' cannot be embedded: " + r.constraint +
                                            (r.step.empty() ? "" : " at step '" + r.step + "'"));
  }
  inst.embedding_ = r.embedding;
  inst.transitions_.push_back(InstanceState::Instantiated);
  inst.transition(InstanceState::Running);
  return inst;
}

void MklInstance::transition(InstanceState next) {
  const bool legal = (state_ == InstanceState::Instantiated &&
                      (next == InstanceState::Running || next == InstanceState::Terminated)) ||
                     (state_ == InstanceState::Running &&
                      (next == InstanceState::Scaling || next == InstanceState::Terminated)) ||
                     (state_ == InstanceState::Scaling && next == InstanceState::Running);
  if (!legal) {
    throw StateError("instance '" + id_ + "': illegal transition " + std::string(to_string(state_)) + " -> " +
                     std::string(to_string(next)));
  }
  state_ = next;
  transitions_.push_back(next);
}

void MklInstance::replace_placement(const chain::MklChain& revised, sdi::TopologyState& state) {
  // Release, try the revised placement, restore the old one on failure. The
  // old placement fits again because its reservations were just returned.
  state.release_owner(id_);
  const chain::EmbedResult r = chain::embed(revised, state, embed_options_);
  if (!r.feasible()) {
    chain::reserve_embedding(chain_, state, embedding_, id_);
    throw InfeasibleError(r.constraint, "instance '" + id_ + "': revised chain cannot be embedded: " + r.constraint);
  }
  chain_ = revised;
  embedding_ = r.embedding;
}

void MklInstance::update(const chain::MklChain& revised, sdi::TopologyState& state) {
  if (state_ != InstanceState::Running && state_ != InstanceState::Instantiated) {
    throw StateError("instance '" + id_ + "': update requires Running, state is " + std::string(to_string(state_)));
  }
  if (revised.id != chain_.id) throw ValidationError("update must keep the chain id '" + chain_.id + "'");
  if (same_structure(chain_, revised)) {
    chain_ = revised;
  } else {
    replace_placement(revised, state);
  }
  ++fcaps_.configuration;
}

InstanceSnapshot MklInstance::query() const {
  InstanceSnapshot s;
  s.id = id_;
  s.chain_id = chain_.id;
  s.state = state_;
  s.step_nodes = embedding_.step_nodes;
  s.total_latency_ms = embedding_.total_latency_ms;
  s.fcaps = fcaps_;
  s.actions = action_log_.size();
  s.knowledge_records = knowledge_.size();
  return s;
}

void MklInstance::scale(sdi::TopologyState& state, double factor) {
  if (state_ != InstanceState::Running) {
    throw StateError("instance '" + id_ + "': scale requires Running, state is " + std::string(to_string(state_)));
  }
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ValidationError("scale factor must be positive and finite");
  transition(InstanceState::Scaling);
  chain::MklChain revised = chain_;
  std::vector<std::size_t> scaled;
  for (std::size_t i = 0; i < revised.steps.size(); ++i) {
    chain::MklStep& s = revised.steps[i];
    if (s.kind != chain::StepKind::Analyze && s.kind != chain::StepKind::Execute) continue;
    const sdi::ResourceVector r = s.qos.demand().scaled(factor);
    s.qos.cpu = r.cpu;
    s.qos.mem = r.mem;
    s.qos.storage = r.storage;
    scaled.push_back(i);
  }
  try {
    // In-place resize first, undone step by step if any node is short.
    std::vector<std::size_t> done;
    try {
      for (std::size_t i : scaled) {
        state.resize(embedding_.step_allocations[i], revised.steps[i].qos.demand());
        done.push_back(i);
      }
      chain_ = revised;
    } catch (const CapacityError&) {
      for (std::size_t i : done) state.resize(embedding_.step_allocations[i], chain_.steps[i].qos.demand());
      replace_placement(revised, state);
    }
  } catch (...) {
    transition(InstanceState::Running);
    throw;
  }
  ++fcaps_.configuration;
  transition(InstanceState::Running);
}

void MklInstance::terminate(sdi::TopologyState& state) {
  transition(InstanceState::Terminated);
  state.release_owner(id_);
  embedding_.step_allocations.clear();
  embedding_.link_allocations.clear();
}

std::vector<chain::ActionProposal> MklInstance::tick(std::int64_t now_ms, const sdi::TopologyState& state,
                                                     const FunctionRegistry& registry, const chain::Catalog& catalog) {
  if (state_ != InstanceState::Running) {
    throw StateError("instance '" + id_ + "': tick requires Running, state is " + std::string(to_string(state_)));
  }
  if (chain_.tick_period_ms > 0 && now_ms % chain_.tick_period_ms != 0) {
    throw StateError("instance '" + id_ + "': time " + std::to_string(now_ms) + " not aligned to tick period");
  }
  ++fcaps_.performance;
  StepIo io;
  try {
    for (std::size_t i : chain_.topological_order()) {
      const chain::MklStep& step = chain_.steps[i];
      if (step.kind == chain::StepKind::Execute) continue;
      const StepFunction* fn = registry.find(step.function_ref);
      if (fn == nullptr) throw NotFoundError("function '" + step.function_ref + "' is not registered");
      (*fn)(StepContext{chain_, step, state, catalog, now_ms, knowledge_}, io);
    }
  } catch (const std::exception& e) {
    ++fcaps_.fault;
    last_fault_ = e.what();
    return {};
  }
  knowledge_.insert(knowledge_.end(), io.records.begin(), io.records.end());
  if (!chain_.has_kind(chain::StepKind::Execute)) return {};
  return io.proposals;
}

void MklInstance::record(const chain::ActionProposal& proposal, bool applied, std::string reason) {
  if (!action_log_.empty() && proposal.timestamp_ms < action_log_.back().proposal.timestamp_ms) {
    throw StateError("instance '" + id_ + "': action log timestamps must not decrease");
  }
  if (applied) ++fcaps_.accounting;
  action_log_.push_back({proposal, applied, std::move(reason)});
}

sdi::Tier MklInstance::tier(const sdi::Topology& topology) const {
  const auto order = chain_.topological_order();
  return topology.node(embedding_.step_nodes.at(order.back())).tier;
}

}  // namespace aiaas::control
