#include <string>

#include "aiaas/common/error.hpp"
#include "aiaas/sdi/topology.hpp"

namespace aiaas::sdi {

namespace {

// Emulated testbed: an HAProxy core plus three regional sites. 16 VM hosts
// and 9 forwarding VMs. Capacities are configuration defaults.
TopologySpec paper_spec() {
  TopologySpec s;
  s.regions = {"core", "toronto", "waterloo", "calgary"};

  for (int i = 1; i <= 4; ++i) {
    s.nodes.push_back({"core-vm" + std::to_string(i), "core", Tier::Core, 8000, 16384, 102400,
                       0.9995, false});
  }
  for (const char* region : {"toronto", "waterloo", "calgary"}) {
    const std::string r = region;
    for (int i = 3; i <= 6; ++i) {
      // VM 5 hosts the traffic generators and sits at the access tier.
      const Tier tier = (i == 5) ? Tier::Access : Tier::Edge;
      s.nodes.push_back({r + "-vm" + std::to_string(i), r, tier, 4000, 8192, 40960, 0.999, false});
    }
  }

  s.switches = {{"core-sw1", "core", Tier::Core}, {"core-sw2", "core", Tier::Core},
                {"core-sw3", "core", Tier::Core}};
  for (const char* region : {"toronto", "waterloo", "calgary"}) {
    const std::string r = region;
    s.switches.push_back({r + "-sw1", r, Tier::Edge});
    s.switches.push_back({r + "-sw2", r, Tier::Edge});
  }

  auto lan = [&](const std::string& a, const std::string& b, double ms) {
    s.links.push_back({a, b, 10000, ms, 0.9999});
  };
  auto wan = [&](const std::string& a, const std::string& b, double ms) {
    s.links.push_back({a, b, 1000, ms, 0.999});
  };

  for (int i = 1; i <= 4; ++i) lan("core-vm" + std::to_string(i), "core-sw1", 0.2);
  lan("core-sw1", "core-sw2", 0.3);
  lan("core-sw1", "core-sw3", 0.3);
  lan("core-sw2", "core-sw3", 0.4);

  wan("core-sw2", "toronto-sw1", 2.0);
  wan("core-sw2", "waterloo-sw1", 5.0);
  wan("core-sw3", "waterloo-sw1", 4.5);
  wan("core-sw3", "calgary-sw1", 30.0);
  wan("toronto-sw1", "waterloo-sw1", 3.0);

  for (const char* region : {"toronto", "waterloo", "calgary"}) {
    const std::string r = region;
    s.links.push_back({r + "-sw1", r + "-sw2", 1000, 0.3, 0.9999});
    s.links.push_back({r + "-vm3", r + "-sw2", 1000, 0.2, 0.9999});
    s.links.push_back({r + "-vm4", r + "-sw2", 1000, 0.2, 0.9999});
    s.links.push_back({r + "-vm5", r + "-sw1", 1000, 0.2, 0.9999});
    s.links.push_back({r + "-vm6", r + "-sw1", 1000, 0.2, 0.9999});
  }
  return s;
}

TopologySpec single_spec() {
  TopologySpec s;
  s.regions = {"lab"};
  s.nodes.push_back({"n1", "lab", Tier::Edge, 4000, 8192, 40960, 0.999, false});
  return s;
}

TopologySpec line3_spec() {
  TopologySpec s;
  s.regions = {"lab"};
  s.nodes.push_back({"a", "lab", Tier::Core, 4000, 8192, 40960, 0.999, false});
  s.nodes.push_back({"b", "lab", Tier::Edge, 4000, 8192, 40960, 0.999, false});
  s.nodes.push_back({"c", "lab", Tier::Access, 4000, 8192, 40960, 0.999, false});
  s.links.push_back({"a", "b", 100, 5.0, 0.99});
  s.links.push_back({"b", "c", 50, 10.0, 0.99});
  return s;
}

}  // namespace

Topology Topology::preset(std::string_view name) {
  if (name == "paper") return build(paper_spec());
  if (name == "single") return build(single_spec());
  if (name == "line3") return build(line3_spec());
  throw NotFoundError("unknown topology preset '" + std::string(name) + "'");
}

}  // namespace aiaas::sdi
