#include "akaprime/method.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "akaprime/error.hpp"

namespace akaprime {

namespace {

constexpr std::array<MethodInfo, 6> kRegistry{{
    {Method::FiveGAka, "FIVE_G_AKA", "5G-AKA", true, true, "USIM (K, SQN)", true},
    {Method::EapAkaPrime, "EAP_AKA_PRIME", "EAP-AKA'", true, true, "USIM (K, SQN)", true},
    {Method::EapTls, "EAP_TLS", "EAP-TLS", true, false, "X.509 certificate", false},
    {Method::EapTtls, "EAP_TTLS", "EAP-TTLS", true, false, "server certificate + inner credential", false},
    {Method::EapAka, "EAP_AKA", "EAP-AKA", false, false, "USIM (K, SQN)", false},
    {Method::EapSim, "EAP_SIM", "EAP-SIM", false, false, "SIM (Ki)", false},
}};

}  // namespace

std::span<const MethodInfo> method_registry() { return kRegistry; }

const MethodInfo& method_info(Method m) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(),
                         [m](const MethodInfo& i) { return i.method == m; });
  if (it == kRegistry.end()) throw Error(Errc::ConfigError, "method missing from registry");
  return *it;
}

std::string_view to_string(Method m) { return method_info(m).name; }
std::string_view display_name(Method m) { return method_info(m).display; }

Method method_from_string(std::string_view name) {
  for (const auto& info : kRegistry) {
    if (info.name == name || info.display == name) return info.method;
  }
  throw Error(Errc::ConfigError, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(NetworkType t) { return t == NetworkType::Public ? "PUBLIC" : "PRIVATE"; }

NetworkType network_type_from_string(std::string_view name) {
  if (name == "PUBLIC") return NetworkType::Public;
  if (name == "PRIVATE") return NetworkType::Private;
  throw Error(Errc::ConfigError, "unknown network type '" + std::string(name) + "'");
}

bool MethodPolicy::permits(Method m) const {
  const MethodInfo& info = method_info(m);
  return network_type == NetworkType::Public ? info.public_allowed : info.five_g;
}

}  // namespace akaprime
