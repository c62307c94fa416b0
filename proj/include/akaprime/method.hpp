#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace akaprime {

enum class Method { FiveGAka, EapAkaPrime, EapTls, EapTtls, EapAka, EapSim };

enum class NetworkType { Public, Private };

/// One row of the method registry.
struct MethodInfo {
  Method method;
  std::string_view name;        // canonical config/report spelling
  std::string_view display;     // human-facing spelling
  bool five_g;                  // usable in a 5G core at all
  bool public_allowed;          // valid for public 5G networks
  std::string_view credential;  // long-term credential type
  bool simulated;               // a flow exists in this library
};

std::span<const MethodInfo> method_registry();
const MethodInfo& method_info(Method m);

std::string_view to_string(Method m);
std::string_view display_name(Method m);
/// Accepts the canonical name ("EAP_AKA_PRIME") or the display name ("EAP-AKA'").
Method method_from_string(std::string_view name);

std::string_view to_string(NetworkType t);
NetworkType network_type_from_string(std::string_view name);

struct MethodPolicy {
  NetworkType network_type = NetworkType::Public;
  /// Most preferred first.
  std::vector<Method> preference{Method::EapAkaPrime, Method::FiveGAka, Method::EapTls,
                                 Method::EapTtls};

  /// Public networks admit only 5G-AKA and EAP-AKA'; private networks admit every 5G method.
  bool permits(Method m) const;
};

}  // namespace akaprime
