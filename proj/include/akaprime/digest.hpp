#pragma once

#include "akaprime/bytes.hpp"

namespace akaprime {

using Digest = Octets<32>;

Digest sha256(ByteView data);
Digest hmac_sha256(ByteView key, ByteView data);

}  // namespace akaprime
