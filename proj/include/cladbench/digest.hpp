#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace clad {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
// 16 lowercase hex digits of fnv1a64.
std::string digest_hex(std::string_view bytes);

}  // namespace clad
