#pragma once

namespace ptsym {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ptsym
