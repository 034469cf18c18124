#pragma once

namespace evident {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace evident
