#pragma once

#include <cstdint>
#include <stdexcept>

namespace tvmdp {

/// Materializing more than this many time-indexed tables (or prefix entries)
/// is refused; the limit is configurable per call.
inline constexpr std::uint64_t kDefaultHorizonCap = 1'000'000;

/// Degenerate-point computation enumerates all static policies; instances
/// with more policies than this are refused.
inline constexpr std::uint64_t kDefaultPolicyEnumerationCap = 10'000;

struct HorizonCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnumerationCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The discount limit falls inside (or indistinguishably close to) a
/// degenerate interval; exact SPE construction is impossible there.
struct DegenerateLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tvmdp
