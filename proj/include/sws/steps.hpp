#pragma once

#include <cstdint>

// Step-counter hook for instrumented builds. Compiled out unless
// SWS_STEP_COUNTING is defined (the acceptance build defines it); sketches
// call detail::step() once per constant-work statement group so a test can
// verify that per-operation step counts do not grow with W, k or s.
namespace sws::detail {

#if defined(SWS_STEP_COUNTING)
inline thread_local std::uint64_t t_step_count = 0;

inline void step() noexcept { ++t_step_count; }
inline std::uint64_t step_count() noexcept { return t_step_count; }
inline void reset_step_count() noexcept { t_step_count = 0; }
#else
inline void step() noexcept {}
#endif

}  // namespace sws::detail
