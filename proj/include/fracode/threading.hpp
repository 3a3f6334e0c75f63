#pragma once

#include <cstddef>

namespace fracode {

/// Process-wide cap on worker threads used by the enumeration loops.
/// Defaults to 1 (fully sequential); the CLI raises it via --threads.
void set_thread_cap(std::size_t n);
std::size_t thread_cap();

}  // namespace fracode
