#pragma once

namespace difftree {

// Selects between the OpenMP kernel and the serial reference loop. Both
// produce identical results; the serial path is kept for testing and
// benchmarking.
enum class Exec { Serial, Parallel };

}  // namespace difftree
