#pragma once

namespace mesoheat {

/// Parallelism cap from MESOHEAT_THREADS (0 or unset: hardware concurrency).
/// Results never depend on the value; it only bounds concurrent workers.
int max_threads();

}  // namespace mesoheat
