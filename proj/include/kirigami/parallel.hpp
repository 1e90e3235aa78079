#pragma once

namespace kirigami {

// Number of OpenMP threads kernels may use. Honors the KIRIGAMI_THREADS
// environment variable as an upper cap; returns 1 in non-OpenMP builds.
int thread_count();

}  // namespace kirigami
