#pragma once

namespace odt {

/// Applies the ODT_THREADS environment variable, if set, as the OpenMP
/// thread cap. Returns the resulting maximum thread count.
int configure_threads_from_env();

int max_threads();

}  // namespace odt
