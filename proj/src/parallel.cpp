#include "odt/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "odt/error.hpp"

namespace odt {

int configure_threads_from_env() {
  if (const char* env = std::getenv("ODT_THREADS"); env && *env) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(env, &used);
      if (used != std::string(env).size()) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 1) throw ValidationError("ODT_THREADS must be a positive integer");
    omp_set_num_threads(n);
  }
  return max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace odt
