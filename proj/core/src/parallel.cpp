#include "vmvt/parallel.hpp"

#include <cstdlib>
#include <string>

namespace vmvt {

unsigned default_workers() {
  if (char const* env = std::getenv("VMVT_THREADS")) {
    try {
      long const v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  unsigned const hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace vmvt
