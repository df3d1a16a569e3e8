#include "gpt_spectra/parallel.h"

#include <cstdlib>
#include <string>

namespace gpt_spectra {

int ThreadCount() {
  if (const char* env = std::getenv("GPT_SPECTRA_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gpt_spectra
