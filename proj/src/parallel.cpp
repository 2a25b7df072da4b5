#include "popcov/parallel.hpp"

#include <cstdlib>
#include <string>

namespace popcov {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("POPCOV_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

}  // namespace popcov
