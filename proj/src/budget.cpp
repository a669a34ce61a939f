#include "lorcap/budget.hpp"

#include <cstdlib>

namespace lorcap {

Budget Budget::from_env() {
    Budget b;
    if (const char* env = std::getenv("LORCAP_BUDGET")) {
        char* end = nullptr;
        unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) b.max_items = static_cast<std::size_t>(value);
    }
    return b;
}

}  // namespace lorcap
