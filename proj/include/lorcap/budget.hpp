#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lorcap {

/// Raised when an operation would materialize more objects than allowed.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cap on materialized words, cubes and grid cells.
struct Budget {
    std::size_t max_items = std::size_t{1} << 22;

    /// Reads LORCAP_BUDGET when set; falls back to the default cap.
    static Budget from_env();

    void require(std::size_t items, const std::string& what) const {
        if (items > max_items) {
            throw ResourceError(what + " needs " + std::to_string(items) + " items; budget is " +
                                std::to_string(max_items) + " (raise LORCAP_BUDGET)");
        }
    }
};

}  // namespace lorcap
