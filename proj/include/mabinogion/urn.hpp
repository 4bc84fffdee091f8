#pragma once

#include <stdexcept>

namespace mab {

/// Counts of white and black balls; the chain's state. The process is
/// absorbed once either color is exhausted.
struct UrnState {
    long white = 0;
    long black = 0;

    long total() const { return white + black; }
    bool absorbed() const { return white == 0 || black == 0; }

    friend bool operator==(const UrnState&, const UrnState&) = default;
};

inline void require_valid(const UrnState& s) {
    if (s.white < 0 || s.black < 0) throw std::domain_error("urn state: negative count");
}

}  // namespace mab
