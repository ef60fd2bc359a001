#include "surgecast/rng.hpp"

namespace surgecast::rng {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Engine& eng) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t i = 0; i < k && i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(eng, n - i));
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    return picked;
}

} // namespace surgecast::rng
