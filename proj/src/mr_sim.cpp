#include "metric_coreset/mr_sim.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

#include "metric_coreset/random.hpp"

namespace metric_coreset {

std::vector<std::vector<std::size_t>> Partitioning::members() const {
    std::vector<std::vector<std::size_t>> out(parts);
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
}

std::vector<std::size_t> Partitioning::sizes() const {
    std::vector<std::size_t> out(parts, 0);
    for (std::size_t p : assignment) ++out[p];
    return out;
}

Partitioning make_partitioning(std::size_t n, std::size_t parts, std::uint64_t seed) {
    if (parts < 1) throw std::invalid_argument("partition count must be >= 1");
    if (parts > n)
        throw std::invalid_argument("cannot split " + std::to_string(n) + " items into " +
                                    std::to_string(parts) + " non-empty partitions");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    Partitioning out;
    out.parts = parts;
    out.assignment.assign(n, 0);
    const std::size_t base = n / parts, extra = n % parts;
    std::size_t pos = 0;
    for (std::size_t p = 0; p < parts; ++p) {
        const std::size_t size = base + (p < extra ? 1 : 0);
        for (std::size_t j = 0; j < size; ++j) out.assignment[order[pos++]] = p;
    }
    return out;
}

std::size_t resolve_thread_count(std::optional<std::size_t> requested) {
    if (requested && *requested > 0) return *requested;
    if (const char* env = std::getenv("METRIC_CORESET_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) return static_cast<std::size_t>(value);
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace metric_coreset
