#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace metric_coreset {

/// Balanced assignment of n items to L partitions via a seeded shuffle and a
/// contiguous split; the first n mod L partitions get one extra item.
struct Partitioning {
    std::size_t parts = 0;
    std::vector<std::size_t> assignment;  ///< item index -> partition index

    /// Item indices of each partition, ascending.
    std::vector<std::vector<std::size_t>> members() const;
    std::vector<std::size_t> sizes() const;
};

Partitioning make_partitioning(std::size_t n, std::size_t parts, std::uint64_t seed);

/// Item counts (points, weights and scalars each count as one item).
struct MemoryStats {
    std::size_t max_local_items = 0;
    std::size_t aggregate_items = 0;

    void absorb(const MemoryStats& round) {
        max_local_items = std::max(max_local_items, round.max_local_items);
        aggregate_items = std::max(aggregate_items, round.aggregate_items);
    }

    friend bool operator==(const MemoryStats&, const MemoryStats&) = default;
};

/// Thrown when a worker fails; carries the lowest failing partition index.
class RoundError : public std::runtime_error {
public:
    RoundError(std::size_t round, std::size_t partition, const std::string& what)
        : std::runtime_error("round " + std::to_string(round) + ", partition " +
                             std::to_string(partition) + ": " + what),
          round_(round),
          partition_(partition) {}

    std::size_t round() const { return round_; }
    std::size_t partition() const { return partition_; }

private:
    std::size_t round_;
    std::size_t partition_;
};

/// One parallel round: a local input per partition plus a payload every
/// partition receives verbatim.
template <class Input, class Broadcast>
struct RoundPlan {
    std::size_t round = 0;
    std::vector<Input> inputs;
    std::vector<std::size_t> input_items;  ///< items resident for each input
    std::shared_ptr<const Broadcast> broadcast;
    std::size_t broadcast_items = 0;
};

template <class Output>
struct RoundResult {
    std::vector<Output> outputs;  ///< ordered by partition index
    std::vector<std::size_t> local_items;
    MemoryStats stats;
};

/**
 * Runs partition-parallel rounds on a fixed number of threads. Workers must be
 * pure functions of (partition index, input, broadcast); outputs and memory
 * statistics do not depend on the thread count.
 */
class RoundExecutor {
public:
    explicit RoundExecutor(std::size_t threads = 1) : threads_(std::max<std::size_t>(threads, 1)) {}

    std::size_t threads() const { return threads_; }

    /// `worker(index, input, broadcast) -> Output`, `count_items(output) -> size_t`.
    template <class Input, class Broadcast, class Worker, class CountItems>
    auto run_round(const RoundPlan<Input, Broadcast>& plan, Worker&& worker,
                   CountItems&& count_items) const
        -> RoundResult<std::invoke_result_t<Worker&, std::size_t, const Input&, const Broadcast&>> {
        using Output = std::invoke_result_t<Worker&, std::size_t, const Input&, const Broadcast&>;
        const std::size_t parts = plan.inputs.size();
        if (plan.input_items.size() != parts)
            throw std::invalid_argument("round plan: one input item count per partition required");
        static const Broadcast empty{};
        const Broadcast& payload = plan.broadcast ? *plan.broadcast : empty;

        std::vector<std::optional<Output>> slots(parts);
        std::vector<std::exception_ptr> errors(parts);
        std::atomic<std::size_t> next{0};
        auto drain = [&] {
            for (std::size_t i = next.fetch_add(1); i < parts; i = next.fetch_add(1)) {
                try {
                    slots[i].emplace(worker(i, plan.inputs[i], payload));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };

        const std::size_t spawn = std::min(threads_, parts);
        if (spawn <= 1) {
            drain();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(spawn);
            for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(drain);
        }

        for (std::size_t i = 0; i < parts; ++i) {
            if (!errors[i]) continue;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw RoundError(plan.round, i, e.what());
            } catch (...) {
                throw RoundError(plan.round, i, "unknown failure");
            }
        }

        RoundResult<Output> result;
        result.outputs.reserve(parts);
        result.local_items.reserve(parts);
        for (std::size_t i = 0; i < parts; ++i) {
            const std::size_t local =
                plan.input_items[i] + plan.broadcast_items + count_items(*slots[i]);
            result.local_items.push_back(local);
            result.stats.max_local_items = std::max(result.stats.max_local_items, local);
            result.stats.aggregate_items += local;
            result.outputs.push_back(std::move(*slots[i]));
        }
        return result;
    }

private:
    std::size_t threads_;
};

/// Thread count from an explicit value, else METRIC_CORESET_THREADS, else the
/// hardware concurrency.
std::size_t resolve_thread_count(std::optional<std::size_t> requested);

}  // namespace metric_coreset
