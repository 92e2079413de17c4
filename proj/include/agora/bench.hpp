#pragma once

#include "agora/election_run.hpp"

namespace agora::bench {

struct VotePathResult {
    std::uint64_t votes_submitted = 0;
    std::uint64_t receipts = 0;
    double seconds = 0;
    double votes_per_sec = 0;
};

// Throughput of the in-simulator vote-collection path: scripted voters,
// honest collectors, measured to the last receipt. Consensus and tally
// phases are excluded (the run is cut at the election-end barrier).
VotePathResult vote_path_throughput(const ea::SetupOutput& setup, std::uint64_t votes,
                                    std::uint64_t seed);

struct KernelResult {
    std::size_t items = 0;
    double serial_items_per_sec = 0;
    double parallel_items_per_sec = 0;

    double speedup() const {
        return serial_items_per_sec > 0 ? parallel_items_per_sec / serial_items_per_sec : 0;
    }
};

struct KernelReport {
    KernelResult commit;
    KernelResult prove;
    KernelResult verify;
};

// serial reference vs OpenMP kernels over independent ballot lines
KernelReport kernel_benchmark(const crypto::Group& g, std::size_t items, std::size_t m,
                              std::uint64_t seed);

}  // namespace agora::bench
