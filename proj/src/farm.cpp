#include "ruinlab/farm.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "engine.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RUINLAB_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0 || v > 4096)
            throw InvalidConfig("RUINLAB_WORKERS must be a positive integer (<= 4096)");
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<PathOutcome> run_farm(const ModelParams& p, const SimConfig& cfg_in, double u,
                                  std::uint64_t seed, std::uint64_t n_paths, unsigned workers,
                                  std::uint64_t first_path, std::uint32_t substream_base) {
    SimConfig cfg = cfg_in;
    cfg.validate_and_normalize();
    detail::check_initial_capital(u);
    std::vector<PathOutcome> out(n_paths);
    if (n_paths == 0) return out;

    const auto nw = static_cast<unsigned>(
        std::min<std::uint64_t>(resolve_workers(workers), n_paths));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;

    auto work = [&] {
        try {
            detail::NullRecorder rec;
            for (;;) {
                const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n_paths) return;
                RngStream stream(seed, first_path + i, substream_base);
                out[i] = detail::run_single(p, cfg, u, stream, rec);
            }
        } catch (...) {
            {
                std::lock_guard<std::mutex> g(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
            next.store(n_paths, std::memory_order_relaxed); // drain remaining work
        }
    };

    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (unsigned w = 0; w < nw; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace ruinlab
