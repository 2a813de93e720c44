#include "halfline/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace halfline {
namespace {

std::atomic<int> g_thread_override{0};

}  // namespace

void set_thread_override(int threads) { g_thread_override.store(threads); }

int default_thread_count() {
    int forced = g_thread_override.load();
    if (forced > 0) return forced;
    if (const char* env = std::getenv("HALFLINE_WALK_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int threads = default_thread_count();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> team;
    std::size_t team_size = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    team.reserve(team_size);
    for (std::size_t t = 0; t < team_size; ++t) team.emplace_back(worker);
    for (auto& th : team) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace halfline
