#include "conefix/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace conefix {

namespace {

int from_env()
{
    const char* s = std::getenv("CONEFIX_THREADS");
    if (!s || !*s) return 0;
    try {
        return std::max(0, std::stoi(s));
    } catch (...) {
        return 0;
    }
}

std::atomic<int>& threads()
{
    static std::atomic<int> n{from_env()};
    return n;
}

} // namespace

int thread_count() { return threads().load(); }

void set_thread_count(int n) { threads().store(std::max(0, n)); }

} // namespace conefix
