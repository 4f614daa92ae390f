#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace trolllens::util {

// Deterministic RNG used everywhere seeds matter. The raw mt19937_64
// sequence is pinned by the standard; the uniform01 transform below is
// ours, so results are reproducible across platforms and libstdc++
// versions (std::uniform_real_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // 53-bit uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(eng_() % n);
    }

    // standard normal via Box-Muller
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);
// Fixed-decimals formatting for report tables.
std::string format_fixed(double v, int decimals);

std::string lower_ascii(std::string s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);

// Worker count for parallel per-user work: hardware_concurrency capped
// by the TROLLLENS_THREADS environment variable.
unsigned worker_count();

// Static-chunked parallel loop; fn(i) must only write to slot i of
// preallocated outputs so results are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace trolllens::util
