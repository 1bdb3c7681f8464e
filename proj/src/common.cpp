#include "msc/common.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace msc {

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed ^ (stream * 0xd1b54a32d192ed03ULL));
    rng.next_u64();
    return rng.next_u64();
}

namespace {

SetDecision pick(Vector scores, bool minimize) {
    if (scores.size() == 0) throw ConfigError("no class scores");
    SetDecision out;
    const double best = minimize ? scores.minCoeff() : scores.maxCoeff();
    const double band = kTieTolerance * scores.cwiseAbs().maxCoeff();
    int within = 0;
    for (Eigen::Index p = 0; p < scores.size(); ++p) {
        const double gap = minimize ? scores(p) - best : best - scores(p);
        if (gap <= band) {
            if (within == 0) out.decision = static_cast<ClassId>(p);
            ++within;
        }
    }
    out.tie = within > 1;
    out.scores = std::move(scores);
    return out;
}

}  // namespace

SetDecision pick_min(Vector scores) { return pick(std::move(scores), true); }
SetDecision pick_max(Vector scores) { return pick(std::move(scores), false); }

int default_thread_count() {
    if (const char* env = std::getenv("MSC_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && value > 0) return static_cast<int>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace msc
