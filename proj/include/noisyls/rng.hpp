#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace noisyls {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
///
/// Every stochastic component takes an explicit stream argument, so a run is a
/// pure function of its inputs and seed. Streams derived via substream() with
/// distinct ids are independent for practical purposes, which makes trials
/// embarrassingly parallel without any shared state.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    /// Stream for trial/component `stream_id` under a common base seed.
    static RngStream substream(std::uint64_t base_seed, std::uint64_t stream_id) {
        std::uint64_t x = base_seed;
        std::uint64_t a = splitmix64(x);
        return RngStream(a ^ (stream_id * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// True with probability p (exactly never for p = 0, always for p = 1).
    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Marsaglia's polar method (pairs cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    Eigen::VectorXd normal_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    /// Uniform on the unit sphere in R^n.
    Eigen::VectorXd unit_sphere(int n) {
        Eigen::VectorXd v;
        double norm = 0.0;
        do {
            v = normal_vector(n);
            norm = v.norm();
        } while (norm == 0.0);
        return v / norm;
    }

    /// Uniform in the closed ball of given radius. radius = 0 gives the zero vector.
    Eigen::VectorXd in_ball(int n, double radius) {
        if (radius == 0.0) return Eigen::VectorXd::Zero(n);
        const double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(n));
        return r * unit_sphere(n);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace noisyls
