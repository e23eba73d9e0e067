#include "noisyls/noise.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace noisyls {

namespace {

// FNV-1a over the raw coordinate bytes; stateless so the oscillatory and
// adversarial kinds are pure functions of x.
std::uint64_t hash_coordinates(const Eigen::VectorXd& x) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (int i = 0; i < x.size(); ++i) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(double));
        std::memcpy(&bits, &x[i], sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xFFull;
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

double hashed_angle(const Eigen::VectorXd& x) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return static_cast<double>(hash_coordinates(x) >> 11) * 0x1.0p-53 * two_pi;
}

}  // namespace

double evaluate_noisy(const Problem& problem, const NoiseModel& noise, const Eigen::VectorXd& x,
                      RngStream& stream, EvalRole role) {
    if (x.size() != problem.dim) throw std::invalid_argument("evaluate_noisy: dimension mismatch");
    if (!x.allFinite()) throw std::invalid_argument("evaluate_noisy: non-finite input");

    const double phi = problem.phi(x);
    const double eps = noise.epsilon_f;
    switch (noise.kind) {
        case NoiseKind::zero:
            return phi;
        case NoiseKind::uniform:
            return phi + stream.uniform(-eps, eps);
        case NoiseKind::deterministic_oscillatory:
            return phi + eps * std::sin(hashed_angle(x));
        case NoiseKind::adversarial_sign:
            switch (role) {
                case EvalRole::armijo_trial:
                    return phi + eps;
                case EvalRole::armijo_current:
                    return phi - eps;
                case EvalRole::generic:
                    return phi + (std::sin(hashed_angle(x)) >= 0.0 ? eps : -eps);
            }
    }
    throw std::logic_error("evaluate_noisy: unreachable");
}

}  // namespace noisyls
