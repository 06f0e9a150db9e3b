#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace corbit {

using Real = double;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

/// Elements passed to an operation belong to different realizations.
struct RealizationMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A restricted root vanishes on the supplied Cartan element.
struct NonRegular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The group element misses the dense open cell of the N̄MAN factorization.
struct NotInBigCell : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sampling Gram matrix is too ill-conditioned to invert.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear system arising from a geometric construction is numerically singular.
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Polynomial symbol degree above the supported cap.
struct DegreeTooHigh : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Symbol does not have the u(y) + β(v(y),φ) + Σ w_k(y) z_k shape.
struct NotInRestrictedClass : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Deterministic random stream. Wraps a fixed 64-bit generator and derives
/// doubles itself so that streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xorshift* variant; period 2^64-1, plenty for verification sampling.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller on the explicit uniform stream.
  double normal() {
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Vector uniform_vector(int n, double lo, double hi) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

/// Stable 64-bit hash for deriving per-suite seeds from a base seed.
inline std::uint64_t hash_combine(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = seed ^ 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace corbit
