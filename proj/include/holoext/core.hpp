#pragma once

// Shared vocabulary: scalar/point types, the error hierarchy and seeded
// sampling helpers used by every module.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace holoext {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using Point = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors. Everything a caller can cause derives from InvalidInput; the CLI maps
// it to exit code 2. ConsistencyError means two computation routes disagreed.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the region an operation is defined on.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnsupportedDomain : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DegenerateNormal : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class IllConditioned : public InvalidInput {
 public:
  IllConditioned(const std::string& what, double condition)
      : InvalidInput(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class RangeViolation : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A search ran out of budget without producing a single feasible candidate.
class SearchFailure : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Points.

inline Point make_point(std::initializer_list<Complex> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (const auto& c : coords) p(i++) = c;
  return p;
}

/// Hermitian pairing <z, w> = sum z_j conj(w_j).
inline Complex inner(const Point& z, const Point& w) { return w.dot(z); }

/// The bilinear form z . w = sum z_j w_j (no conjugation).
inline Complex bilinear(const Point& z, const Point& w) {
  return (z.array() * w.array()).sum();
}

inline bool all_finite(const Point& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i).real()) || !std::isfinite(p(i).imag())) return false;
  }
  return true;
}

inline void require_point(const Point& p, Eigen::Index dim, const char* what) {
  if (p.size() != dim) {
    throw InvalidInput(std::string(what) + ": expected dimension " + std::to_string(dim) +
                       ", got " + std::to_string(p.size()));
  }
  if (!all_finite(p)) throw InvalidInput(std::string(what) + ": non-finite coordinate");
}

// ---------------------------------------------------------------------------
// Seeded sampling. Streams are derived from (seed, tags...) so that independent
// restarts never share a generator.

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_a), static_cast<std::uint32_t>(stream_b),
                    0x9e3779b9u};
  return Rng(seq);
}

inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline CVector complex_gaussian(Rng& rng, Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v;
}

inline Point unit_sphere_point(Rng& rng, Eigen::Index d) {
  Point v;
  do {
    v = complex_gaussian(rng, d);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

/// Uniform point in the open disk of the given radius.
inline Complex uniform_disk(Rng& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * kPi * u(rng);
  return std::polar(r, theta);
}

/// Uniform point in the ball of C^d with the given radius.
inline Point uniform_ball(Rng& rng, Eigen::Index d, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(d)));
  return unit_sphere_point(rng, d) * r;
}

}  // namespace holoext
