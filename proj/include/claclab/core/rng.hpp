#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace claclab {

/// Seeded random source used everywhere randomness enters a run.
///
/// Wraps std::mt19937_64 plus one cached std::normal_distribution so that the
/// complete generator state (including the Box-Muller spare) can be written to
/// and restored from text for bit-exact checkpoint resume.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

  // Beta(a, b) via the ratio of two gamma draws.
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  std::string state() const {
    std::ostringstream os;
    os << engine_ << ' ' << normal_;
    return os.str();
  }

  void set_state(const std::string& text) {
    std::istringstream is(text);
    is >> engine_ >> normal_;
  }

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_ && a.normal_ == b.normal_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Deterministic child seed from a parent seed and a list of integer tags.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(base));
  words.push_back(static_cast<std::uint32_t>(base >> 32));
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Stable small integer tags for the seed streams a run draws from.
enum class SeedStream : std::uint64_t {
  Agent = 1,
  Environment = 2,
  Resample = 3,
  Evaluation = 4,
  Exploration = 5,
  Sweep = 6,
};

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream, std::uint64_t a = 0, std::uint64_t b = 0) {
  return derive_seed(base, {static_cast<std::uint64_t>(stream), a, b});
}

}  // namespace claclab
