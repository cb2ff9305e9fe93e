#include <doctest.h>

#include <cmath>
#include <set>

#include "boundary_rf/rng.hpp"

using namespace brf;

// Reference vectors from the Random123 distribution (kat_vectors,
// philox4x32-10).
TEST_CASE("philox4x32 known-answer vectors") {
  const std::array<std::uint32_t, 4> zeros{};
  const std::array<std::uint32_t, 2> zero_key{};
  CHECK(philox4x32(zeros, zero_key) ==
        std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  const std::array<std::uint32_t, 4> ones{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
  const std::array<std::uint32_t, 2> ones_key{0xffffffffu, 0xffffffffu};
  CHECK(philox4x32(ones, ones_key) ==
        std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  const std::array<std::uint32_t, 4> pi_ctr{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
  const std::array<std::uint32_t, 2> pi_key{0xa4093822u, 0x299f31d0u};
  CHECK(philox4x32(pi_ctr, pi_key) ==
        std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

// mix64(x) is the splitmix64 step for state x, so the published splitmix64
// outputs for seed 0 pin it down.
TEST_CASE("mix64 matches splitmix64 reference outputs") {
  constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ull;
  CHECK(mix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(mix64(gamma) == 0x6E789E6AA1B965F4ull);
  CHECK(mix64(2 * gamma) == 0x06C45D188009454Full);
}

TEST_CASE("hash_tag is FNV-1a64") {
  CHECK(hash_tag("") == 0xCBF29CE484222325ull);
  CHECK(hash_tag("a") == 0xAF63DC4C8601EC8Cull);
  CHECK(hash_tag("foobar") == 0x85944171F73967E8ull);
}

TEST_CASE("derive_seed separates stages and indices") {
  const std::uint64_t a = derive_seed(42, "train");
  CHECK(a == derive_seed(42, "train", 0));
  CHECK(a != derive_seed(42, "train", 1));
  CHECK(a != derive_seed(42, "eval"));
  CHECK(a != derive_seed(43, "train"));
}

TEST_CASE("streams are pure functions of (seed, tag, index)") {
  RngStream a(7, "noise", 3);
  RngStream b(7, "noise", 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());

  RngStream c(7, "noise", 4);
  RngStream d(7, "data", 3);
  RngStream e(8, "noise", 3);
  RngStream base(7, "noise", 3);
  const std::uint64_t first = base.next_u64();
  CHECK(first != c.next_u64());
  CHECK(first != d.next_u64());
  CHECK(first != e.next_u64());
}

TEST_CASE("distinct stream indices do not collide over long runs") {
  // Index lives in its own counter words, so even exhausting many blocks
  // of stream 0 can never reproduce stream 1.
  RngStream long_run(1, "t", 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 4096; ++i) seen.insert(long_run.next_u64());
  RngStream other(1, "t", 1);
  for (int i = 0; i < 64; ++i) CHECK(seen.count(other.next_u64()) == 0);
}

TEST_CASE("uniform lands in [0,1) with 53-bit resolution") {
  RngStream stream(123, "u", 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = stream.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("normal moments match a standard normal") {
  RngStream stream(99, "n", 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = stream.normal();
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
    sum4 += x * x * x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK(std::abs(sum3 / n) < 0.03);        // skewness ~ 0
  CHECK(std::abs(sum4 / n - 3.0) < 0.1);   // kurtosis ~ 3
}

TEST_CASE("normal_vector equals elementwise draws from a fresh stream") {
  RngStream a(5, "v", 9);
  const Vec v = a.normal_vector(5);
  RngStream b(5, "v", 9);
  for (Index i = 0; i < 5; ++i) CHECK(v(i) == b.normal());
}
