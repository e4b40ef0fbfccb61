#include <cstring>
#include <random>
#include <vector>

#include "closure/simd/kernels.hpp"
#include "doctest.h"

using namespace closure::simd;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("active kernel table is one of the known variants") {
  const KernelTable& active = active_kernels();
  const bool known = &active == &scalar_kernels() || &active == avx2_kernels();
  CHECK(known);
  MESSAGE("active kernels: " << active.name);
}

TEST_CASE("AVX2 kernels are bitwise equivalent to the scalar reference") {
  const KernelTable* fast = avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("AVX2 unavailable on this machine; equivalence test skipped");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 rng(42);

  for (std::size_t len : {1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
    for (int count = 1; count <= 4; ++count) {
      std::vector<std::vector<double>> src(count);
      const double* ptr[4];
      for (int m = 0; m < count; ++m) {
        src[m] = random_vector(rng, len);
        ptr[m] = src[m].data();
      }
      const auto w = random_vector(rng, 4);
      std::vector<double> a(len), b(len);
      ref.combine(a.data(), ptr, w.data(), count, len);
      fast->combine(b.data(), ptr, w.data(), count, len);
      REQUIRE(bitwise_equal(a, b));
    }

    std::vector<std::vector<double>> g(6), s(6);
    const double* gp[6];
    const double* sp[6];
    for (int c = 0; c < 6; ++c) {
      g[c] = random_vector(rng, len);
      s[c] = random_vector(rng, len);
      gp[c] = g[c].data();
      sp[c] = s[c].data();
    }
    std::vector<double> ca(len), cb(len);
    ref.sym3_contract(gp, sp, ca.data(), len);
    fast->sym3_contract(gp, sp, cb.data(), len);
    REQUIRE(bitwise_equal(ca, cb));

    std::vector<std::vector<double>> ia(6, std::vector<double>(len)), ib(6, std::vector<double>(len));
    double* iap[6];
    double* ibp[6];
    for (int c = 0; c < 6; ++c) {
      iap[c] = ia[c].data();
      ibp[c] = ib[c].data();
    }
    std::vector<double> da(len), db(len);
    ref.sym3_inverse(gp, iap, da.data(), len);
    fast->sym3_inverse(gp, ibp, db.data(), len);
    REQUIRE(bitwise_equal(da, db));
    for (int c = 0; c < 6; ++c) REQUIRE(bitwise_equal(ia[c], ib[c]));
  }
}

TEST_CASE("scalar kernels compute the documented formulas") {
  const KernelTable& ref = scalar_kernels();
  const double x[] = {1, 2, 3};
  const double y[] = {4, 5, 6};
  const double* src[] = {x, y};
  const double w[] = {-0.5, 0.5};
  double out[3];
  ref.combine(out, src, w, 2, 3);
  for (double v : out) CHECK(v == 1.5);

  // Identity metric: inverse is identity, contraction with itself is 3.
  const double one[] = {1}, zero[] = {0};
  const double* g[] = {one, zero, zero, one, zero, one};
  double inv_store[6][1];
  double* inv[6];
  for (int c = 0; c < 6; ++c) inv[c] = inv_store[c];
  double det[1];
  ref.sym3_inverse(g, inv, det, 1);
  CHECK(det[0] == 1.0);
  CHECK(inv_store[0][0] == 1.0);
  CHECK(inv_store[1][0] == 0.0);
  double tr[1];
  ref.sym3_contract(g, g, tr, 1);
  CHECK(tr[0] == 3.0);
}
