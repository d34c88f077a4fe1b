#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "prodlaw/kernels.hpp"

namespace kr = prodlaw::kernels;
using kr::cd;

namespace {

std::vector<cd> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cd> v(n);
  for (auto& x : v) x = cd(normal(gen), normal(gen));
  return v;
}

}  // namespace

TEST_CASE("scalar kernels reproduce hand values") {
  const auto& ops = kr::scalar_ops();
  std::vector<cd> x = {cd(1, 2), cd(3, -1)};
  std::vector<cd> y = {cd(0, 1), cd(-2, 0)};

  CHECK(ops.dotu(x.data(), y.data(), 2) == cd(-8, 3));        // (1+2i)i + (3-i)(-2)
  CHECK(ops.dotc(x.data(), y.data(), 2) == cd(-4, -1));       // (1-2i)i + (3+i)(-2)
  CHECK(ops.nrm2sq(x.data(), 2) == doctest::Approx(15.0));    // 1+4+9+1

  std::vector<cd> acc = y;
  ops.axpy(cd(2, 0), x.data(), acc.data(), 2);
  CHECK(acc[0] == cd(2, 5));
  CHECK(acc[1] == cd(4, -2));

  std::vector<cd> sc = x;
  ops.scal(cd(0, 1), sc.data(), 2);
  CHECK(sc[0] == cd(-2, 1));
  CHECK(sc[1] == cd(1, 3));
}

TEST_CASE("rot preserves the two-row energy") {
  const auto& ops = kr::scalar_ops();
  auto x = random_vec(33, 11);
  auto y = random_vec(33, 12);
  const double before = ops.nrm2sq(x.data(), 33) + ops.nrm2sq(y.data(), 33);

  // c^2 + |s|^2 = 1 makes the pair map unitary
  const double c = 0.6;
  const cd s = cd(0.48, 0.64);
  REQUIRE(c * c + std::norm(s) == doctest::Approx(1.0));
  ops.rot(x.data(), y.data(), c, s, 33);
  const double after = ops.nrm2sq(x.data(), 33) + ops.nrm2sq(y.data(), 33);
  CHECK(after == doctest::Approx(before).epsilon(1e-13));
}

TEST_CASE("rot_pair equals rot on gathered columns") {
  const auto& ops = kr::scalar_ops();
  const std::size_t rows = 19, stride = 7;
  auto buf = random_vec(rows * stride, 21);
  auto ref = buf;

  const double c = 0.8;
  const cd s = cd(0.36, -0.48);
  ops.rot_pair(buf.data() + 2, stride, c, s, rows);

  // same rotation done through rot on extracted length-1 pairs
  for (std::size_t i = 0; i < rows; ++i) {
    cd* p = ref.data() + i * stride + 2;
    ops.rot(p, p + 1, c, s, 1);
  }
  for (std::size_t i = 0; i < rows * stride; ++i) {
    CHECK(std::abs(buf[i] - ref[i]) <= 1e-14);
  }
}

TEST_CASE("active kernel set is one of the compiled variants") {
  const auto& act = kr::active();
  const std::string name = act.name;
  CHECK((name == "scalar" || name == "avx2"));
  if (name == "avx2") CHECK(kr::avx2_ops() != nullptr);
}

TEST_CASE("avx2 kernels agree with scalar to rounding") {
  const kr::Ops* vec = kr::avx2_ops();
  if (vec == nullptr) return;  // hardware without AVX2/FMA: nothing to compare
  const auto& ref = kr::scalar_ops();

  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 31, 64, 997}) {
    auto x = random_vec(n, 1000 + n);
    auto y = random_vec(n, 2000 + n);
    const cd a(0.7, -0.3);

    // reductions reassociate, so agreement is relative to the mass reduced
    double mass = 1.0;
    for (std::size_t i = 0; i < n; ++i) mass += std::abs(x[i]) * (1.0 + std::abs(y[i]));
    const double tol = 1e-13 * mass;

    CHECK(std::abs(vec->dotu(x.data(), y.data(), n) - ref.dotu(x.data(), y.data(), n)) <= tol);
    CHECK(std::abs(vec->dotc(x.data(), y.data(), n) - ref.dotc(x.data(), y.data(), n)) <= tol);
    CHECK(std::abs(vec->nrm2sq(x.data(), n) - ref.nrm2sq(x.data(), n)) <= tol);

    auto ya = y, yb = y;
    vec->axpy(a, x.data(), ya.data(), n);
    ref.axpy(a, x.data(), yb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= 1e-13);

    auto xa = x, xb = x;
    vec->scal(a, xa.data(), n);
    ref.scal(a, xb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(xa[i] - xb[i]) <= 1e-13);

    auto ra = x, rb = x, sa = y, sb = y;
    vec->rot(ra.data(), sa.data(), 0.28, cd(0.96, 0.0), n);
    ref.rot(rb.data(), sb.data(), 0.28, cd(0.96, 0.0), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ra[i] - rb[i]) <= 1e-13);
      CHECK(std::abs(sa[i] - sb[i]) <= 1e-13);
    }
  }
}
