#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "prodlaw/complex_matrix.hpp"
#include "prodlaw/linalg.hpp"

using prodlaw::cd;
using prodlaw::ComplexMatrix;

namespace {

// greedy nearest pairing of two equal-size eigenvalue multisets
double pair_distance(std::vector<cd> a, std::vector<cd> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (const cd& va : a) {
    std::size_t best = 0;
    double bd = std::abs(va - b[0]);
    for (std::size_t j = 1; j < b.size(); ++j) {
      const double d = std::abs(va - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    worst = std::max(worst, bd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

}  // namespace

TEST_CASE("eigenvalues of closed-form matrices") {
  ComplexMatrix d(3, 3);
  d(0, 0) = cd(2, 1);
  d(1, 1) = cd(-1, 0);
  d(2, 2) = cd(0, -3);
  auto ed = prodlaw::eigenvalues(d);
  CHECK(ed.kind == prodlaw::SpectralKind::eigenvalues);
  CHECK(ed.dim == 3);
  CHECK(pair_distance(ed.values, {cd(2, 1), cd(-1, 0), cd(0, -3)}) <= 1e-14);

  ComplexMatrix invol(2, 2);
  invol(0, 1) = 1.0;
  invol(1, 0) = 1.0;
  CHECK(pair_distance(prodlaw::eigenvalues(invol).values, {cd(1, 0), cd(-1, 0)}) <= 1e-14);

  ComplexMatrix ab(2, 2);
  ab(0, 1) = 2.0;
  ab(1, 0) = 3.0;
  const double r6 = std::sqrt(6.0);
  CHECK(pair_distance(prodlaw::eigenvalues(ab).values, {cd(r6, 0), cd(-r6, 0)}) <= 1e-12);

  // cyclic companion of w^3 = 1
  ComplexMatrix comp(3, 3);
  comp(0, 2) = 1.0;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  const double c = -0.5, s = std::sqrt(3.0) / 2.0;
  CHECK(pair_distance(prodlaw::eigenvalues(comp).values, {cd(1, 0), cd(c, s), cd(c, -s)}) <= 1e-12);
}

TEST_CASE("eigenvalue sum equals the trace") {
  for (std::size_t n : {5, 16, 64}) {
    ComplexMatrix a = oracles::random_matrix(n, 500 + n);
    auto eig = prodlaw::eigenvalues(a);
    cd sum(0, 0);
    for (const cd& v : eig.values) sum += v;
    const double scale = std::sqrt(a.frobenius_norm_sq());
    CHECK(std::abs(sum - a.trace()) <= 1e-8 * static_cast<double>(n) * scale);
  }
}

TEST_CASE("eigenvalues are similarity invariant") {
  ComplexMatrix a = oracles::random_matrix(24, 510);
  ComplexMatrix u = oracles::random_unitary(24, 511);
  ComplexMatrix conj = prodlaw::matmul(prodlaw::matmul(u.adjoint(), a), u);
  CHECK(pair_distance(prodlaw::eigenvalues(a).values, prodlaw::eigenvalues(conj).values) <= 1e-8);
}

TEST_CASE("eigenvalue product matches an elimination determinant") {
  ComplexMatrix a = oracles::random_matrix(12, 520);
  auto eig = prodlaw::eigenvalues(a);
  double log_from_eigs = 0.0;
  for (const cd& v : eig.values) log_from_eigs += 2.0 * std::log(std::abs(v));
  CHECK(log_from_eigs == doctest::Approx(oracles::log_abs_det_lu(a)).epsilon(1e-9));
}

TEST_CASE("tiny spectral radius on a nilpotent block") {
  const std::size_t n = 8;
  ComplexMatrix jordan(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) jordan(i, i + 1) = 1.0;
  // the zero eigenvalue of a Jordan block is eps^(1/n)-sensitive; backward
  // stability only promises moduli around 1e-16^(1/8) ~ 0.01
  for (const cd& v : prodlaw::eigenvalues(jordan).values) CHECK(std::abs(v) <= 0.05);
}

TEST_CASE("small perturbations move a normal spectrum slightly") {
  const std::size_t n = 10;
  ComplexMatrix u = oracles::random_unitary(n, 530);
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = cd(std::cos(1.0 + double(i)), std::sin(0.3 * double(i)));
  ComplexMatrix a = prodlaw::matmul(prodlaw::matmul(u, d), u.adjoint());

  ComplexMatrix e = oracles::random_matrix(n, 531);
  const double enorm = prodlaw::singular_values(e).values.front().real();
  ComplexMatrix ap = a;
  for (std::size_t i = 0; i < n * n; ++i) ap.data()[i] += 1e-13 / enorm * e.data()[i];

  CHECK(pair_distance(prodlaw::eigenvalues(a).values, prodlaw::eigenvalues(ap).values) < 1e-6);
}

TEST_CASE("eigenvalues input validation") {
  ComplexMatrix rect(2, 3);
  CHECK_THROWS_AS((void)prodlaw::eigenvalues(rect), std::invalid_argument);
  ComplexMatrix bad(2, 2);
  bad(0, 0) = cd(std::nan(""), 0);
  CHECK_THROWS_AS((void)prodlaw::eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues: closed forms, order, clamping") {
  ComplexMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  auto ed = prodlaw::hermitian_eigenvalues(d);
  REQUIRE(ed.values.size() == 3);
  CHECK(ed.values[0].real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ed.values[1].real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ed.values[2].real() == doctest::Approx(3.0).epsilon(1e-14));

  ComplexMatrix h(2, 2);
  h(0, 0) = 2.0;
  h(0, 1) = cd(0, 1);
  h(1, 0) = cd(0, -1);
  h(1, 1) = 2.0;
  auto eh = prodlaw::hermitian_eigenvalues(h);
  CHECK(eh.values[0].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eh.values[1].real() == doctest::Approx(3.0).epsilon(1e-12));

  // second difference Toeplitz has eigenvalues 2 - 2cos(k pi / (n+1))
  const std::size_t n = 16;
  ComplexMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) {
      t(i, i + 1) = -1.0;
      t(i + 1, i) = -1.0;
    }
  }
  auto et = prodlaw::hermitian_eigenvalues(t);
  const double pi = 3.14159265358979323846;
  for (std::size_t k = 0; k < n; ++k) {
    const double want = 2.0 - 2.0 * std::cos(pi * double(k + 1) / double(n + 1));
    CHECK(et.values[k].real() == doctest::Approx(want).epsilon(1e-12));
  }

  // gram matrix of a rank-deficient factor: PSD, smallest eigenvalue clamps to 0
  ComplexMatrix r = oracles::random_matrix(8, 540);
  for (std::size_t j = 0; j < 8; ++j) r(7, j) = r(0, j);
  ComplexMatrix gram = prodlaw::adjoint_times(r, r);
  auto eg = prodlaw::hermitian_eigenvalues(gram);
  for (const cd& v : eg.values) CHECK(v.real() >= 0.0);
  CHECK(eg.values.front().real() <= 1e-10 * gram.max_abs() * 8.0);

  ComplexMatrix nh(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS((void)prodlaw::hermitian_eigenvalues(nh), std::invalid_argument);
}

TEST_CASE("singular values: unitary, diagonal, prescribed spectrum") {
  // unitary DFT, normalized
  const std::size_t n = 4;
  ComplexMatrix dft(n, n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * pi * double(i * j) / double(n);
      dft(i, j) = cd(std::cos(ang), std::sin(ang)) / 2.0;
    }
  }
  for (const cd& s : prodlaw::singular_values(dft).values) {
    CHECK(s.real() == doctest::Approx(1.0).epsilon(1e-12));
  }

  ComplexMatrix d2(2, 2);
  d2(0, 0) = -2.0;
  d2(1, 1) = 1.0;
  auto sd = prodlaw::singular_values(d2);
  CHECK(sd.kind == prodlaw::SpectralKind::singular_values);
  CHECK(sd.values[0].real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sd.values[1].real() == doctest::Approx(1.0).epsilon(1e-14));

  // U diag V* has exactly the prescribed singular values
  const std::vector<double> want = {5.0, 3.0, 1.0, 0.5, 0.01};
  ComplexMatrix diag(5, 5);
  for (std::size_t i = 0; i < 5; ++i) diag(i, i) = want[i];
  ComplexMatrix a = prodlaw::matmul(
      prodlaw::matmul(oracles::random_unitary(5, 551), diag), oracles::random_unitary(5, 552).adjoint());
  auto sa = prodlaw::singular_values(a);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(sa.values[i].real() == doctest::Approx(want[i]).epsilon(1e-10));
  }

  // descending order and the Frobenius identity
  ComplexMatrix g = oracles::random_matrix(11, 553);
  auto sg = prodlaw::singular_values(g);
  double sumsq = 0.0;
  for (std::size_t i = 0; i < sg.values.size(); ++i) {
    if (i > 0) CHECK(sg.values[i].real() <= sg.values[i - 1].real());
    sumsq += sg.values[i].real() * sg.values[i].real();
  }
  CHECK(sumsq == doctest::Approx(g.frobenius_norm_sq()).epsilon(1e-12));
}

TEST_CASE("smallest singular value inverts the operator norm of the inverse") {
  ComplexMatrix a = oracles::random_matrix(8, 560);
  ComplexMatrix inv = oracles::inverse_gauss_jordan(a);
  const double smin = prodlaw::singular_values(a).values.back().real();
  const double inv_norm = prodlaw::singular_values(inv).values.front().real();
  CHECK(smin * inv_norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("log_abs_det: identity, scalar diagonal, elimination oracle, exact zero") {
  CHECK(prodlaw::log_abs_det(ComplexMatrix::identity(4)) == 0.0);

  ComplexMatrix de(2, 2);
  const double e = std::exp(1.0);
  de(0, 0) = e;
  de(1, 1) = e;
  CHECK(prodlaw::log_abs_det(de) == doctest::Approx(4.0).epsilon(1e-12));

  ComplexMatrix a = oracles::random_matrix(6, 570);
  CHECK(prodlaw::log_abs_det(a) == doctest::Approx(oracles::log_abs_det_lu(a)).epsilon(1e-8));

  ComplexMatrix z(3, 3);
  z(0, 0) = 1.0;
  z(1, 1) = 1.0;  // third row identically zero
  CHECK(prodlaw::log_abs_det(z) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("eigenvalue moduli are majorized by singular values") {
  for (std::uint64_t seed : {580, 581, 582}) {
    ComplexMatrix a = oracles::random_matrix(16, seed);
    auto eig = prodlaw::eigenvalues(a);
    auto sv = prodlaw::singular_values(a);
    std::vector<double> mods;
    for (const cd& v : eig.values) mods.push_back(std::abs(v));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    double lam = 0.0, sig = 0.0;
    for (std::size_t k = 0; k < mods.size(); ++k) {
      lam += mods[k] * mods[k];
      const double s = sv.values[k].real();
      sig += s * s;
      CHECK(lam <= sig + 1e-8);
    }
  }
}

TEST_CASE("spectral sample reals view") {
  ComplexMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  auto h = prodlaw::hermitian_eigenvalues(d);
  const std::vector<double> r = h.reals();
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(4.0));
  CHECK(r[1] == doctest::Approx(9.0));
}
