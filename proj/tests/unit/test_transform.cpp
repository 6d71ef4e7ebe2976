#include "pocket/error.hpp"
#include "pocket/simd/conv_pool.hpp"
#include "pocket/transform.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <cstring>
#include <numeric>

using namespace pocket;

namespace {

RocketKernel kernel(std::vector<double> w, int dilation, int padding, double bias) {
  RocketKernel k;
  k.weights = std::move(w);
  k.dilation = dilation;
  k.padding = padding;
  k.bias = bias;
  return k;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("delta kernel reproduces the series") {
  const std::vector<double> s{1, 2, 3};
  const auto out = convolve1d(s, kernel({0, 0, 0, 1, 0, 0, 0}, 1, 3, 0.0));
  CHECK(out == s);
}

TEST_CASE("zero-sum kernel kills constants") {
  const std::vector<double> s(12, 4.0);
  for (double v : convolve1d(s, kernel({1, -2, 1}, 2, 0, 0.0))) CHECK(v == 0.0);
  const std::vector<double> two{1, 0};
  CHECK(convolve1d(two, kernel({1, -1}, 1, 0, 0.0)) == std::vector<double>{1.0});
}

TEST_CASE("dilated hand case") {
  const std::vector<double> s{1, 2, 3, 4};
  CHECK(convolve1d(s, kernel({1, -1}, 2, 0, 0.0)) == std::vector<double>{-2, -2});
  CHECK_THROWS_AS(convolve1d(s, kernel({1, 1, 1}, 2, 0, 0.0)), DimensionError);
}

TEST_CASE("ppv and max") {
  const std::vector<double> v{-1, 0, 2, 3};
  CHECK(ppv(v) == 0.5);
  CHECK(ppv(std::vector<double>{-1, -2}) == 0.0);
  CHECK(ppv(std::vector<double>{1, 2}) == 1.0);
  CHECK(ppv(std::vector<double>{0, 0}) == 0.0);
  CHECK(max_feature(v) == 3.0);
  CHECK(max_feature(std::vector<double>{-5}) == -5.0);
  CHECK(max_feature(std::vector<double>{2.5, 2.5}) == 2.5);
  CHECK_THROWS_AS(ppv(std::vector<double>{}), DimensionError);
  CHECK_THROWS_AS(max_feature(std::vector<double>{}), DimensionError);
}

TEST_CASE("feature matrix layout") {
  auto data = testsupport::cbf(1, 40, 3);
  data.series.conservativeResize(2, Eigen::NoChange);
  data.labels.resize(2);
  const auto bank = generate_rocket(3, 40, 11);
  const auto fm = build_feature_matrix(data, bank);
  CHECK(fm.X.rows() == 2);
  CHECK(fm.X.cols() == 6);
  for (Index g = 0; g < 3; ++g) {
    CHECK(fm.group_map[static_cast<std::size_t>(g)] == std::vector<Index>{2 * g, 2 * g + 1});
    for (Index n = 0; n < 2; ++n) {
      std::vector<double> s(data.series.row(n).begin(), data.series.row(n).end());
      const auto out = convolve1d(s, bank.kernels[static_cast<std::size_t>(g)]);
      CHECK(fm.X(n, 2 * g) == ppv(out));
      CHECK(fm.X(n, 2 * g + 1) == max_feature(out));
    }
  }
  const auto mini = generate_minirocket(90, data, 1);
  const auto fm2 = build_feature_matrix(data, mini);
  CHECK(fm2.X.cols() == 90);
  CHECK(fm2.num_groups() == 90);
  CHECK(fm2.group_map[7] == std::vector<Index>{7});
}

TEST_CASE("transform matches the reference convolution") {
  const auto data = testsupport::cbf(4, 97, 5);
  for (auto kind : {ModelKind::RocketPpvMax, ModelKind::RocketPpv}) {
    const auto bank = generate_rocket(60, 97, 2, kind);
    const Matrix X = transform(data.series, bank);
    const Index w = bank.features_per_kernel();
    for (Index n = 0; n < data.size(); ++n)
      for (std::size_t g = 0; g < bank.size(); ++g) {
        std::vector<double> s(data.series.row(n).begin(), data.series.row(n).end());
        const auto out = convolve1d(s, bank.kernels[g]);
        CHECK(X(n, static_cast<Index>(g) * w) == ppv(out));
        if (w == 2) CHECK(X(n, static_cast<Index>(g) * w + 1) == doctest::Approx(max_feature(out)).epsilon(1e-12));
      }
  }
}

TEST_CASE("ppv of mean-centred kernel on a constant series follows the bias sign") {
  Matrix s = Matrix::Constant(1, 30, 3.7);
  KernelBank bank;
  bank.kind = ModelKind::RocketPpv;
  bank.kernels = {kernel({1, -1, 2, -2, 0, 0, 0}, 1, 0, 0.25), kernel({1, -1, 2, -2, 0, 0, 0}, 1, 0, -0.25)};
  bank.kernels[1].group_id = 1;
  const Matrix X = transform(s, bank);
  CHECK(X(0, 0) == 1.0);
  CHECK(X(0, 1) == 0.0);
}

TEST_CASE("threaded transform is bit-identical to serial") {
  const auto data = testsupport::cbf(10, 128, 8);
  const auto bank = generate_rocket(300, 128, 1);
  TransformOptions one, four;
  four.threads = 4;
  CHECK(transform(data.series, bank, one) == transform(data.series, bank, four));
}

TEST_CASE("permuting kernels permutes feature columns") {
  const auto data = testsupport::cbf(3, 64, 1);
  const auto bank = generate_rocket(20, 64, 6);
  KernelBank rev = bank;
  std::reverse(rev.kernels.begin(), rev.kernels.end());
  const Matrix A = transform(data.series, bank);
  const Matrix B = transform(data.series, rev);
  for (Index g = 0; g < 20; ++g) {
    CHECK(A.col(2 * g) == B.col(2 * (19 - g)));
    CHECK(A.col(2 * g + 1) == B.col(2 * (19 - g) + 1));
  }
}

TEST_CASE("every SIMD variant is bit-identical to the scalar kernel") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  const auto isas = simd::available_isas();
  REQUIRE(isas.front() == simd::Isa::Scalar);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t len = 1 + rng() % 11;
    const std::size_t dil = 1 + rng() % 9;
    const std::size_t out_len = 1 + rng() % 70;
    std::vector<double> input((out_len - 1) + (len - 1) * dil + 1), w(len);
    for (auto& v : input) v = trial % 7 == 0 ? 0.0 : nd(rng);
    for (auto& v : w) v = nd(rng);
    const simd::ConvArgs args{input.data(), out_len, w.data(), len, dil, trial % 5 == 0 ? 0.0 : nd(rng)};
    const auto ref = simd::conv_pool_scalar(args);
    for (auto isa : isas) {
      const auto got = simd::conv_pool_for(isa)(args);
      CHECK(got.positives == ref.positives);
      CHECK(same_bits(got.max, ref.max));
    }
  }
  for (auto isa : isas) {
    const auto data = testsupport::cbf(3, 150, 4);
    const auto bank = generate_rocket(200, 150, 3);
    TransformOptions a, b;
    a.isa = simd::Isa::Scalar;
    b.isa = isa;
    CHECK(transform(data.series, bank, a) == transform(data.series, bank, b));
  }
}

TEST_CASE("unavailable variants are rejected") {
  for (auto isa : {simd::Isa::Avx2, simd::Isa::Neon})
    if (!simd::isa_available(isa)) CHECK_THROWS_AS(simd::conv_pool_for(isa), ConfigError);
}

TEST_CASE("feature cache round trip") {
  testsupport::TempDir dir("feat");
  const auto data = testsupport::cbf(2, 50, 1);
  const auto fm = build_feature_matrix(data, generate_rocket(15, 50, 2));
  save_feature_matrix(dir.path() / "f.bin", fm);
  const auto back = load_feature_matrix(dir.path() / "f.bin");
  CHECK(back.X == fm.X);
  CHECK(back.group_map == fm.group_map);
  CHECK(back.kind == fm.kind);
  std::ofstream(dir.path() / "junk.bin") << "nope";
  CHECK_THROWS_AS(load_feature_matrix(dir.path() / "junk.bin"), DataError);
}

TEST_CASE("kernels that do not fit are rejected") {
  KernelBank bank;
  bank.kind = ModelKind::RocketPpv;
  bank.kernels = {kernel({1, 1, 1, 1, 1, 1, 1}, 4, 0, 0.0)};
  CHECK_THROWS_AS(transform(Matrix::Zero(2, 10), bank), DimensionError);
}
