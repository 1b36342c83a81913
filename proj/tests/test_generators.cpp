#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "driftkit/generators.hpp"

namespace {

namespace fs = std::filesystem;
using namespace driftkit;

std::vector<Instance> drain(StreamSource& src) {
  std::vector<Instance> out;
  while (auto inst = src.next()) out.push_back(std::move(*inst));
  return out;
}

// Least-squares linear probe (features + intercept -> sign), the oracle for
// "labels follow one fixed hyperplane": solve the 3x3 normal equations.
struct LinearProbe {
  std::array<double, 3> beta{};

  static LinearProbe fit(const std::vector<Instance>& data, std::size_t lo,
                         std::size_t hi) {
    double A[3][3] = {};
    double b[3] = {};
    for (std::size_t k = lo; k < hi; ++k) {
      const std::array<double, 3> row{data[k].features[0], data[k].features[1],
                                      1.0};
      const double t = *data[k].label == 1 ? 1.0 : -1.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
        b[i] += row[i] * t;
      }
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      std::swap(A[col], A[piv]);
      std::swap(b[col], b[piv]);
      for (int r = col + 1; r < 3; ++r) {
        const double f = A[r][col] / A[col][col];
        for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
        b[r] -= f * b[col];
      }
    }
    LinearProbe p;
    for (int r = 2; r >= 0; --r) {
      double s = b[r];
      for (int c = r + 1; c < 3; ++c) s -= A[r][c] * p.beta[c];
      p.beta[r] = s / A[r][r];
    }
    return p;
  }

  double accuracy(const std::vector<Instance>& data, std::size_t lo,
                  std::size_t hi) const {
    std::size_t ok = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double s = beta[0] * data[k].features[0] +
                       beta[1] * data[k].features[1] + beta[2];
      const ClassId pred = s >= 0.0 ? 1 : 0;
      if (pred == *data[k].label) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(hi - lo);
  }
};

TEST(DriftSchedule, ValidatesBounds) {
  DriftSchedule bad_noise{{}, 0.5};
  EXPECT_THROW(bad_noise.validate(100), std::invalid_argument);
  DriftSchedule past_end{{200}, 0.0};
  EXPECT_THROW(past_end.validate(100), std::invalid_argument);
  DriftSchedule not_increasing{{50, 50}, 0.0};
  EXPECT_THROW(not_increasing.validate(100), std::invalid_argument);
  DriftSchedule ok{{50, 60}, 0.1};
  EXPECT_NO_THROW(ok.validate(100));
}

TEST(SeaSource, NoiselessLabelsFollowTheta8) {
  SeaSource src(1, 20000, DriftSchedule{});
  auto data = drain(src);
  ASSERT_EQ(data.size(), 20000u);
  for (const auto& inst : data) {
    const ClassId want =
        (inst.features[0] + inst.features[1] <= 8.0) ? 1 : 0;
    ASSERT_EQ(*inst.label, want) << "index " << inst.index;
    for (double f : inst.features) {
      ASSERT_GE(f, 0.0);
      ASSERT_LE(f, 10.0);
    }
  }
}

TEST(SeaSource, ClassBalanceMatchesGeometry) {
  // Area of {x1 + x2 <= 8} in the 10x10 square is 32, so P(1) = 0.32.
  SeaSource src(2, 100000, DriftSchedule{});
  auto data = drain(src);
  std::size_t ones = 0;
  for (const auto& inst : data) ones += *inst.label;
  const double p = static_cast<double>(ones) / 100000.0;
  EXPECT_NEAR(p, 0.32, 0.02);
}

TEST(SeaSource, ConceptAdvancesAtEachDriftPoint) {
  const std::vector<double> thetas{8.0, 9.0, 7.0, 9.5};
  SeaSource src(3, 100000, DriftSchedule{{25000, 50000, 75000}, 0.0}, thetas);
  auto data = drain(src);
  ASSERT_EQ(data.size(), 100000u);
  for (const auto& inst : data) {
    std::size_t phase = 0;
    if (inst.index >= 25000) phase = 1;
    if (inst.index >= 50000) phase = 2;
    if (inst.index >= 75000) phase = 3;
    const ClassId want =
        (inst.features[0] + inst.features[1] <= thetas[phase]) ? 1 : 0;
    ASSERT_EQ(*inst.label, want) << "index " << inst.index;
  }
  // The new concept is observable right at the boundary: some instance just
  // after 25000 falls in the band (8, 9] where the two thetas disagree.
  bool boundary_case = false;
  for (std::size_t i = 25000; i < 26000; ++i) {
    const double s = data[i].features[0] + data[i].features[1];
    if (s > 8.0 && s <= 9.0) {
      EXPECT_EQ(*data[i].label, 1);
      boundary_case = true;
    }
  }
  EXPECT_TRUE(boundary_case);
}

TEST(SeaSource, PrefixUnchangedByLaterDrift) {
  SeaSource plain(4, 3000, DriftSchedule{});
  SeaSource drifted(4, 3000, DriftSchedule{{2000}, 0.0});
  auto a = drain(plain);
  auto b = drain(drifted);
  for (std::size_t i = 0; i < 2000; ++i) {
    ASSERT_EQ(a[i].features, b[i].features);
    ASSERT_EQ(*a[i].label, *b[i].label);
  }
}

TEST(SeaSource, NoiseFlipsAtConfiguredRate) {
  SeaSource src(5, 100000, DriftSchedule{{}, 0.10});
  auto data = drain(src);
  std::size_t flips = 0;
  for (const auto& inst : data) {
    const ClassId clean =
        (inst.features[0] + inst.features[1] <= 8.0) ? 1 : 0;
    if (*inst.label != clean) ++flips;
  }
  const double rate = static_cast<double>(flips) / 100000.0;
  EXPECT_NEAR(rate, 0.10, 0.01);
}

TEST(SeaSource, SameSeedIsDeterministic) {
  SeaSource a(6, 500, DriftSchedule{{100}, 0.2});
  SeaSource b(6, 500, DriftSchedule{{100}, 0.2});
  auto da = drain(a);
  auto db = drain(b);
  for (std::size_t i = 0; i < 500; ++i) {
    ASSERT_EQ(da[i].features, db[i].features);
    ASSERT_EQ(*da[i].label, *db[i].label);
  }
}

TEST(HyperplaneSource, RejectsFewerThanTwoDims) {
  EXPECT_THROW(HyperplaneSource(1, 10, 1, DriftSchedule{}),
               std::invalid_argument);
}

TEST(HyperplaneSource, NoiselessLabelsAreLinearlySeparable) {
  HyperplaneSource src(5, 6000, 2, DriftSchedule{});
  auto data = drain(src);
  const LinearProbe probe = LinearProbe::fit(data, 0, 3000);
  EXPECT_GE(probe.accuracy(data, 0, 3000), 0.95);
  EXPECT_GE(probe.accuracy(data, 3000, 6000), 0.95);  // same concept holds
}

TEST(HyperplaneSource, DriftRedrawsTheConcept) {
  HyperplaneSource src(5, 6000, 2, DriftSchedule{{3000}, 0.0});
  auto data = drain(src);
  const LinearProbe pre = LinearProbe::fit(data, 0, 3000);
  const double on_pre = pre.accuracy(data, 0, 3000);
  const double on_post = pre.accuracy(data, 3000, 6000);
  EXPECT_GE(on_pre, 0.95);
  EXPECT_LE(on_post, on_pre - 0.05);
  // The post segment is itself one clean concept (exactly one reassignment).
  const LinearProbe post = LinearProbe::fit(data, 3000, 6000);
  EXPECT_GE(post.accuracy(data, 3000, 6000), 0.95);
}

TEST(HyperplaneSource, PrefixUnchangedByLaterDrift) {
  HyperplaneSource plain(7, 4000, 2, DriftSchedule{});
  HyperplaneSource drifted(7, 4000, 2, DriftSchedule{{3000}, 0.0});
  auto a = drain(plain);
  auto b = drain(drifted);
  for (std::size_t i = 0; i < 3000; ++i) {
    ASSERT_EQ(a[i].features, b[i].features);
    ASSERT_EQ(*a[i].label, *b[i].label);
  }
}

TEST(HyperplaneSource, BalanceNearHalf) {
  HyperplaneSource src(8, 10000, 2, DriftSchedule{});
  auto data = drain(src);
  std::size_t ones = 0;
  for (const auto& inst : data) ones += *inst.label;
  EXPECT_NEAR(static_cast<double>(ones) / 10000.0, 0.5, 0.03);
}

TEST(WriteDataset, RoundTripsExactly) {
  const fs::path dir = fs::temp_directory_path() / "driftkit_gen_test";
  fs::create_directories(dir);
  const fs::path path = dir / "sea10.csv";
  SeaSource src(1, 10, DriftSchedule{});
  EXPECT_EQ(write_dataset(src, path.string()), 10u);

  Dataset d = read_csv_dataset(path.string());
  SeaSource again(1, 10, DriftSchedule{});
  auto want = drain(again);
  ASSERT_EQ(d.instances.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    ASSERT_EQ(d.instances[i].features, want[i].features);  // %.17g is exact
    ASSERT_EQ(d.truth[i], *want[i].label);
  }
}

TEST(WriteDataset, SameSeedSameBytes) {
  const fs::path dir = fs::temp_directory_path() / "driftkit_gen_test";
  fs::create_directories(dir);
  const fs::path p1 = dir / "a.csv";
  const fs::path p2 = dir / "b.csv";
  SeaSource s1(42, 100, DriftSchedule{{50}, 0.1});
  SeaSource s2(42, 100, DriftSchedule{{50}, 0.1});
  write_dataset(s1, p1.string());
  write_dataset(s2, p2.string());

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(p1), slurp(p2));

  const fs::path p3 = dir / "c.csv";
  SeaSource s3(43, 100, DriftSchedule{{50}, 0.1});
  write_dataset(s3, p3.string());
  EXPECT_NE(slurp(p1), slurp(p3));
}

}  // namespace
