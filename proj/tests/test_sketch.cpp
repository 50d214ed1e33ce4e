#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "robustf2/sketch.hpp"
#include "support/test_streams.hpp"

using namespace robustf2;

TEST_CASE("sketch shapes scale as the calibration says") {
  const SketchShape a = tracker_shape(0.25, 0.1);
  CHECK(a.cols == static_cast<Eigen::Index>(std::ceil(6.0 / (0.25 * 0.25))));
  const SketchShape b = tracker_shape(0.125, 0.1);
  CHECK(b.cols == 4 * a.cols);  // halving alpha quadruples the accumulators
  CHECK(a.rows % 2 == 1);

  const SketchShape d1 = diff_shape(0.5, 0.1, 0.1);
  const SketchShape d2 = diff_shape(1.0, 0.1, 0.1);
  CHECK(d1.cols == static_cast<Eigen::Index>(std::ceil(0.5 * 6.0 / 0.01)));
  CHECK(d2.cols == 2 * d1.cols);  // suffix width proportional to gamma
}

TEST_CASE("sketch accumulators are linear in the stream") {
  const SketchShape shape{5, 64};
  const StreamSegment p = testing::random_walk_stream(32, 80, 1);
  const StreamSegment v = testing::random_walk_stream(32, 60, 2);

  SignSketch whole(shape, Rng(99));
  SignSketch part_p(shape, Rng(99));
  SignSketch part_v(shape, Rng(99));
  for (const Update& u : p.updates) {
    whole.ingest(u);
    part_p.ingest(u);
  }
  for (const Update& u : v.updates) {
    whole.ingest(u);
    part_v.ingest(u);
  }
  CHECK(whole.table() == part_p.table() + part_v.table());
}

TEST_CASE("a net-zero stream leaves the sketch empty") {
  SignSketch sk(SketchShape{3, 32}, Rng(5));
  for (int i = 0; i < 20; ++i) sk.ingest(Update{i, +1});
  for (int i = 0; i < 20; ++i) sk.ingest(Update{i, -1});
  CHECK(sk.table().isZero(0.0));
  CHECK(sk.f2_estimate() == 0.0);
}

TEST_CASE("a single update touches exactly one bucket per row") {
  SignSketch sk(SketchShape{7, 16}, Rng(3));
  sk.ingest(Update{9, +1});
  for (Eigen::Index r = 0; r < sk.rows(); ++r) {
    int nonzero = 0;
    for (Eigen::Index c = 0; c < sk.cols(); ++c) {
      if (sk.table()(r, c) != 0.0) {
        ++nonzero;
        CHECK(std::abs(sk.table()(r, c)) == 1.0);
      }
    }
    CHECK(nonzero == 1);
  }
}

TEST_CASE("accumulators equal the sketch of the net frequency vector") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SignSketch sk(SketchShape{5, 48}, Rng(seed + 100));
    const StreamSegment s = testing::random_walk_stream(24, 96, seed);
    FrequencyVector fv(24);
    for (const Update& u : s.updates) {
      sk.ingest(u);
      apply_update(fv, u);
    }
    CHECK(sk.table() == sketch_of_vector(sk, fv));
  }
}

TEST_CASE("running row squared-norms match direct recomputation") {
  SignSketch sk(SketchShape{5, 32}, Rng(17));
  const StreamSegment s = testing::random_walk_stream(16, 200, 4);
  for (const Update& u : s.updates) sk.ingest(u);
  for (Eigen::Index r = 0; r < sk.rows(); ++r) {
    CHECK(sk.row_squares()[r] == doctest::Approx(sk.table().row(r).squaredNorm()));
  }
}

TEST_CASE("an empty tracker estimates zero and a 1-sparse vector exactly") {
  StrongTrackerF2 t(SketchShape{5, 64}, Rng(1));
  CHECK(t.estimate() == 0.0);
  for (int i = 0; i < 9; ++i) t.ingest(Update{3, +1});
  CHECK(t.estimate() == 81.0);
}

TEST_CASE("tracker accuracy on random turnstile streams") {
  const SketchShape shape = tracker_shape(0.25, 0.1 / 2000.0);
  int good = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    StrongTrackerF2 t(shape, Rng(trial * 7 + 1));
    const StreamSegment s = testing::tracker_test_stream(256, 2000, trial);
    FrequencyVector fv(256);
    double worst = 0.0;
    for (const Update& u : s.updates) {
      t.ingest(u);
      apply_update(fv, u);
      const double truth = f2_exact(fv);
      if (truth > 0.0) worst = std::max(worst, std::abs(t.estimate() - truth) / truth);
    }
    if (worst <= 0.25) ++good;
  }
  CHECK(good >= 8);
}

TEST_CASE("difference estimator basics") {
  DiffEstimatorF2 de(SketchShape{5, 128}, Rng(8));
  CHECK_THROWS_AS(de.estimate(), std::logic_error);
  de.enable();
  CHECK(de.estimate() == 0.0);
  CHECK_THROWS_AS(de.enable(), std::logic_error);
}

TEST_CASE("difference estimator tracks prefix-to-now differences") {
  int good_insert = 0, good_delete = 0;
  const SketchShape shape = diff_shape(0.25, 0.1, 0.05);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    // p: 100 distinct units; suffix adds 10 more distinct units
    DiffEstimatorF2 de(shape, Rng(trial * 13 + 3));
    for (int i = 0; i < 100; ++i) de.ingest(Update{i, +1});
    de.enable();
    for (int i = 100; i < 110; ++i) de.ingest(Update{i, +1});
    if (std::abs(de.estimate() - 10.0) <= 0.1 * 100.0) ++good_insert;

    // deletion suffix: remove 5 of the prefix items
    DiffEstimatorF2 dd(shape, Rng(trial * 13 + 4));
    for (int i = 0; i < 100; ++i) dd.ingest(Update{i, +1});
    dd.enable();
    for (int i = 0; i < 5; ++i) dd.ingest(Update{i, -1});
    if (std::abs(dd.estimate() - (-5.0)) <= 0.1 * 100.0) ++good_delete;
  }
  CHECK(good_insert >= 17);
  CHECK(good_delete >= 17);
}

TEST_CASE("sketch state dump carries seeds and accumulators") {
  SignSketch sk(SketchShape{3, 8}, Rng(5));
  sk.ingest(Update{2, +3});
  std::ostringstream out;
  sk.dump(out);
  std::istringstream in(out.str());
  std::string tag, version;
  Eigen::Index rows = 0, cols = 0;
  in >> tag >> version >> rows >> cols;
  CHECK(tag == "signsketch");
  CHECK(version == "v1");
  CHECK(rows == 3);
  CHECK(cols == 8);
  int hash_lines = 0;
  std::string line;
  std::getline(in, line);
  double table_sum = 0.0;
  while (std::getline(in, line)) {
    if (line.rfind("hash ", 0) == 0) {
      ++hash_lines;
    } else {
      std::istringstream ls(line);
      double v;
      while (ls >> v) table_sum += std::abs(v);
    }
  }
  CHECK(hash_lines == 3);
  CHECK(table_sum == 9.0);  // |+-3| once per row
}

TEST_CASE("cross-product estimator is unbiased") {
  // fixed small p, v with inner product 50
  double sum = 0.0;
  const int runs = 10000;
  for (std::uint64_t run = 0; run < runs; ++run) {
    DiffEstimatorF2 de(SketchShape{7, 512}, Rng(run + 77));
    for (int i = 0; i < 100; ++i) de.ingest(Update{i, +1});
    de.enable();
    for (int i = 50; i < 150; ++i) de.ingest(Update{i, +1});
    sum += de.cross_estimate();
  }
  const double mean = sum / runs;
  CHECK(std::abs(mean - 50.0) <= 0.5);
}
