#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ppe/harness/cases.hpp"
#include "ppe/harness/config.hpp"
#include "ppe/harness/csv.hpp"
#include "ppe/harness/predictors.hpp"
#include "ppe/rng.hpp"

namespace ppe::harness {

void PrintTo(CaseId id, std::ostream* os) { *os << case_name(id); }

} // namespace ppe::harness

namespace {

namespace fs = std::filesystem;
using namespace ppe::harness;

const std::string kFixtures = PPE_FIXTURE_DIR;

TEST(OnlineLogistic, ZeroInitPredictsHalf) {
  OnlineLogistic model(3);
  const std::vector<double> x{1.0, -2.0, 0.5};
  EXPECT_DOUBLE_EQ(model.predict(x), 0.5);
  const auto dist = model.predict_dist(x);
  EXPECT_EQ(dist.values, (std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(dist.probs[1], 0.5);
}

TEST(OnlineLogistic, LearnsSeparableData) {
  OnlineLogistic model(2);
  ppe::CounterRng rng(3, "separable");
  const auto draw = [&] {
    std::vector<double> x{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
    return std::pair{x, x[0] + 0.5 * x[1] > 0.0 ? 1.0 : 0.0};
  };
  for (int i = 0; i < 5000; ++i) {
    const auto [x, y] = draw();
    model.update(x, y);
  }
  int correct = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [x, y] = draw();
    correct += (model.predict(x) > 0.5) == (y > 0.5);
  }
  EXPECT_GE(correct / 1000.0, 0.95);
}

TEST(OnlineLogistic, RejectsNonFiniteRows) {
  OnlineLogistic model(1);
  const std::vector<double> bad{std::nan("")};
  EXPECT_FALSE(model.update(bad, 1.0));
  EXPECT_EQ(model.updates(), 0u);
}

TEST(Sigmoid, LogitRoundTrip) {
  for (double p : {0.01, 0.3, 0.5, 0.9}) EXPECT_NEAR(sigmoid(logit(p)), p, 1e-15);
}

const CsvSchema kSchema{{"x1", "x2"}, "y", {0.0, 1.0}};

TEST(Csv, ReadsRowsInOrder) {
  const auto data = ingest_csv(kFixtures + "/three_rows.csv", kSchema);
  ASSERT_EQ(data.size(), 3u);
  EXPECT_EQ(data.x[1], (std::vector<double>{-0.25, 2.0}));
  EXPECT_EQ(data.y, (std::vector<double>{1.0, 0.0, 1.0}));
}

TEST(Csv, ShuffleIsDeterministicPermutation) {
  auto a = ingest_csv(kFixtures + "/three_rows.csv", kSchema);
  auto b = a;
  shuffle(a, 11);
  shuffle(b, 11);
  EXPECT_EQ(a.x, b.x);
  auto sorted = a.y;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<double>{0.0, 1.0, 1.0}));
}

TEST(Csv, RejectsLabelOutsideDomain) {
  try {
    ingest_csv(kFixtures + "/bad_label.csv", kSchema);
    FAIL() << "expected a label domain error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RejectsNonNumericCellAndMissingColumn) {
  EXPECT_THROW(ingest_csv(kFixtures + "/bad_cell.csv", CsvSchema{{"x1"}, "y", {0.0, 1.0}}),
               std::runtime_error);
  std::istringstream in("a,b\n1,2\n");
  EXPECT_THROW(ingest_csv(in, kSchema), std::runtime_error);
}

TEST(Config, ParsesKeyValueFile) {
  const auto cfg = load_config(kFixtures + "/mean_small.cfg", CaseId::mean);
  EXPECT_EQ(cfg.n, 400u);
  EXPECT_DOUBLE_EQ(cfg.budget, 0.05);
  EXPECT_EQ(cfg.grid_size, 32u);
  EXPECT_EQ(cfg.arms, (std::vector<std::string>{"labels_only", "ppi"}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(apply_settings(StreamConfig::defaults_for(CaseId::mean), {{"bogus", "1"}}),
               std::invalid_argument);
  auto cfg = apply_settings(StreamConfig::defaults_for(CaseId::mean), {{"alpha", "1.5"}});
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  std::istringstream in("n 5\n");
  EXPECT_THROW(parse_key_values(in), std::invalid_argument);
  EXPECT_THROW(apply_settings(StreamConfig::defaults_for(CaseId::mean), {{"case", "risk"}}),
               std::invalid_argument);
}

TEST(Config, HashIgnoresOutputDirectoryOnly) {
  auto a = StreamConfig::defaults_for(CaseId::risk);
  auto b = a;
  b.out_dir = "elsewhere";
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  b.seed = 1;
  EXPECT_NE(a.hash(), b.hash());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void expect_identical_trees(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), a));
  }
  ASSERT_FALSE(files.empty());
  for (const auto& rel : files) {
    ASSERT_TRUE(fs::exists(b / rel)) << rel;
    EXPECT_EQ(slurp(a / rel), slurp(b / rel)) << rel;
  }
}

class Rerun : public ::testing::TestWithParam<CaseId> {};

TEST_P(Rerun, ByteIdenticalOutputs) {
  auto cfg = StreamConfig::defaults_for(GetParam());
  cfg.seed = 5;
  switch (GetParam()) {
  case CaseId::mean: cfg.n = 500; cfg.grid_size = 32; break;
  case CaseId::risk: cfg.n = 500; break;
  case CaseId::changepoint: cfg.n = 2000; cfg.grid_size = 16; break;
  case CaseId::causal: cfg.batches = 20; break;
  }
  const auto root = fs::temp_directory_path() / ("ppe_rerun_" + case_name(GetParam()));
  fs::remove_all(root);
  cfg.out_dir = (root / "a").string();
  const auto first = run_case(cfg);
  cfg.out_dir = (root / "b").string();
  const auto second = run_case(cfg);
  EXPECT_EQ(first.dump(), second.dump());
  expect_identical_trees(root / "a", root / "b");
  EXPECT_TRUE(fs::exists(root / "a" / "summary.json"));
  fs::remove_all(root);
}

INSTANTIATE_TEST_SUITE_P(Cases, Rerun,
                         ::testing::Values(CaseId::mean, CaseId::risk, CaseId::changepoint,
                                           CaseId::causal),
                         [](const auto& info) { return case_name(info.param); });

} // namespace
