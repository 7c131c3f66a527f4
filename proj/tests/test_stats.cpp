#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcount/error.hpp"
#include "rcount/stats.hpp"
#include "support/published.hpp"

using namespace rcount;
using namespace rcount::testing;

namespace {

RecordCorpus load(const std::string& name) { return read_records_csv_file(data_path(name)); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rcount_test_" + name);
}

}  // namespace

TEST_CASE("records") {
  const CountRecord r = make_record("7916", 6, 2, 12, 16);
  CHECK(r.ratio() == mpq_class(4, 3));
  CHECK(r.ratio_decimal() == doctest::Approx(4.0 / 3.0));
  CHECK(format_record_csv(r) == "7916,6,2,12,16,4,3,1.333333333");
  CHECK_THROWS_AS(make_record("7916", 6, 2, 0, 16), Error);
  CHECK_THROWS_AS(make_record("7916", 0, 2, 12, 16), Error);
}

TEST_CASE("record CSV round trip") {
  const std::vector<CountRecord> records{make_record("7916", 6, 2, 12, 16),
                                         make_record("7672", 6, 2, 8, 8),
                                         make_record("37615476241376327552", 12, 2, 2016, 5120)};
  std::stringstream ss;
  write_records_csv(ss, records, {"first", "second"});
  const RecordCorpus back = read_records_csv(ss);
  CHECK(back.records == records);
  CHECK(back.comments == std::vector<std::string>{"first", "second"});

  std::stringstream again;
  write_records_csv(again, back.records, back.comments);
  std::stringstream orig;
  write_records_csv(orig, records, {"first", "second"});
  CHECK(again.str() == orig.str());
}

TEST_CASE("malformed record CSV") {
  std::istringstream wrong_ratio(std::string(kRecordCsvHeader) + "\n7916,6,2,12,16,3,2,1.5\n");
  CHECK_THROWS_AS(read_records_csv(wrong_ratio), Error);
  std::istringstream missing(std::string(kRecordCsvHeader) + "\n7916,6,2,12\n");
  CHECK_THROWS_AS(read_records_csv(missing), Error);
  std::istringstream header("code,n\n");
  CHECK_THROWS_AS(read_records_csv(header), Error);
  CHECK_THROWS_AS(read_records_csv_file("/nonexistent/records.csv"), Error);
}

TEST_CASE("quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1);
  CHECK(quantile_sorted(v, 1.0) == 4);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted({7}, 0.3) == 7);

  // Monotone in p and bounded by the extremes.
  const std::vector<double> w{1, 1, 1.2, 1.5, 2, 2.5, 4};
  double last = w.front();
  for (int i = 0; i <= 20; ++i) {
    const double q = quantile_sorted(w, i / 20.0);
    CHECK(q >= last);
    CHECK(q <= w.back());
    last = q;
  }
}

TEST_CASE("ratio summaries") {
  const std::vector<CountRecord> six{make_record("7916", 6, 2, 12, 16),
                                     make_record("7672", 6, 2, 8, 8)};
  const RatioSummary s = summarize_ratios(six);
  CHECK(s.n == 6);
  CHECK(s.count_equal == 1);
  CHECK(s.count_differ == 1);
  CHECK(s.theta == mpq_class(4, 3));
  CHECK(s.min == 1.0);
  CHECK(s.max == doctest::Approx(4.0 / 3.0));
  CHECK(s.alpha_lower == doctest::Approx(std::pow(4.0 / 3.0, 1.0 / 3.0)));

  const auto corpus = load("lower_bound_graphs.csv").records;
  CHECK(summarize_ratios(corpus).n == 0);
  const auto per_n = ratio_stats(corpus);
  REQUIRE(per_n.size() == 7);
  for (std::size_t i = 0; i < per_n.size(); ++i) CHECK(per_n[i].n == static_cast<int>(6 + i));
  CHECK(per_n.back().theta == mpq_class(160, 63));

  CHECK_THROWS_AS(summarize_ratios({}), Error);
  try {
    summarize_ratios({});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_summary);
  }
}

TEST_CASE("alpha lower bounds reproduce the published values") {
  const auto corpus = load("lower_bound_graphs.csv").records;
  REQUIRE(corpus.size() == kPublishedAlpha.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CAPTURE(corpus[i].code);
    CHECK(std::abs(alpha_lower_bound(corpus[i], 2) - kPublishedAlpha[i]) <= 1e-4);
  }
  CHECK_THROWS_AS(alpha_lower_bound(make_record("7", 3, 2, 1, 1), 2), Error);
}

TEST_CASE("alpha interval") {
  const auto corpus = load("lower_bound_graphs.csv").records;
  const AlphaBounds b = alpha_bounds_report(corpus);
  CHECK(b.lower == doctest::Approx(std::pow(4.0 / 3.0, 3.0 / 8.0)));
  CHECK(b.upper == doctest::Approx(2 * std::sqrt(3.0)));
  CHECK(b.statement() == "1.1139 ≤ α_2 ≤ 3.4642");
  CHECK(alpha_bounds_report({}).lower == 1);
  CHECK_THROWS_AS(alpha_bounds_report(corpus, 3), Error);
}

TEST_CASE("pair distribution") {
  std::vector<CountRecord> records;
  for (int i = 0; i < 3; ++i) records.push_back(make_record(std::to_string(i), 6, 2, 8, 8));
  records.push_back(make_record("9", 6, 2, 12, 16));
  const auto pairs = pair_distribution(records);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == PairCount{8, 8, 3});
  CHECK(pairs[1] == PairCount{12, 16, 1});

  std::ifstream in(data_path("pairs_n12_published.csv"));
  const auto published = merge_pairs(read_pairs_csv(in));
  REQUIRE(!published.empty());
  CHECK(published.front() == PairCount{768, 1024, 76025});

  std::stringstream ss;
  write_pairs_csv(ss, published);
  CHECK(read_pairs_csv(ss) == published);

  const auto merged = merge_pairs({{8, 8, 2}, {12, 16, 5}, {8, 8, 4}});
  CHECK(merged == std::vector<PairCount>{{8, 8, 6}, {12, 16, 5}});
}

TEST_CASE("published box summaries are consistent with the table") {
  std::ifstream in(data_path("ratio_box_summaries.csv"));
  const auto boxes = read_box_summaries_csv(in);
  REQUIRE(boxes.size() == 5);
  const auto corpus = load("lower_bound_graphs.csv").records;
  for (const auto& b : boxes) {
    CHECK(b.min <= b.q1);
    CHECK(b.q1 <= b.median);
    CHECK(b.median <= b.q3);
    CHECK(b.q3 <= b.max);
    // The box maximum is the table's ratio at the same n.
    for (const auto& r : corpus)
      if (r.n == b.n) CHECK(std::abs(b.max - r.ratio_decimal()) < 1e-4);
  }
}

TEST_CASE("graph seeds") {
  CHECK(graph_seed(1, "7916") == graph_seed(1, "7916"));
  CHECK(graph_seed(1, "7916") != graph_seed(2, "7916"));
  CHECK(graph_seed(1, "7916") != graph_seed(1, "7672"));
}

TEST_CASE("batch over the 6-vertex census") {
  const auto codes = enumerate_min_rigid(6, 3);
  BatchConfig cfg;
  cfg.threads = 2;
  const BatchResult res = batch_count(codes, 2, cfg);
  CHECK(res.failed.empty());
  CHECK(res.unreliable.empty());
  REQUIRE(res.records.size() == 2);
  for (const auto& r : res.records) {
    if (r.code == canonical_form(graphs::three_prism()).str()) {
      CHECK(r.c == 12);
      CHECK(r.c_star == 16);
    } else {
      CHECK(r.c == 8);
      CHECK(r.c_star == 8);
    }
  }
}

TEST_CASE("batch skips non-rigid graphs and resumes from a checkpoint") {
  const auto path = temp_file("checkpoint.csv");
  std::filesystem::remove(path);
  const std::vector<GraphCode> codes{encode_graph(graphs::three_prism()),
                                     encode_graph(Graph::cycle(4)),
                                     encode_graph(graphs::k33())};
  BatchConfig cfg;
  cfg.checkpoint = path.string();
  const BatchResult first = batch_count(codes, 2, cfg);
  CHECK(first.records.size() == 2);
  CHECK(first.skipped.size() == 1);
  CHECK(first.resumed == 0);

  const BatchResult second = batch_count(codes, 2, cfg);
  CHECK(second.resumed == 2);
  CHECK(second.records == first.records);
  std::filesystem::remove(path);
}
