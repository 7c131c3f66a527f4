#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rcount/counting.hpp"
#include "rcount/graph.hpp"

namespace rcount {

// One row of a count corpus: c = c_d(G), c_star = c*_d(G).
struct CountRecord {
  std::string code;  // decimal graph code
  int n = 0;
  int d = 0;
  std::uint64_t c = 0;
  std::uint64_t c_star = 0;

  // c_star / c in lowest terms.
  mpq_class ratio() const;
  double ratio_decimal() const;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

// Validates c, c_star >= 1 and n, d > 0.
CountRecord make_record(std::string code, int n, int d, std::uint64_t c,
                        std::uint64_t c_star);

// A CSV corpus: '#' comment lines (provenance) and records.
struct RecordCorpus {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<CountRecord> records;
};

inline constexpr const char* kRecordCsvHeader =
    "code,n,d,c,c_star,ratio_num,ratio_den,ratio_dec";

// Comments first, then the header, then one line per record. The ratio
// columns are derived; ingest checks them against c and c_star.
void write_records_csv(std::ostream& out, const std::vector<CountRecord>& records,
                       const std::vector<std::string>& comments = {});
std::string format_record_csv(const CountRecord& rec);
RecordCorpus read_records_csv(std::istream& in);
RecordCorpus read_records_csv_file(const std::string& path);

struct RatioSummary {
  int n = 0;  // 0 when the records span several vertex counts
  std::size_t count_equal = 0;
  std::size_t count_differ = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  mpq_class theta;      // largest ratio, exact
  double alpha_lower = 1;  // max (c*/c)^(1/(n-d-1)); 1 when undefined
};

// Linear interpolation between order statistics at h = (N-1) p of the
// sorted values (the common "type 7" convention).
double quantile_sorted(const std::vector<double>& sorted, double p);

// Summary of all records taken together; empty input is an error.
RatioSummary summarize_ratios(const std::vector<CountRecord>& records);
// One summary per vertex count, ascending in n.
std::vector<RatioSummary> ratio_stats(const std::vector<CountRecord>& records);

// (c*/c)^(1/(n-d-1)); requires n > d + 1.
double alpha_lower_bound(const CountRecord& rec, int d);

struct AlphaBounds {
  double lower = 1;
  double upper = 0;

  // "1.1139 <= alpha_2 <= 3.4642"
  std::string statement(int d = 2) const;
};

// lower = max alpha_lower_bound over records with n > d + 1 (1 if none);
// upper = 2 sqrt(3), the known upper bound for d = 2.
AlphaBounds alpha_bounds_report(const std::vector<CountRecord>& records, int d = 2);

struct PairCount {
  std::uint64_t c = 0;
  std::uint64_t c_star = 0;
  std::uint64_t frequency = 0;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

// Frequency of each (c, c_star); most frequent first, ties by (c, c_star).
std::vector<PairCount> pair_distribution(const std::vector<CountRecord>& records);
// Merges weighted pairs (e.g. a published histogram) in the same order.
std::vector<PairCount> merge_pairs(const std::vector<PairCount>& pairs);
void write_pairs_csv(std::ostream& out, const std::vector<PairCount>& pairs);
std::vector<PairCount> read_pairs_csv(std::istream& in);

// Five-number summary row of a published ratio box plot.
struct BoxSummary {
  int n = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
// CSV "n,min,q1,median,q3,max" with optional '#' comments.
std::vector<BoxSummary> read_box_summaries_csv(std::istream& in);

struct BatchConfig {
  CountConfig count;
  int threads = 1;
  std::string checkpoint;  // empty: no checkpoint
};

struct BatchIssue {
  std::string code;
  std::string message;
};

struct BatchResult {
  std::vector<CountRecord> records;   // input order
  std::vector<BatchIssue> skipped;    // not minimally d-rigid
  std::vector<BatchIssue> failed;     // solver errors
  std::vector<BatchIssue> unreliable; // counted, but with solver flags
  std::size_t resumed = 0;            // records taken from the checkpoint
};

// Seed for one graph: a stable hash of its code mixed into `seed`, so that
// results do not depend on input order, threads or resumption.
std::uint64_t graph_seed(std::uint64_t seed, const std::string& code);

// Counts c_d and c*_d for every minimally d-rigid graph. Checkpoint lines
// are record CSV rows (appended as graphs finish); existing rows are
// reused. A record with c_star < c aborts with an unreliable-result error.
BatchResult batch_count(const std::vector<GraphCode>& codes, int d,
                        const BatchConfig& cfg);

}  // namespace rcount
