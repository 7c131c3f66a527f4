#include "rcount/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rcount/error.hpp"
#include "rcount/rigidity.hpp"

namespace rcount {

mpq_class CountRecord::ratio() const {
  mpq_class q(mpz_class(std::to_string(c_star)), mpz_class(std::to_string(c)));
  q.canonicalize();
  return q;
}

double CountRecord::ratio_decimal() const {
  return static_cast<double>(c_star) / static_cast<double>(c);
}

CountRecord make_record(std::string code, int n, int d, std::uint64_t c,
                        std::uint64_t c_star) {
  if (c < 1 || c_star < 1)
    throw Error(Errc::domain, "counts must be finite and >= 1");
  if (n < 1 || d < 1) throw Error(Errc::domain, "n and d must be positive");
  GraphCode::parse(code);  // validates the decimal code
  return CountRecord{std::move(code), n, d, c, c_star};
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(Errc::parse, "bad " + what + " '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(Errc::parse, what + " out of range '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  const auto v = parse_u64(s, what);
  if (v > 1000000) throw Error(Errc::parse, what + " out of range '" + s + "'");
  return static_cast<int>(v);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::parse, "bad " + what + " '" + s + "'");
  }
  if (used != s.size()) throw Error(Errc::parse, "bad " + what + " '" + s + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Reads '#' comments and returns the data lines after the header.
std::vector<std::string> read_table(std::istream& in, const std::string& header,
                                    std::vector<std::string>* comments) {
  std::vector<std::string> rows;
  std::string line;
  bool seen_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (comments) {
        std::string c = line.substr(1);
        if (!c.empty() && c[0] == ' ') c.erase(0, 1);
        comments->push_back(c);
      }
      continue;
    }
    if (!seen_header) {
      if (line != header)
        throw Error(Errc::parse, "line " + std::to_string(lineno) +
                                     ": expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    rows.push_back(line);
  }
  if (!seen_header) throw Error(Errc::parse, "missing header '" + header + "'");
  return rows;
}

}  // namespace

std::string format_record_csv(const CountRecord& rec) {
  const mpq_class q = rec.ratio();
  return rec.code + "," + std::to_string(rec.n) + "," + std::to_string(rec.d) +
         "," + std::to_string(rec.c) + "," + std::to_string(rec.c_star) + "," +
         q.get_num().get_str() + "," + q.get_den().get_str() + "," +
         format_double(rec.ratio_decimal());
}

void write_records_csv(std::ostream& out, const std::vector<CountRecord>& records,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) out << format_record_csv(r) << '\n';
}

namespace {

CountRecord parse_record_row(const std::string& line) {
  const auto cells = split_csv(line);
  if (cells.size() != 8)
    throw Error(Errc::parse, "expected 8 columns in '" + line + "'");
  CountRecord rec = make_record(cells[0], parse_int(cells[1], "n"),
                                parse_int(cells[2], "d"),
                                parse_u64(cells[3], "c"),
                                parse_u64(cells[4], "c_star"));
  const mpq_class q = rec.ratio();
  if (q.get_num().get_str() != cells[5] || q.get_den().get_str() != cells[6])
    throw Error(Errc::parse, "ratio columns disagree with c_star/c in '" + line + "'");
  const double dec = parse_double(cells[7], "ratio_dec");
  if (std::abs(dec - rec.ratio_decimal()) > 1e-6 * rec.ratio_decimal())
    throw Error(Errc::parse, "ratio_dec disagrees with c_star/c in '" + line + "'");
  return rec;
}

}  // namespace

RecordCorpus read_records_csv(std::istream& in) {
  RecordCorpus corpus;
  for (const auto& row : read_table(in, kRecordCsvHeader, &corpus.comments))
    corpus.records.push_back(parse_record_row(row));
  return corpus;
}

RecordCorpus read_records_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open '" + path + "'");
  return read_records_csv(in);
}

// ---------------------------------------------------------------------------
// Ratio statistics

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(Errc::empty_summary, "no values");
  const double h = (static_cast<double>(sorted.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double alpha_lower_bound(const CountRecord& rec, int d) {
  if (rec.n <= d + 1)
    throw Error(Errc::domain, "alpha bound needs n > d + 1 (n = " +
                                  std::to_string(rec.n) + ")");
  return std::pow(rec.ratio_decimal(), 1.0 / (rec.n - d - 1));
}

RatioSummary summarize_ratios(const std::vector<CountRecord>& records) {
  if (records.empty()) throw Error(Errc::empty_summary, "no records to summarize");
  RatioSummary s;
  s.n = records.front().n;
  std::vector<double> ratios;
  s.theta = records.front().ratio();
  for (const auto& r : records) {
    if (r.n != s.n) s.n = 0;
    ratios.push_back(r.ratio_decimal());
    (r.c == r.c_star ? s.count_equal : s.count_differ) += 1;
    const mpq_class q = r.ratio();
    if (q > s.theta) s.theta = q;
    if (r.n > r.d + 1) s.alpha_lower = std::max(s.alpha_lower, alpha_lower_bound(r, r.d));
  }
  std::sort(ratios.begin(), ratios.end());
  s.min = ratios.front();
  s.q1 = quantile_sorted(ratios, 0.25);
  s.median = quantile_sorted(ratios, 0.5);
  s.q3 = quantile_sorted(ratios, 0.75);
  s.max = ratios.back();
  return s;
}

std::vector<RatioSummary> ratio_stats(const std::vector<CountRecord>& records) {
  if (records.empty()) throw Error(Errc::empty_summary, "no records to summarize");
  std::map<int, std::vector<CountRecord>> by_n;
  for (const auto& r : records) by_n[r.n].push_back(r);
  std::vector<RatioSummary> out;
  for (const auto& [n, group] : by_n) out.push_back(summarize_ratios(group));
  return out;
}

std::string AlphaBounds::statement(int d) const {
  // Round outwards so the printed interval still contains the bounds.
  const double lo = std::floor(lower * 1e4) / 1e4;
  const double hi = std::ceil(upper * 1e4) / 1e4;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.4f ≤ α_%d ≤ %.4f", lo, d, hi);
  return buf;
}

AlphaBounds alpha_bounds_report(const std::vector<CountRecord>& records, int d) {
  if (d != 2) throw Error(Errc::domain, "an upper bound is only known for d = 2");
  AlphaBounds b;
  b.upper = 2.0 * std::sqrt(3.0);
  for (const auto& r : records)
    if (r.n > d + 1) b.lower = std::max(b.lower, alpha_lower_bound(r, d));
  return b;
}

// ---------------------------------------------------------------------------
// Pair histograms

std::vector<PairCount> merge_pairs(const std::vector<PairCount>& pairs) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> freq;
  for (const auto& p : pairs) freq[{p.c, p.c_star}] += p.frequency;
  std::vector<PairCount> out;
  for (const auto& [key, f] : freq) out.push_back({key.first, key.second, f});
  std::stable_sort(out.begin(), out.end(), [](const PairCount& a, const PairCount& b) {
    return a.frequency > b.frequency;
  });
  return out;
}

std::vector<PairCount> pair_distribution(const std::vector<CountRecord>& records) {
  std::vector<PairCount> pairs;
  for (const auto& r : records) pairs.push_back({r.c, r.c_star, 1});
  return merge_pairs(pairs);
}

void write_pairs_csv(std::ostream& out, const std::vector<PairCount>& pairs) {
  out << "c,c_star,frequency\n";
  for (const auto& p : pairs)
    out << p.c << ',' << p.c_star << ',' << p.frequency << '\n';
}

std::vector<PairCount> read_pairs_csv(std::istream& in) {
  std::vector<PairCount> out;
  for (const auto& row : read_table(in, "c,c_star,frequency", nullptr)) {
    const auto cells = split_csv(row);
    if (cells.size() != 3) throw Error(Errc::parse, "expected 3 columns in '" + row + "'");
    out.push_back({parse_u64(cells[0], "c"), parse_u64(cells[1], "c_star"),
                   parse_u64(cells[2], "frequency")});
  }
  return out;
}

std::vector<BoxSummary> read_box_summaries_csv(std::istream& in) {
  std::vector<BoxSummary> out;
  for (const auto& row : read_table(in, "n,min,q1,median,q3,max", nullptr)) {
    const auto cells = split_csv(row);
    if (cells.size() != 6) throw Error(Errc::parse, "expected 6 columns in '" + row + "'");
    BoxSummary b;
    b.n = parse_int(cells[0], "n");
    b.min = parse_double(cells[1], "min");
    b.q1 = parse_double(cells[2], "q1");
    b.median = parse_double(cells[3], "median");
    b.q3 = parse_double(cells[4], "q3");
    b.max = parse_double(cells[5], "max");
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Batch counting

std::uint64_t graph_seed(std::uint64_t seed, const std::string& code) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : code) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return trial_seed(seed ^ h, 0);
}

namespace {

enum class Outcome { pending, counted, resumed, skipped, failed };

struct Slot {
  Outcome outcome = Outcome::pending;
  CountRecord record;
  std::string message;
  bool unreliable = false;
};

std::map<std::string, CountRecord> load_checkpoint(const std::string& path, int d) {
  std::map<std::string, CountRecord> done;
  std::ifstream in(path);
  if (!in) return done;
  for (const auto& r : read_records_csv(in).records)
    if (r.d == d) done[r.code] = r;
  return done;
}

}  // namespace

BatchResult batch_count(const std::vector<GraphCode>& codes, int d,
                        const BatchConfig& cfg) {
  if (d < 1) throw Error(Errc::domain, "dimension must be >= 1");
  std::vector<Slot> slots(codes.size());
  std::map<std::string, CountRecord> done;
  std::ofstream checkpoint;
  std::mutex checkpoint_mutex;
  if (!cfg.checkpoint.empty()) {
    done = load_checkpoint(cfg.checkpoint, d);
    const bool fresh = !std::ifstream(cfg.checkpoint).good();
    checkpoint.open(cfg.checkpoint, std::ios::app);
    if (!checkpoint)
      throw Error(Errc::parse, "cannot write checkpoint '" + cfg.checkpoint + "'");
    if (fresh) checkpoint << kRecordCsvHeader << '\n' << std::flush;
  }

  auto process = [&](std::size_t i) {
    Slot& slot = slots[i];
    const std::string code = codes[i].str();
    if (auto it = done.find(code); it != done.end()) {
      slot.outcome = Outcome::resumed;
      slot.record = it->second;
      return;
    }
    try {
      const Graph g = decode_graph(codes[i]);
      if (!is_minimally_d_rigid(g, d)) {
        slot.outcome = Outcome::skipped;
        slot.message = "not minimally " + std::to_string(d) + "-rigid";
        return;
      }
      CountConfig cc = cfg.count;
      cc.seed = graph_seed(cfg.count.seed, code);
      cc.tracker.threads = 1;
      const CountResult e = realisation_count(g, d, Model::euclidean, cc);
      const CountResult s = realisation_count(g, d, Model::spherical, cc);
      if (!e.value.is_finite() || !s.value.is_finite())
        throw Error(Errc::unreliable_result, "infinite count for a rigid graph");
      slot.record = make_record(code, g.n(), d, e.value.value(), s.value.value());
      slot.unreliable = e.unreliable || s.unreliable;
      if (slot.unreliable) {
        std::string flags;
        for (const auto* r : {&e, &s})
          for (const auto& f : r->flags) flags += (flags.empty() ? "" : ",") + f;
        slot.message = "solver flags: " + flags;
      }
      slot.outcome = Outcome::counted;
      if (checkpoint.is_open() && slot.record.c_star >= slot.record.c) {
        std::lock_guard lock(checkpoint_mutex);
        checkpoint << format_record_csv(slot.record) << '\n' << std::flush;
      }
    } catch (const Error& err) {
      slot.outcome = Outcome::failed;
      slot.message = err.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) process(i);
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchResult res;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& slot = slots[i];
    const std::string code = codes[i].str();
    switch (slot.outcome) {
      case Outcome::resumed:
        ++res.resumed;
        [[fallthrough]];
      case Outcome::counted:
        if (slot.record.c_star < slot.record.c)
          throw Error(Errc::unreliable_result,
                      "graph " + code + ": c*_" + std::to_string(d) + " = " +
                          std::to_string(slot.record.c_star) + " < c_" +
                          std::to_string(d) + " = " + std::to_string(slot.record.c) +
                          "; spherical counts are never smaller, so this result is wrong");
        res.records.push_back(slot.record);
        if (slot.unreliable) res.unreliable.push_back({code, slot.message});
        break;
      case Outcome::skipped:
        res.skipped.push_back({code, slot.message});
        break;
      case Outcome::failed:
        res.failed.push_back({code, slot.message});
        break;
      case Outcome::pending:
        break;
    }
  }
  return res;
}

}  // namespace rcount
