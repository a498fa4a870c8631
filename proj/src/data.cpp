#include "dynbt/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dynbt {

namespace {

constexpr const char* kHeader = "time,team_a,team_b,wins_a,wins_b";

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_time(const std::string& field, long line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": bad time value '" +
                         field + "'",
                     line_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": time is not finite",
                     line_no);
  }
  return value;
}

long parse_wins(const std::string& field, long line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  long value = 0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": bad win count '" +
                         field + "'",
                     line_no);
  }
  if (value < 0) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": negative win count");
  }
  return value;
}

}  // namespace

Dataset load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty file");
  if (strip_cr(line) != kHeader) {
    throw ValidationError("unknown column layout; expected header '" +
                          std::string(kHeader) + "'");
  }

  std::vector<std::string> teams;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& name, long line_no) {
    if (name.empty()) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": empty team name");
    }
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(teams.size());
    teams.push_back(name);
    index.emplace(name, id);
    return id;
  };

  std::vector<MatchRecord> records;
  std::vector<double> raw_times;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    MatchRecord r;
    const double raw_time = parse_time(fields[0], line_no);
    r.team_a = intern(fields[1], line_no);
    r.team_b = intern(fields[2], line_no);
    r.wins_a = parse_wins(fields[3], line_no);
    r.wins_b = parse_wins(fields[4], line_no);
    if (r.team_a == r.team_b) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": team_a equals team_b ('" + fields[1] + "')");
    }
    if (r.wins_a + r.wins_b < 1) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": wins_a + wins_b must be at least 1");
    }
    r.time = raw_time;  // normalized below
    records.push_back(r);
    raw_times.push_back(raw_time);
  }
  if (records.empty()) throw ValidationError("no data rows");

  const std::vector<double> normalized = normalize_times(raw_times);
  for (std::size_t k = 0; k < records.size(); ++k) records[k].time = normalized[k];
  return Dataset::build(std::move(teams), std::move(records), std::move(raw_times));
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return load_csv(in);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << kHeader << '\n';
  char buf[40];
  for (std::size_t k = 0; k < dataset.records().size(); ++k) {
    const MatchRecord& r = dataset.records()[k];
    const double raw = dataset.raw_times()[k];
    // Shortest representation that round-trips the double exactly.
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), raw);
    out.write(buf, ptr - buf);
    out << ',' << dataset.teams()[r.team_a] << ',' << dataset.teams()[r.team_b]
        << ',' << r.wins_a << ',' << r.wins_b << '\n';
  }
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  write_csv(dataset, out);
  if (!out) throw ParseError("write failed: " + path);
}

std::vector<double> normalize_times(const std::vector<double>& raw_times) {
  if (raw_times.empty()) throw DomainError("normalize_times: empty input");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : raw_times) {
    if (!std::isfinite(t)) throw DomainError("normalize_times: non-finite time");
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  std::vector<double> out(raw_times.size(), 0.0);
  if (hi == lo) return out;
  const double span = hi - lo;
  for (std::size_t k = 0; k < raw_times.size(); ++k) {
    out[k] = (raw_times[k] - lo) / span;
  }
  return out;
}

CountMatrix raw_count_matrix(const Dataset& dataset, double t) {
  const auto& times = dataset.distinct_times();
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    throw UnknownTimeError("time " + std::to_string(t) +
                           " is not one of the dataset's distinct times");
  }
  const int k = static_cast<int>(it - times.begin());
  const int n = dataset.team_count();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (long r = dataset.record_begin(k); r < dataset.record_end(k); ++r) {
    const MatchRecord& rec = dataset.records()[r];
    counts(rec.team_a, rec.team_b) += static_cast<double>(rec.wins_a);
    counts(rec.team_b, rec.team_a) += static_cast<double>(rec.wins_b);
  }
  return CountMatrix(std::move(counts));
}

}  // namespace dynbt
