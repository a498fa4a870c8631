#ifndef DYNBT_DATA_HPP
#define DYNBT_DATA_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dynbt/types.hpp"

namespace dynbt {

// Loads a match CSV (UTF-8, header `time,team_a,team_b,wins_a,wins_b`).
// Teams are indexed by first appearance; times are min-max normalized to
// [0, 1] (all-equal times map to 0) with raw values preserved in the Dataset.
// Throws ParseError (malformed row, with line number) or ValidationError
// (bad header, empty file, negative wins, zero-game row, team_a == team_b).
Dataset load_csv(const std::string& path);
Dataset load_csv(std::istream& in);

// Writes the dataset back in the same CSV format, raw times included, records
// in their stored (time-sorted) order. Round-trips through load_csv.
void write_csv(const Dataset& dataset, const std::string& path);
void write_csv(const Dataset& dataset, std::ostream& out);

// Affine min-max map onto [0, 1]; all-equal inputs map to all zeros.
// Throws DomainError on empty or non-finite input.
std::vector<double> normalize_times(const std::vector<double>& raw_times);

// Win counts among records at exactly time t (which must be one of
// dataset.distinct_times(); otherwise UnknownTimeError).
CountMatrix raw_count_matrix(const Dataset& dataset, double t);

}  // namespace dynbt

#endif  // DYNBT_DATA_HPP
