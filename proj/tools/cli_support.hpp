#pragma once

// Grid parsing, CSV I/O and the thread pool behind the command-line tool.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracosc::cli {

// Malformed command-line input; the tool exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points of "lo:step:hi", both endpoints included. The last point is kept
/// when it lies within 1e-12 (relative to max(1, |hi|)) of hi and is then set
/// to hi exactly. A bare number is a one-point grid.
std::vector<double> parse_grid(const std::string& spec);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits in scientific notation, the shortest fixed width
/// that round-trips every double.
std::string format_number(double x);

/// Header row, then one row per record; LF line endings.
void write_csv(std::ostream& out, const Table& table);

/// Inverse of write_csv. Throws UsageError on ragged rows or unparsable cells.
Table read_csv(std::istream& in);

/// FRACOSC_THREADS when set to a positive integer, else the hardware
/// concurrency (at least 1).
int thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. After a
/// failure no new indices start, and once all threads finish the exception of
/// the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracosc::cli
