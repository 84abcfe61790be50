#include "cli_support.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace fracosc::cli {

namespace {

double parse_number(const std::string& s, const std::string& context) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) {
    throw UsageError("cannot parse '" + s + "' as a number in " + context);
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_number(parts[0], "grid '" + spec + "'")};
  if (parts.size() != 3) throw UsageError("grid '" + spec + "' is not of the form lo:step:hi");
  const double lo = parse_number(parts[0], "grid '" + spec + "'");
  const double step = parse_number(parts[1], "grid '" + spec + "'");
  const double hi = parse_number(parts[2], "grid '" + spec + "'");
  if (!std::isfinite(lo) || !std::isfinite(step) || !std::isfinite(hi)) {
    throw UsageError("grid '" + spec + "' has a non-finite entry");
  }
  if (!(step > 0.0)) throw UsageError("grid '" + spec + "' needs a positive step");
  if (hi < lo) throw UsageError("grid '" + spec + "' has hi < lo");
  const double tol = 1e-12 * std::max(1.0, std::abs(hi));
  const double count = std::floor((hi - lo + tol) / step);
  if (count > 1e8) throw UsageError("grid '" + spec + "' has more than 1e8 points");
  const auto n = static_cast<std::size_t>(count) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  if (std::abs(grid.back() - hi) <= tol) grid.back() = hi;
  return grid;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row[j]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split(line, ',');
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      throw UsageError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(table.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, "CSV line " + std::to_string(line_no)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

int thread_count() {
  if (const char* env = std::getenv("FRACOSC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::size_t error_index = n;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error = std::current_exception();
          error_index = i;
        }
        next = n;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace fracosc::cli
