#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cycleflux {

/// Shortest decimal that reads back to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double x);

/// Minimal RFC 4180 writer; fields with commas, quotes or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(unsigned long long x);
  CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
  CsvWriter& field(std::size_t x) { return field(static_cast<unsigned long long>(x)); }
  CsvWriter& empty();
  void end_row();

  void header(std::initializer_list<std::string_view> names);
  void header(const std::vector<std::string>& names);

 private:
  void separator();
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace cycleflux
