#pragma once

#include <charconv>
#include <concepts>
#include <ostream>
#include <string>
#include <string_view>

namespace rolr {

/// Minimal CSV emitter. Doubles are printed with 17 significant digits so the
/// output round-trips and is stable across runs.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((put_sep(first), put(fields)), ...);
    os_ << '\n';
  }

  static std::string format(double v);

 private:
  void put_sep(bool& first) {
    if (!first) os_ << ',';
    first = false;
  }
  void put(double v) { os_ << format(v); }
  void put(std::string_view s) { os_ << s; }
  void put(const std::string& s) { os_ << s; }
  void put(const char* s) { os_ << s; }
  void put(bool b) { os_ << (b ? 1 : 0); }
  template <std::integral I>
  void put(I v) {
    os_ << v;
  }

  std::ostream& os_;
};

}  // namespace rolr
