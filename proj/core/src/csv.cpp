#include "maternlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace maternlab::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string hash_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string header_comment(const std::string& experiment, const std::string& canonical_config) {
  return "# matern-lab " + experiment + " config-hash=" + hash_hex(canonical_config);
}

Writer::Writer(std::string header_comment_line) {
  if (!header_comment_line.empty()) out_ = std::move(header_comment_line) + "\n";
}

void Writer::columns(const std::vector<std::string>& names) {
  for (const auto& n : names) cell(n);
  end_row();
}

void Writer::sep() {
  if (row_open_) out_ += ',';
  row_open_ = true;
}

Writer& Writer::cell(double v) {
  sep();
  out_ += format_double(v);
  return *this;
}

Writer& Writer::cell(long long v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

Writer& Writer::cell(const std::string& v) {
  sep();
  out_ += v;
  return *this;
}

void Writer::end_row() {
  out_ += '\n';
  row_open_ = false;
}

}  // namespace maternlab::csv
