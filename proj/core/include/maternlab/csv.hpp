#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace maternlab::csv {

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_double(double v);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string hash_hex(const std::string& text);

/// "# matern-lab <experiment> config-hash=<hex>"
std::string header_comment(const std::string& experiment, const std::string& canonical_config);

/// Row builder: comma separated, LF terminated.
class Writer {
 public:
  explicit Writer(std::string header_comment_line = {});
  void columns(const std::vector<std::string>& names);
  Writer& cell(double v);
  Writer& cell(long long v);
  Writer& cell(const std::string& v);
  void end_row();
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  bool row_open_ = false;
  void sep();
};

}  // namespace maternlab::csv
