#include "regp/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

namespace regp::io {

namespace {

constexpr const char* kQuadHeader = "index,phi,x";
constexpr const char* kDispHeader = "index,re_gamma,im_gamma";
constexpr const char* kCountHeader = "alpha_re,alpha_im,n";
constexpr const char* kEstimateHeader = "re_alpha,im_alpha,p_w,stderr,significance";

void append_double(std::string& buf, double v) {
  char tmp[32];
  const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
  buf.append(tmp, res.ptr);
}

template <class Int>
void append_int(std::string& buf, Int v) {
  char tmp[24];
  const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
  buf.append(tmp, res.ptr);
}

/// Splits CSV lines into fields and parses them with position-aware errors.
class Reader {
public:
  Reader(std::istream& in, const char* header) : in_(in) {
    if (!next_line()) throw SchemaError(std::string("empty input, expected header '") + header + "'", 1, 1);
    if (line_ != header) throw SchemaError(std::string("expected header '") + header + "', got '" + line_ + "'", 1, 1);
  }

  /// Advances to the next non-empty line and splits it into exactly n fields.
  bool row(std::size_t n) {
    do {
      if (!next_line()) return false;
    } while (line_.empty());
    fields_.clear();
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line_.find(',', start);
      fields_.emplace_back(start, (comma == std::string::npos ? line_.size() : comma) - start);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields_.size() != n) {
      const std::size_t col = fields_.size() > n ? fields_[n].first + 1 : line_.size() + 1;
      throw SchemaError("expected " + std::to_string(n) + " fields, found " + std::to_string(fields_.size()), lineno_,
                        col);
    }
    return true;
  }

  double real(std::size_t i) const {
    const auto [pos, len] = fields_[i];
    double v = 0.0;
    const char* first = line_.data() + pos;
    const auto res = std::from_chars(first, first + len, v);
    if (len == 0 || res.ec != std::errc() || res.ptr != first + len) fail(i, "a number");
    return v;
  }

  template <class Int>
  Int integer(std::size_t i) const {
    const auto [pos, len] = fields_[i];
    Int v = 0;
    const char* first = line_.data() + pos;
    const auto res = std::from_chars(first, first + len, v);
    if (len == 0 || res.ec != std::errc() || res.ptr != first + len) fail(i, "a non-negative integer");
    return v;
  }

  void expect_index(std::size_t i, std::size_t expected) const {
    if (integer<std::size_t>(i) != expected) fail(i, "index " + std::to_string(expected));
  }

private:
  bool next_line() {
    if (!std::getline(in_, line_)) return false;
    ++lineno_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    return true;
  }

  [[noreturn]] void fail(std::size_t i, const std::string& what) const {
    const auto [pos, len] = fields_[i];
    throw SchemaError("field " + std::to_string(i + 1) + " ('" + line_.substr(pos, len) + "') is not " + what,
                      lineno_, pos + 1);
  }

  std::istream& in_;
  std::string line_;
  std::size_t lineno_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> fields_;
};

void flush(std::ostream& out, std::string& buf, bool force) {
  if (force || buf.size() > (1u << 20)) {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  }
}

} // namespace

SchemaError::SchemaError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column) {}

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

void write_quadratures(std::ostream& out, std::span<const states::QuadratureSample> samples) {
  std::string buf = std::string(kQuadHeader) + "\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    append_int(buf, i);
    buf += ',';
    append_double(buf, samples[i].phi);
    buf += ',';
    append_double(buf, samples[i].x);
    buf += '\n';
    flush(out, buf, false);
  }
  flush(out, buf, true);
}

std::vector<states::QuadratureSample> read_quadratures(std::istream& in) {
  Reader r(in, kQuadHeader);
  std::vector<states::QuadratureSample> out;
  while (r.row(3)) {
    r.expect_index(0, out.size());
    out.push_back({r.real(2), r.real(1)});
  }
  return out;
}

void write_displacements(std::ostream& out, std::span<const ecf::DisplacementSample> samples) {
  std::string buf = std::string(kDispHeader) + "\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    append_int(buf, i);
    buf += ',';
    append_double(buf, samples[i].gamma.real());
    buf += ',';
    append_double(buf, samples[i].gamma.imag());
    buf += '\n';
    flush(out, buf, false);
  }
  flush(out, buf, true);
}

std::vector<ecf::DisplacementSample> read_displacements(std::istream& in) {
  Reader r(in, kDispHeader);
  std::vector<ecf::DisplacementSample> out;
  while (r.row(3)) {
    r.expect_index(0, out.size());
    out.push_back({Complex(r.real(1), r.real(2))});
  }
  return out;
}

void write_counts(std::ostream& out, const std::vector<CountBlock>& blocks) {
  std::string buf = std::string(kCountHeader) + "\n";
  for (const auto& b : blocks) {
    std::string prefix;
    append_double(prefix, b.alpha.real());
    prefix += ',';
    append_double(prefix, b.alpha.imag());
    prefix += ',';
    for (const auto n : b.counts) {
      buf += prefix;
      append_int(buf, n);
      buf += '\n';
      flush(out, buf, false);
    }
  }
  flush(out, buf, true);
}

std::vector<CountBlock> read_counts(std::istream& in) {
  Reader r(in, kCountHeader);
  std::vector<CountBlock> out;
  std::map<std::pair<double, double>, std::size_t> where;
  while (r.row(3)) {
    const Complex a(r.real(0), r.real(1));
    const auto n = r.integer<std::uint32_t>(2);
    const auto [it, fresh] = where.try_emplace({a.real(), a.imag()}, out.size());
    if (fresh) out.push_back({a, {}});
    out[it->second].counts.push_back(n);
  }
  return out;
}

void write_estimate(std::ostream& out, const sampling::QuasiprobEstimate& est) {
  std::string buf = std::string(kEstimateHeader) + "\n";
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    append_double(buf, est.grid[i].real());
    buf += ',';
    append_double(buf, est.grid[i].imag());
    buf += ',';
    append_double(buf, est.value[i]);
    buf += ',';
    append_double(buf, est.std_error[i]);
    buf += ',';
    append_double(buf, est.significance(i));
    buf += '\n';
  }
  flush(out, buf, true);
}

sampling::QuasiprobEstimate read_estimate(std::istream& in) {
  Reader r(in, kEstimateHeader);
  sampling::QuasiprobEstimate est;
  while (r.row(5)) {
    est.grid.emplace_back(r.real(0), r.real(1));
    est.value.push_back(r.real(2));
    est.std_error.push_back(r.real(3));
    r.real(4);
  }
  return est;
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::string buf;
  for (std::size_t i = 0; i < header.size(); ++i) buf += (i ? "," : "") + header[i];
  buf += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) buf += ',';
      append_double(buf, row[i]);
    }
    buf += '\n';
  }
  flush(out, buf, true);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return f;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return f;
}

} // namespace regp::io
