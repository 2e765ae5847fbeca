#pragma once

#include "regp/ecf.hpp"
#include "regp/sampling.hpp"
#include "regp/states.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regp::io {

using Complex = std::complex<double>;

/// A CSV input that does not match its schema. line and column are 1-based;
/// column counts characters of the offending line.
class SchemaError : public std::runtime_error {
public:
  SchemaError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Photon counts recorded at one displacement of the local oscillator.
struct CountBlock {
  Complex alpha;
  std::vector<std::uint32_t> counts;
};

// index,phi,x
void write_quadratures(std::ostream& out, std::span<const states::QuadratureSample> samples);
std::vector<states::QuadratureSample> read_quadratures(std::istream& in);

// index,re_gamma,im_gamma
void write_displacements(std::ostream& out, std::span<const ecf::DisplacementSample> samples);
std::vector<ecf::DisplacementSample> read_displacements(std::istream& in);

/// alpha_re,alpha_im,n with one row per event; rows of one block share alpha.
/// Reading groups rows by alpha in order of first appearance.
void write_counts(std::ostream& out, const std::vector<CountBlock>& blocks);
std::vector<CountBlock> read_counts(std::istream& in);

/// re_alpha,im_alpha,p_w,stderr,significance. Reading restores grid, value
/// and std_error; meta is left default.
void write_estimate(std::ostream& out, const sampling::QuasiprobEstimate& est);
sampling::QuasiprobEstimate read_estimate(std::istream& in);

/// Generic numeric table with a header row.
void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

/// Opens a file for writing or throws std::runtime_error naming the path.
std::ofstream open_output(const std::filesystem::path& path);
/// Opens a file for reading or throws std::runtime_error naming the path.
std::ifstream open_input(const std::filesystem::path& path);

} // namespace regp::io
