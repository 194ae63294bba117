#include "nys/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nys {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

[[noreturn]] void csv_error(const std::filesystem::path& path, Index line,
                            const std::string& what) {
  throw DataError(path.string() + ":" + format_num(line) + ": " + what);
}

double parse_field(const std::filesystem::path& path, Index line, const std::string& tok) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) csv_error(path, line, "trailing characters in '" + tok + "'");
    if (!std::isfinite(v)) csv_error(path, line, "non-finite value '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    csv_error(path, line, "expected a number, got '" + tok + "'");
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

void write_series_csv(const std::filesystem::path& path, const Series& s) {
  auto out = open_out(path);
  out << "t,value\n";
  for (Index t = 0; t < s.size(); ++t) {
    out << t << ',' << format_num(s.values[static_cast<size_t>(t)]) << '\n';
  }
  finish(out, path);
}

void write_generated_csv(const std::filesystem::path& path, const GeneratedSeries& g) {
  auto out = open_out(path);
  out << "t,value,noise\n";
  for (Index t = 0; t < g.series.size(); ++t) {
    out << t << ',' << format_num(g.series.values[static_cast<size_t>(t)]) << ','
        << format_num(g.noise[static_cast<size_t>(t)]) << '\n';
  }
  finish(out, path);
}

Series read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file '" + path.string() + "'");
  Series s;
  s.origin = "file(" + path.string() + ")";
  std::string line;
  Index line_no = 0;
  if (!std::getline(in, line)) csv_error(path, 1, "empty file");
  ++line_no;
  if (line.rfind("t,value", 0) != 0) {
    csv_error(path, line_no, "expected header starting with 't,value'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2) csv_error(path, line_no, "expected at least two columns");
    s.values.push_back(parse_field(path, line_no, fields[1]));
  }
  if (s.values.empty()) csv_error(path, line_no, "no data rows");
  return s;
}

void write_dataset_csv(const std::filesystem::path& path, const EmbeddedDataset& data) {
  auto out = open_out(path);
  for (Index j = 0; j < data.dim(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << format_num(data.inputs(i, j)) << ',';
    out << format_num(data.targets(i)) << '\n';
  }
  finish(out, path);
}

EmbeddedDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file '" + path.string() + "'");
  std::string line;
  Index line_no = 0;
  if (!std::getline(in, line)) csv_error(path, 1, "empty file");
  ++line_no;
  const auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "y" || header[0] != "x1") {
    csv_error(path, line_no, "expected header x1,...,xd,y");
  }
  const Index d = static_cast<Index>(header.size()) - 1;

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (static_cast<Index>(fields.size()) != d + 1) {
      csv_error(path, line_no, "expected " + format_num(d + 1) + " columns, got " +
                                   format_num(static_cast<Index>(fields.size())));
    }
    for (const auto& f : fields) values.push_back(parse_field(path, line_no, f));
    ++rows;
  }
  if (rows == 0) csv_error(path, line_no, "no data rows");

  EmbeddedDataset data;
  data.inputs.resize(rows, d);
  data.targets.resize(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < d; ++j) {
      data.inputs(i, j) = values[static_cast<size_t>(i * (d + 1) + j)];
    }
    data.targets(i) = values[static_cast<size_t>(i * (d + 1) + d)];
  }
  data.validate();
  return data;
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows) {
  auto out = open_out(path);
  out << "label,n,m,lambda,seed,rmse,runtime_s\n";
  for (const TrialRow& r : rows) {
    out << r.label << ',' << r.n << ',' << r.m << ',' << format_num(r.lambda) << ',' << r.seed
        << ',' << format_num(r.rmse) << ',' << format_num(r.runtime_s) << '\n';
  }
  finish(out, path);
}

void write_sweep_points_csv(const std::filesystem::path& path,
                            const std::vector<SweepPoint>& points) {
  auto out = open_out(path);
  out << "label,axis,rmse_mean,rmse_std,runtime_mean_s\n";
  for (const SweepPoint& p : points) {
    out << p.label << ',' << format_num(p.axis) << ',' << format_num(p.rmse_mean) << ','
        << format_num(p.rmse_std) << ',' << format_num(p.runtime_mean_s) << '\n';
  }
  finish(out, path);
}

void write_spectrum_csv_file(const std::filesystem::path& path, const Spectrum& s, Index top_k) {
  auto out = open_out(path);
  write_spectrum_csv(out, s, top_k);
  finish(out, path);
}

void write_noise_hist_csv(const std::filesystem::path& path, const NoiseReport& report) {
  auto out = open_out(path);
  out << "bin_left,bin_right,count\n";
  for (size_t b = 0; b < report.counts.size(); ++b) {
    out << format_num(report.bin_edges[b]) << ',' << format_num(report.bin_edges[b + 1]) << ','
        << report.counts[b] << '\n';
  }
  finish(out, path);
}

void write_noise_summary(const std::filesystem::path& path, const NoiseReport& report) {
  auto out = open_out(path);
  out << "count = " << report.residuals.size() << '\n';
  out << "mean = " << format_num(report.mean) << '\n';
  out << "variance = " << format_num(report.variance) << '\n';
  out << "std = " << format_num(std::sqrt(report.variance)) << '\n';
  if (report.reference.has_value()) {
    out << "reference.mean = " << format_num(report.reference->mean) << '\n';
    out << "reference.variance = " << format_num(report.reference->variance) << '\n';
    out << "reference.std = " << format_num(std::sqrt(report.reference->variance)) << '\n';
    out << "reference.cdf_gap = " << format_num(report.reference->cdf_gap) << '\n';
  }
  finish(out, path);
}

void write_predictions_csv(const std::filesystem::path& path, const Vec& predictions) {
  auto out = open_out(path);
  out << "index,prediction\n";
  for (Index i = 0; i < predictions.size(); ++i) {
    out << i << ',' << format_num(predictions(i)) << '\n';
  }
  finish(out, path);
}

}  // namespace nys
