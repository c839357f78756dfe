#include "mcw/report.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "mcw/errors.hpp"

namespace mcw::report {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slug(const std::string& label) {
  std::string out;
  bool sep = false;
  for (char ch : label) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '.' || ch == '-') {
      if (sep && !out.empty()) out.push_back('_');
      sep = false;
      out.push_back(ch == '.' ? 'p' : ch == '-' ? 'm' : static_cast<char>(std::tolower(c)));
    } else if (ch == '(' || ch == ',' || ch == ' ' || ch == '/') {
      sep = true;
    }
  }
  return out;
}

void write_variance_csv(std::ostream& os, const RVector& variances) {
  os << "subcarrier,variance\n";
  for (Index m = 0; m < variances.size(); ++m) os << m << ',' << format_double(variances(m)) << '\n';
}

void write_whitening_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "waveform,profile,mean,std\n";
  for (const auto& r : rows) {
    os << r.waveform << ',' << r.profile << ',' << format_double(r.mean) << ',' << format_double(r.std_dev)
       << '\n';
  }
}

void write_ber_csv(std::ostream& os, const BerCurve& curve) {
  os << "snr_db,bits,errors,ber,stderr\n";
  for (const auto& p : curve.points) {
    os << format_double(p.snr_db) << ',' << p.bits << ',' << p.errors << ',' << format_double(p.ber()) << ','
       << format_double(p.std_error()) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << "parameter,label,snr_db,bits,errors,ber,stderr\n";
  for (const auto& s : points) {
    os << format_double(s.parameter) << ",\"" << s.label << "\"," << format_double(s.point.snr_db) << ','
       << s.point.bits << ',' << s.point.errors << ',' << format_double(s.point.ber()) << ','
       << format_double(s.point.std_error()) << '\n';
  }
}

void write_sparsity_csv(std::ostream& os, const std::vector<SparsityReport>& reports) {
  os << "waveform,n,tolerance,nonzeros,density,min_row,max_row\n";
  for (const auto& r : reports) {
    os << '"' << r.label << "\"," << r.row_counts.size() << ',' << format_double(r.tolerance) << ','
       << r.nonzeros << ',' << format_double(r.density) << ',' << r.min_row_count() << ','
       << r.max_row_count() << '\n';
  }
}

void write_complex_csv(std::ostream& os, const CVector& v) {
  os << "index,re,im\n";
  for (Index i = 0; i < v.size(); ++i) {
    os << i << ',' << format_double(v(i).real()) << ',' << format_double(v(i).imag()) << '\n';
  }
}

RVector read_variance_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "subcarrier,variance") {
    throw ConfigError("read_variance_csv: missing header");
  }
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("read_variance_csv: malformed row '" + line + "'");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  RVector out(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Index>(i)) = values[i];
  return out;
}

}  // namespace mcw::report
