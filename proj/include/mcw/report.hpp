#pragma once

// CSV emission. Numbers are printed with %.17g so files round-trip exactly
// and re-runs produce byte-identical bodies.

#include <ostream>
#include <string>
#include <vector>

#include "mcw/analysis.hpp"
#include "mcw/noise.hpp"
#include "mcw/sim.hpp"

namespace mcw::report {

std::string format_double(double v);

/// Filesystem-friendly form of a label: "OTFS(K=8,L=8)" -> "otfs_k8_l8".
std::string slug(const std::string& label);

/// subcarrier,variance
void write_variance_csv(std::ostream& os, const RVector& variances);

struct SummaryRow {
  std::string waveform;
  std::string profile;
  double mean = 0.0;
  double std_dev = 0.0;
};
/// waveform,profile,mean,std
void write_whitening_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

/// snr_db,bits,errors,ber,stderr
void write_ber_csv(std::ostream& os, const BerCurve& curve);

/// parameter,label,snr_db,bits,errors,ber,stderr
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

/// waveform,n,tolerance,nonzeros,density,min_row,max_row
void write_sparsity_csv(std::ostream& os, const std::vector<SparsityReport>& reports);

/// index,re,im
void write_complex_csv(std::ostream& os, const CVector& v);

/// Parses a subcarrier,variance file back into a vector.
RVector read_variance_csv(std::istream& is);

}  // namespace mcw::report
