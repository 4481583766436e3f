#pragma once

#include <string>

#include "bns/simulate.hpp"

namespace bns {

/// Series CSV layout:
///   # bns-series delta_t=<value> v0=<value>
///   i,x,v[,z,y]
///   1,...
/// Values are written with 17 significant digits so the roundtrip is lossless.
std::string series_to_csv_text(const ObservationSeries& series);
void series_to_csv_file(const ObservationSeries& series, const std::string& path);

/// Parse errors carry the 1-based line number and, for schema violations, the
/// offending column name.
ObservationSeries series_from_csv_text(const std::string& text);
ObservationSeries series_from_csv_file(const std::string& path);

}  // namespace bns
