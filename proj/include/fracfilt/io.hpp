#pragma once

#include <string>
#include <vector>

#include "fracfilt/lattice.hpp"

namespace ff::io {

/// CSV export with the fixed header `i,j,z1,z2,value` (doubles as %.17g).
void write_field_csv(const std::string& path, const lattice::SampledField2D& f);

/// Binary round-trip format: magic "FFLD", u32 version, u64 n1, n2,
/// f64 T1, T2, then row-major f64 values. Bit-exact on read back.
void write_field_bin(const std::string& path, const lattice::SampledField2D& f);
lattice::SampledField2D read_field_bin(const std::string& path);

struct TraceRow {
    double z1, z2, sigma, pi, se, n_eff;
};

/// CSV export with the fixed header `z1,z2,sigma,pi,se,n_eff`.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

std::string format_double(double v);

} // namespace ff::io
