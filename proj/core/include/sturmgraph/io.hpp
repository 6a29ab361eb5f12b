#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/graphs.hpp"
#include "sturmgraph/nodal.hpp"
#include "sturmgraph/spectrum.hpp"

namespace sturmgraph {

/// Model files are `key = value` lines; `#` starts a comment.
///
///   alpha      = golden | silver | <real in (0,1)>
///   theta      = <real in [0,1)>
///   precision  = float | convergent:<depth>
///   spacing    = <real > 0>                      chain edge length L
///   word       = <digits>                        overrides alpha/theta
///   decoration.<letter> = point
///   decoration.<letter> = tooth <length>
///   decoration.<letter> = edges 0-1:1.5,1-2:0.5,2-0:1 [base=<id>]
///
/// Letters without a decoration line get a bare vertex, except that a file
/// with no decoration lines at all describes the unit comb (tooth 1 on letter
/// 1). Unknown keys, duplicates and malformed values throw InputError with the
/// line number.
ModelSpec parse_model(std::string_view text);
ModelSpec load_model(const std::string& path);

/// Canonical text form; parse_model(model_to_text(m)) reproduces m.
std::string model_to_text(const ModelSpec& model);

/// Parses a whole string as a finite real / integer, or throws InputError
/// naming `what`.
double parse_real(std::string_view s, const std::string& what);
std::int64_t parse_integer(std::string_view s, const std::string& what);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// 12 significant digits, shortest of fixed/scientific ("%.12g").
std::string format_real(double x);

void write_spectrum_csv(std::ostream& os, const Spectrum& s);
/// Columns mu,multiplicity; values within merge_tol are merged.
void write_discrete_spectrum_csv(std::ostream& os, const DiscreteSpectrum& s, double merge_tol = 1e-9);
void write_edge_list_csv(std::ostream& os, const CompactMetricGraph& g);
void write_prufer_csv(std::ostream& os, const PruferTrace& trace);

}  // namespace sturmgraph
