#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fermilat/floquet.hpp"
#include "fermilat/laurent.hpp"
#include "fermilat/potential.hpp"

namespace fermilat {

/// 17 significant digits; round-trips every double exactly.
std::string format_double(double x);

/// Potential file: {"q": [q_1, ..., q_d], "values": [Q reals in canonical
/// order]}. Reading validates shape and finiteness (ParseError otherwise).
Potential read_potential(const std::string& path);
std::string potential_json(const Potential& V);
void write_potential(const std::string& path, const Potential& V);

/// Header "k1,...,kd,lambda1,...,lambdaQ", one row per path point.
void write_band_csv(std::ostream& out, const Lattice& lattice,
                    const std::vector<SpectrumSample>& samples);

/// JSON lines, one object {"exp": [...], "re": x, "im": y} per term, sorted
/// lexicographically by exponent.
void write_poly_jsonl(std::ostream& out, const LaurentPoly& p);

/// One point per line, d comma- or whitespace-separated reals; blank lines
/// and lines starting with '#' are skipped.
std::vector<std::vector<double>> read_kpath(const std::string& path, int dimension);

}  // namespace fermilat
