#include "fermilat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fermilat/errors.hpp"

namespace fermilat {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Potential read_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file: " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }

  if (!doc.is_object() || !doc.contains("q") || !doc.contains("values")) {
    throw ParseError(path + ": expected an object with \"q\" and \"values\"");
  }
  const auto& jq = doc["q"];
  if (!jq.is_array() || jq.empty()) throw ParseError(path + ": \"q\" must be a non-empty array");
  std::vector<int> q;
  for (const auto& item : jq) {
    if (!item.is_number_integer() || item.get<long>() < 1) {
      throw ParseError(path + ": periods must be positive integers");
    }
    q.push_back(item.get<int>());
  }

  Lattice lattice(std::move(q));
  const auto& jv = doc["values"];
  if (!jv.is_array() || static_cast<long>(jv.size()) != lattice.cell_size()) {
    throw ParseError(path + ": \"values\" must hold exactly " +
                     std::to_string(lattice.cell_size()) + " numbers");
  }
  std::vector<double> values;
  values.reserve(jv.size());
  for (const auto& item : jv) {
    if (!item.is_number()) throw ParseError(path + ": potential values must be numbers");
    const double v = item.get<double>();
    if (!std::isfinite(v)) throw ParseError(path + ": potential values must be finite");
    values.push_back(v);
  }
  return Potential(std::move(lattice), std::move(values));
}

std::string potential_json(const Potential& V) {
  std::ostringstream out;
  out << "{\n  \"q\": [";
  for (int j = 0; j < V.lattice.dimension(); ++j) {
    if (j) out << ", ";
    out << V.lattice.period(j);
  }
  out << "],\n  \"values\": [";
  for (std::size_t i = 0; i < V.values.size(); ++i) {
    if (i) out << ", ";
    out << format_double(V.values[i]);
  }
  out << "]\n}\n";
  return out.str();
}

void write_potential(const std::string& path, const Potential& V) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write potential file: " + path);
  out << potential_json(V);
}

void write_band_csv(std::ostream& out, const Lattice& lattice,
                    const std::vector<SpectrumSample>& samples) {
  for (int j = 0; j < lattice.dimension(); ++j) out << "k" << (j + 1) << ",";
  for (long b = 0; b < lattice.cell_size(); ++b) {
    out << "lambda" << (b + 1) << (b + 1 < lattice.cell_size() ? "," : "");
  }
  out << "\n";
  for (const auto& s : samples) {
    for (double kj : s.k) out << format_double(kj) << ",";
    for (std::size_t b = 0; b < s.eigenvalues.size(); ++b) {
      out << format_double(s.eigenvalues[b]) << (b + 1 < s.eigenvalues.size() ? "," : "");
    }
    out << "\n";
  }
}

void write_poly_jsonl(std::ostream& out, const LaurentPoly& p) {
  for (std::size_t i = 0; i < p.term_count(); ++i) {
    out << "{\"exp\": [";
    const auto e = p.exponent(i);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (j) out << ", ";
      out << e[j];
    }
    const auto c = p.coefficient(i);
    out << "], \"re\": " << format_double(c.real()) << ", \"im\": " << format_double(c.imag())
        << "}\n";
  }
}

std::vector<std::vector<double>> read_kpath(const std::string& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open k-path file: " + path);

  std::vector<std::vector<double>> points;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string cleaned;
    for (char c : line) cleaned += (c == ',' ? ' ' : c);
    const auto first = cleaned.find_first_not_of(" \t\r");
    if (first == std::string::npos || cleaned[first] == '#') continue;

    std::istringstream row(cleaned);
    std::vector<double> k;
    double x;
    while (row >> x) k.push_back(x);
    if (!row.eof() || static_cast<int>(k.size()) != dimension) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(dimension) + " numeric components");
    }
    points.push_back(std::move(k));
  }
  return points;
}

}  // namespace fermilat
