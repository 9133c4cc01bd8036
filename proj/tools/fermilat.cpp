// Command-line front end: spectra, band structures, Fermi-variety Laurent
// polynomials, isospectrality checks and separability tools for periodic
// lattice Schrodinger operators.
//
// Exit codes (public contract): 0 pass, 1 check verdict false, 2 parse,
// 3 solver, 4 interpolation, 5 precondition, 6 not-separable.

#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fermilat/errors.hpp"
#include "fermilat/io.hpp"
#include "fermilat/isospectral.hpp"
#include "fermilat/laurent.hpp"
#include "fermilat/version.hpp"

namespace {

using namespace fermilat;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string json_str(const std::string& s) { return "\"" + json_escape(s) + "\""; }

std::string json_complex(std::complex<double> z) {
  return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

std::string json_int_array(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string json_string_array(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += json_str(v[i]);
  }
  return out + "]";
}

std::string report_json(const IsospectralityReport& r, int indent) {
  const std::string pad(indent, ' ');
  const std::string pad2(indent + 2, ' ');
  std::ostringstream out;
  out << "{\n";
  out << pad2 << "\"verdict\": " << (r.verdict ? "true" : "false") << ",\n";
  out << pad2 << "\"max_deviation\": " << format_double(r.max_deviation) << ",\n";
  out << pad2 << "\"tolerance\": " << format_double(r.tolerance) << ",\n";
  out << pad2 << "\"method\": " << json_str(to_string(r.method)) << ",\n";
  out << pad2 << "\"pairwise_coprime\": " << (r.lattice_pairwise_coprime ? "true" : "false")
      << ",\n";
  out << pad2 << "\"witnesses\": [";
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    if (i) out << ",";
    out << "\n"
        << pad2 << "  {\"location\": " << json_str(r.witnesses[i].location)
        << ", \"lhs\": " << json_complex(r.witnesses[i].lhs)
        << ", \"rhs\": " << json_complex(r.witnesses[i].rhs) << "}";
  }
  if (!r.witnesses.empty()) out << "\n" << pad2;
  out << "]\n" << pad << "}";
  return out.str();
}

struct OutputTarget {
  std::string path;  // empty -> stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write output file: " + path);
    out << content;
  }
};

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::string cleaned;
  for (char c : text) cleaned += (c == ',' ? ' ' : c);
  std::istringstream in(cleaned);
  std::vector<double> values;
  double x;
  while (in >> x) values.push_back(x);
  if (!in.eof() || values.empty()) throw ParseError("cannot parse " + what + ": " + text);
  return values;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_number_list(text, what)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ParseError(what + " must be integral: " + text);
    out.push_back(i);
  }
  return out;
}

std::complex<double> parse_lambda0(const std::vector<double>& parts) {
  if (parts.empty() || parts.size() > 2) {
    throw ParseError("--lambda0 takes one or two reals (RE [IM])");
  }
  return {parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

struct CheckConfig {
  std::vector<std::string> inputs;
  std::vector<double> lambda_parts{0.0};
  double tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  int samples = 50;
  std::string partition;
  std::string transform;
  std::vector<int> classify_roots;
  bool fermi = false, floquet = false, identities = false, shells = false;
  bool ambarzumian = false, rigidity = false;
  OutputTarget out;
};

std::string check_mode_name(const CheckConfig& c) {
  if (c.fermi) return "fermi";
  if (c.floquet) return "floquet";
  if (c.identities) return "identities";
  if (c.shells) return "shells";
  if (c.ambarzumian) return "ambarzumian";
  if (c.rigidity) return "rigidity";
  if (!c.classify_roots.empty()) return "classify-roots";
  return "";
}

std::string report_header(const std::string& mode, const CheckConfig& c,
                          const std::optional<Lattice>& lattice) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"tool\": \"fermilat\",\n";
  out << "  \"version\": " << json_str(kVersion) << ",\n";
  out << "  \"command\": \"check\",\n";
  out << "  \"mode\": " << json_str(mode) << ",\n";
  out << "  \"inputs\": " << json_string_array(c.inputs) << ",\n";
  out << "  \"config\": {\"lambda0\": " << json_complex(parse_lambda0(c.lambda_parts))
      << ", \"tol\": " << format_double(c.tol) << ", \"seed\": " << c.seed
      << ", \"samples\": " << c.samples << "},\n";
  if (lattice) {
    out << "  \"lattice\": {\"q\": " << json_int_array(lattice->periods())
        << ", \"pairwise_coprime\": " << (lattice->pairwise_coprime() ? "true" : "false")
        << "},\n";
  }
  return out.str();
}

Potential load_checked(const std::string& path) { return read_potential(path); }

void require_inputs(const CheckConfig& c, std::size_t n) {
  if (c.inputs.size() != n) {
    throw ParseError("mode --" + check_mode_name(c) + " needs exactly " + std::to_string(n) +
                     " potential file(s)");
  }
}

int emit_single_report(const CheckConfig& c, const std::string& mode, const Lattice& lattice,
                       const IsospectralityReport& report, const std::string& extra = "") {
  std::ostringstream out;
  out << report_header(mode, c, lattice);
  if (!extra.empty()) out << extra;
  out << "  \"report\": " << report_json(report, 2) << ",\n";
  out << "  \"verdict\": " << (report.verdict ? "true" : "false") << "\n}\n";
  c.out.write(out.str());
  return report.verdict ? 0 : 1;
}

int run_check(const CheckConfig& c) {
  const int modes = int(c.fermi) + int(c.floquet) + int(c.identities) + int(c.shells) +
                    int(c.ambarzumian) + int(c.rigidity) + int(!c.classify_roots.empty());
  if (modes != 1) {
    throw ParseError(
        "pick exactly one of --fermi --floquet --identities --shells --ambarzumian "
        "--rigidity --classify-roots");
  }
  const std::complex<double> lambda0 = parse_lambda0(c.lambda_parts);

  if (!c.classify_roots.empty()) {
    if (c.classify_roots.size() != 3) throw ParseError("--classify-roots takes three periods");
    const auto result = classify_unity_determinants(c.classify_roots[0], c.classify_roots[1],
                                                    c.classify_roots[2], c.tol);
    std::ostringstream out;
    out << report_header("classify-roots", c, std::nullopt);
    out << "  \"periods\": " << json_int_array(c.classify_roots) << ",\n";
    out << "  \"zero_count\": " << result.zero_count << ",\n";
    out << "  \"counterexamples\": [";
    for (std::size_t i = 0; i < result.counterexamples.size(); ++i) {
      const auto& ce = result.counterexamples[i];
      if (i) out << ",";
      out << "\n    {\"l\": " << json_int_array(ce.l) << ", \"l_prime\": "
          << json_int_array(ce.l_prime) << ", \"abs_det\": " << format_double(ce.abs_det)
          << ", \"matches_case\": " << (ce.matches_case ? "true" : "false") << "}";
    }
    if (!result.counterexamples.empty()) out << "\n  ";
    out << "],\n";
    out << "  \"verdict\": " << (result.counterexamples.empty() ? "true" : "false") << "\n}\n";
    c.out.write(out.str());
    return result.counterexamples.empty() ? 0 : 1;
  }

  if (c.ambarzumian) {
    require_inputs(c, 1);
    const Potential V = load_checked(c.inputs[0]);
    const auto result = ambarzumian_check(V, lambda0, c.tol);
    std::ostringstream extra;
    extra << "  \"max_abs_potential\": " << format_double(result.max_abs_potential) << ",\n"
          << "  \"normalized_prune_floor\": " << format_double(result.normalized_prune_floor)
          << ",\n";
    return emit_single_report(c, "ambarzumian", V.lattice, result.poly, extra.str());
  }

  if (c.rigidity) {
    require_inputs(c, 1);
    const Potential Y = load_checked(c.inputs[0]);
    if (c.partition.empty()) throw ParseError("--rigidity needs --partition");
    const Partition p(parse_int_list(c.partition, "--partition"));
    CongruenceTransform transform = CongruenceTransform::reflection();
    if (c.transform.empty()) throw ParseError("--rigidity needs --transform");
    if (c.transform == "reflect") {
      transform = CongruenceTransform::reflection();
    } else if (c.transform.rfind("translate:", 0) == 0) {
      transform = CongruenceTransform::translation(
          parse_int_list(c.transform.substr(10), "--transform shift"));
    } else {
      throw ParseError("--transform must be 'reflect' or 'translate:m1,m2,...'");
    }

    const RigidityReport r = rigidity_suite(Y, p, transform, lambda0, c.tol);
    std::ostringstream out;
    out << report_header("rigidity", c, Y.lattice);
    out << "  \"assertions\": {\n";
    out << "    \"fermi\": " << report_json(r.fermi, 4) << ",\n";
    out << "    \"separability\": " << report_json(r.separability, 4) << ",\n";
    out << "    \"components\": [";
    for (std::size_t j = 0; j < r.components.size(); ++j) {
      if (j) out << ", ";
      out << report_json(r.components[j], 4);
    }
    out << "],\n";
    out << "    \"prefix_dependence\": " << report_json(r.prefix_dependence, 4) << "\n";
    out << "  },\n";
    out << "  \"verdict\": " << (r.verdict ? "true" : "false") << "\n}\n";
    c.out.write(out.str());
    return r.verdict ? 0 : 1;
  }

  require_inputs(c, 2);
  const Potential V = load_checked(c.inputs[0]);
  const Potential Y = load_checked(c.inputs[1]);

  if (c.fermi) {
    return emit_single_report(c, "fermi", V.lattice, fermi_isospectral(V, Y, lambda0, c.tol));
  }
  if (c.floquet) {
    return emit_single_report(c, "floquet", V.lattice,
                              floquet_isospectral(V, Y, c.tol, c.seed));
  }
  if (c.shells) {
    return emit_single_report(c, "shells", V.lattice, verify_shell_identities(V, Y, c.tol));
  }

  // --identities: cell-average equality plus the sampled quadratic identity.
  const IsospectralityReport mean = verify_mean_identity(V, Y, lambda0, c.tol);
  const IsospectralityReport quad =
      verify_fourier_quadratic_identity(V, Y, c.samples, c.seed, c.tol);
  std::ostringstream out;
  out << report_header("identities", c, V.lattice);
  out << "  \"mean\": " << report_json(mean, 2) << ",\n";
  out << "  \"quadratic\": " << report_json(quad, 2) << ",\n";
  const bool verdict = mean.verdict && quad.verdict;
  out << "  \"verdict\": " << (verdict ? "true" : "false") << "\n}\n";
  c.out.write(out.str());
  return verdict ? 0 : 1;
}

int run_spectrum(const std::string& input, const std::string& kspec, const OutputTarget& out) {
  const Potential V = read_potential(input);
  const std::vector<double> k = parse_number_list(kspec, "--k");
  if (static_cast<int>(k.size()) != V.lattice.dimension()) {
    throw ParseError("--k needs one component per lattice axis");
  }
  if (!V.lattice.pairwise_coprime()) {
    std::cerr << "note: lattice periods are not pairwise coprime\n";
  }
  std::ostringstream csv;
  write_band_csv(csv, V.lattice, {spectrum_at(V, k)});
  out.write(csv.str());
  return 0;
}

int run_bands(const std::string& input, const std::string& kpath, const OutputTarget& out) {
  const Potential V = read_potential(input);
  const auto path = read_kpath(kpath, V.lattice.dimension());
  if (!V.lattice.pairwise_coprime()) {
    std::cerr << "note: lattice periods are not pairwise coprime\n";
  }
  std::ostringstream csv;
  write_band_csv(csv, V.lattice, band_structure(V, path));
  out.write(csv.str());
  return 0;
}

int run_fermi_poly(const std::string& input, const std::vector<double>& lambda_parts,
                   int oversample, const OutputTarget& out) {
  const Potential V = read_potential(input);
  const std::complex<double> lambda0 = parse_lambda0(lambda_parts);
  FermiPolyOptions opts;
  opts.oversample = oversample;
  const LaurentPoly poly = fermi_poly(V, lambda0, opts);

  std::ostringstream dump;
  write_poly_jsonl(dump, poly);
  out.write(dump.str());

  // Extremal-coefficient summary on stderr so the dump stays machine-readable.
  std::cerr << "terms: " << poly.term_count() << ", imag residue: "
            << format_double(poly.imag_residue()) << ", pruned mass: "
            << format_double(poly.pruned_mass()) << "\n";
  try {
    const auto corners = leading_terms(poly);
    for (int j = 0; j < poly.dims(); ++j) {
      const double expected = kappa_sign(V.lattice, j);
      std::cerr << "kappa axis " << (j + 1) << ": expected " << expected << ", computed "
                << format_double(corners[j].first.real()) << " / "
                << format_double(corners[j].second.real()) << "\n";
    }
  } catch (const MissingLeadingTerm&) {
    std::cerr << "kappa: extremal terms below the pruning threshold at this scale\n";
  }
  return 0;
}

int run_separate(const std::string& input, const std::string& partition, double tol,
                 std::string out_prefix) {
  const Potential V = read_potential(input);
  const Partition p(parse_int_list(partition, "--partition"));
  const double eff_tol = tol > 0 ? tol : default_coeff_tol(dft(V));
  const auto components = separate(V, p, eff_tol);

  if (out_prefix.empty()) {
    out_prefix = input;
    if (out_prefix.size() > 5 && out_prefix.substr(out_prefix.size() - 5) == ".json") {
      out_prefix.resize(out_prefix.size() - 5);
    }
  }
  for (std::size_t j = 0; j < components.size(); ++j) {
    write_potential(out_prefix + "_part" + std::to_string(j + 1) + ".json", components[j]);
  }

  const Potential recombined = combine_separable(components, V.lattice);
  double residual = 0.0;
  for (std::size_t i = 0; i < V.values.size(); ++i) {
    residual = std::max(residual, std::abs(V.values[i] - recombined.values[i]));
  }
  std::cout << "components: " << components.size() << "\n";
  std::cout << "recombination residual: " << format_double(residual) << "\n";
  return 0;
}

int run_combine(const std::vector<std::string>& inputs, const OutputTarget& out) {
  if (inputs.size() < 2) throw ParseError("combine needs at least two component files");
  std::vector<Potential> components;
  std::vector<int> periods;
  for (const auto& path : inputs) {
    components.push_back(read_potential(path));
    const auto& q = components.back().lattice.periods();
    periods.insert(periods.end(), q.begin(), q.end());
  }
  const Potential V = combine_separable(components, Lattice(periods));
  if (out.path.empty()) {
    std::cout << potential_json(V);
  } else {
    write_potential(out.path, V);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fermilat: spectra, Fermi-variety Laurent polynomials and isospectrality "
      "checks for periodic lattice Schrodinger operators"};
  app.require_subcommand(1);
  std::string in_file, kspec, kpath_file, partition;
  std::vector<std::string> inputs;
  std::vector<double> lambda_parts{0.0};
  std::string out_path;
  double tol = 0.0;
  int oversample = 0;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues at one phase point (CSV)");
  spectrum->add_option("input", in_file, "potential file")->required();
  spectrum->add_option("--k", kspec, "phase point, comma separated cycles")->required();
  spectrum->add_option("--out", out_path, "output path (default stdout)");

  auto* bands = app.add_subcommand("bands", "eigenvalues along a phase path (CSV)");
  bands->add_option("input", in_file, "potential file")->required();
  bands->add_option("--kpath", kpath_file, "path file, one point per line")->required();
  bands->add_option("--out", out_path, "output path (default stdout)");

  auto* fpoly = app.add_subcommand("fermi-poly", "Laurent polynomial at one energy (JSON lines)");
  fpoly->add_option("input", in_file, "potential file")->required();
  fpoly->add_option("--lambda0", lambda_parts, "energy RE [IM]")->expected(1, 2);
  fpoly->add_option("--oversample", oversample, "extra grid points per axis");
  fpoly->add_option("--out", out_path, "output path (default stdout)");

  CheckConfig check_cfg;
  auto* check = app.add_subcommand("check", "isospectrality and identity verifications (JSON)");
  check->add_option("inputs", check_cfg.inputs, "potential file(s)");
  check->add_flag("--fermi", check_cfg.fermi, "polynomial equality at --lambda0");
  check->add_flag("--floquet", check_cfg.floquet, "polynomial equality at all energies");
  check->add_flag("--identities", check_cfg.identities,
                  "cell-average and quadratic Fourier identities");
  check->add_flag("--shells", check_cfg.shells, "Fourier shell-sum identities");
  check->add_flag("--ambarzumian", check_cfg.ambarzumian, "distance to the zero potential");
  check->add_flag("--rigidity", check_cfg.rigidity, "four-part separability rigidity suite");
  check->add_option("--classify-roots", check_cfg.classify_roots,
                    "classify vanishing root-of-unity determinants for three periods")
      ->expected(3);
  check->add_option("--lambda0", check_cfg.lambda_parts, "energy RE [IM]")->expected(1, 2);
  check->add_option("--tol", check_cfg.tol, "tolerance (default 1e-8)");
  check->add_option("--seed", check_cfg.seed, "64-bit seed for sampled checks");
  check->add_option("--samples", check_cfg.samples, "sample count for --identities");
  check->add_option("--partition", check_cfg.partition, "block sizes d1,d2,...");
  check->add_option("--transform", check_cfg.transform, "reflect | translate:m1,m2,...");
  check->add_option("--out", check_cfg.out.path, "output path (default stdout)");

  auto* separate_cmd = app.add_subcommand("separate", "split a separable potential into blocks");
  separate_cmd->add_option("input", in_file, "potential file")->required();
  separate_cmd->add_option("--partition", partition, "block sizes d1,d2,...")->required();
  separate_cmd->add_option("--tol", tol, "separability tolerance (default scale-aware)");
  separate_cmd->add_option("--out", out_path, "output prefix (default input stem)");

  auto* combine_cmd = app.add_subcommand("combine", "sum block potentials on the product lattice");
  combine_cmd->add_option("inputs", inputs, "component potential files")->required();
  combine_cmd->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(in_file, kspec, OutputTarget{out_path});
    if (bands->parsed()) return run_bands(in_file, kpath_file, OutputTarget{out_path});
    if (fpoly->parsed()) {
      return run_fermi_poly(in_file, lambda_parts, oversample, OutputTarget{out_path});
    }
    if (check->parsed()) return run_check(check_cfg);
    if (separate_cmd->parsed()) return run_separate(in_file, partition, tol, out_path);
    if (combine_cmd->parsed()) return run_combine(inputs, OutputTarget{out_path});
  } catch (const fermilat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
