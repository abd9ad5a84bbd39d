// SPDX-License-Identifier: Apache-2.0

#include "stbc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "stbc/constructions.hpp"
#include "stbc/io.hpp"
#include "stbc/metrics.hpp"
#include "stbc/simulate.hpp"

namespace stbc {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << bytes;
}

std::string four_decimals(const mpq_class& q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", q.get_d());
  return buf;
}

Constellation constellation_by_name(const std::string& name) {
  if (name == "qpsk") return Constellation::qpsk();
  if (name == "qam16") return Constellation::qam16();
  throw std::invalid_argument("unknown constellation " + name);
}

struct FamilyArgs {
  std::string family;
  int antennas = 0;
  std::uint64_t l = 1;

  void attach(CLI::App* cmd, bool required) {
    auto* fam = cmd->add_option("--family", family,
                                "square | tilde | maximal | hprime | hat4m | paired | cis");
    fam->check(CLI::IsMember(
        {"square", "tilde", "maximal", "hprime", "hat4m", "paired", "cis"}));
    auto* ant = cmd->add_option("--antennas", antennas,
                                "Transmit antennas of the target maximal-rate design");
    if (required) {
      fam->required();
      ant->required();
    } else {
      ant->needs(fam);
    }
    cmd->add_option("--l", l, "Row-pairing shift for the paired and cis families")
        ->needs(fam);
  }

  DesignMatrix build() const { return family_design(family, antennas, l); }
};

int cmd_generate(const FamilyArgs& fa, const std::string& format, const std::string& out) {
  ExportFormat f = ExportFormat::Text;
  if (format == "json") f = ExportFormat::Json;
  else if (format == "latex") f = ExportFormat::Latex;
  else if (format != "text") throw std::invalid_argument("unknown format " + format);
  write_output(out, export_design(fa.build(), f));
  return 0;
}

int cmd_verify(const std::string& in) {
  const DesignMatrix d = import_design(read_file(in));
  std::cout << "size: [" << d.p() << "," << d.n() << "," << d.k() << "]\n";
  std::cout << "classification: " << to_string(classify(d)) << "\n";
  if (is_orthogonal(d)) {
    std::cout << "gram identity: holds\n";
    return 0;
  }
  std::cout << "gram identity: fails\n";
  // Point at a witness. Atom designs get the proper-2x2 characterization;
  // anything else gets the first offending Gram cell.
  bool witnessed = false;
  try {
    const CodCheck check = check_cod_characterization(d);
    if (!check.ok) {
      std::cout << "witness: rows (" << check.row1 << "," << check.row2 << ") columns ("
                << check.col1 << "," << check.col2 << "): " << check.reason << "\n";
      witnessed = true;
    }
  } catch (const std::invalid_argument&) {
  }
  if (!witnessed) {
    const Gram g = gram(d);
    const QuadraticForm expected = QuadraticForm::sum_of_squares(d.k());
    for (int u = 0; u < g.n() && !witnessed; ++u) {
      for (int v = 0; v < g.n() && !witnessed; ++v) {
        const QuadraticForm& have = g.at(u, v);
        if (u == v ? have != expected : !have.is_zero()) {
          std::cout << "witness: gram cell (" << u << "," << v << ") = " << have.str()
                    << "\n";
          witnessed = true;
        }
      }
    }
  }
  return 1;
}

int cmd_metrics(const FamilyArgs& fa, const std::string& constellation) {
  const DesignMatrix d = fa.build();
  Constellation c;
  const Constellation* cp = nullptr;
  if (!constellation.empty()) {
    c = constellation_by_name(constellation);
    cp = &c;
  }
  const DesignMetrics m = design_metrics(d, cp);
  std::cout << "size: [" << d.p() << "," << d.n() << "," << d.k() << "]\n";
  std::cout << "classification: " << to_string(classify(d)) << "\n";
  std::cout << "rate: " << m.rate.get_str() << "\n";
  std::cout << "delay: " << m.delay << "\n";
  std::cout << "zero fraction: " << m.zero_fraction.get_str() << "\n";
  if (cp != nullptr) {
    std::cout << "papr per antenna (" << constellation << "):";
    for (const auto& v : m.per_antenna_papr) std::cout << " " << v.str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_table1(int n_min, int n_max, const std::string& out) {
  std::string csv = "n,weight,counted,formula,match\n";
  for (const auto& row : table1_rows(n_min, n_max)) {
    csv += std::to_string(row.n) + "," + std::to_string(row.w) + "," +
           four_decimals(row.counted) + "," + four_decimals(row.formula) + "," +
           (row.match ? "yes" : "no") + "\n";
  }
  write_output(out, csv);
  return 0;
}

int cmd_simulate(const FamilyArgs& fa, const std::string& design_path,
                 const std::string& constellation, int n_rx, const std::string& constraint,
                 const std::string& snr, long trials, std::uint64_t seed,
                 const std::string& out) {
  if (design_path.empty() == fa.family.empty()) {
    throw std::invalid_argument("give exactly one of --design and --family");
  }
  SimConfig cfg;
  cfg.design = design_path.empty() ? fa.build() : import_design(read_file(design_path));
  cfg.constellation = constellation_by_name(constellation);
  cfg.n_rx = n_rx;
  cfg.snr_grid_db = parse_snr_grid(snr);
  if (constraint == "peak") cfg.constraint = PowerConstraint::PEAK;
  else if (constraint == "avg") cfg.constraint = PowerConstraint::AVERAGE;
  else throw std::invalid_argument("unknown constraint " + constraint);
  cfg.trials = trials;
  cfg.seed = seed;
  const SimResult result = run(cfg);
  write_output(out, to_csv(result));
  if (result.max_energy_deviation > 1e-12) {
    std::cerr << "warning: energy audit deviation " << result.max_energy_deviation << "\n";
  }
  return 0;
}

}  // namespace

DesignMatrix family_design(const std::string& family, int antennas, std::uint64_t l) {
  if (family == "square") {
    int a = 0;
    while ((1 << a) < antennas && a < 30) ++a;
    if (antennas < 2 || (1 << a) != antennas) {
      throw std::invalid_argument("square designs need a power-of-two antenna count");
    }
    return square_cod(a);
  }
  if (family == "hat4m") {
    if (antennas < 4 || antennas % 4 != 0) {
      throw std::invalid_argument("hat4m designs need a multiple-of-four antenna count");
    }
    return hat_4m(antennas / 4);
  }
  if (antennas < 2) throw std::invalid_argument("need at least 2 antennas");
  const int a = antennas - 1;
  if (family == "tilde") return build_tilde(a);
  if (family == "maximal" || family == "hprime") return h_prime(a);
  if (family == "paired") return pair_rows(a, l).first;
  if (family == "cis") {
    auto [paired, plan] = pair_rows(a, l);
    return cis_substitute(paired, plan);
  }
  throw std::invalid_argument("unknown family " + family);
}

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> parts;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != piece.size() || piece.empty()) {
      throw std::invalid_argument("bad snr grid component '" + piece + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw std::invalid_argument("snr grid wants start:step:stop");
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (step <= 0.0 || stop < start) {
    throw std::invalid_argument("snr grid wants step > 0 and stop >= start");
  }
  std::vector<double> grid;
  for (double v = start; v <= stop + step * 1e-9; v += step) grid.push_back(v);
  return grid;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"stbc-forge: construct, verify and analyze complex orthogonal designs"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Emit a design as json, text or latex");
  FamilyArgs gen_fa;
  gen_fa.attach(gen, true);
  std::string gen_format = "text";
  std::string gen_out;
  gen->add_option("--format", gen_format)->check(CLI::IsMember({"json", "text", "latex"}));
  gen->add_option("--out", gen_out, "Write to a file instead of stdout");

  auto* ver = app.add_subcommand("verify", "Check the orthogonality identity of a design");
  std::string ver_in;
  ver->add_option("--in", ver_in, "Design file, json or text")->required();

  auto* met = app.add_subcommand("metrics", "Rate, delay, zero fraction and papr");
  FamilyArgs met_fa;
  met_fa.attach(met, true);
  std::string met_constellation;
  met->add_option("--constellation", met_constellation)
      ->check(CLI::IsMember({"qpsk", "qam16"}));

  auto* tab = app.add_subcommand("table1", "Zero-fraction table as csv, 4 decimals");
  int tab_min = 4, tab_max = 7;
  std::string tab_out;
  tab->add_option("--n-min", tab_min);
  tab->add_option("--n-max", tab_max);
  tab->add_option("--out", tab_out, "Write to a file instead of stdout");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo symbol error rates, csv output");
  FamilyArgs sim_fa;
  sim_fa.attach(sim, false);
  std::string sim_design, sim_constellation = "qpsk", sim_constraint = "avg";
  std::string sim_snr, sim_out;
  int sim_nrx = 1;
  long sim_trials = 0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--design", sim_design, "Design file instead of --family")
      ->excludes(sim->get_option("--family"));
  sim->add_option("--constellation", sim_constellation)
      ->check(CLI::IsMember({"qpsk", "qam16"}));
  sim->add_option("--n-rx", sim_nrx, "Receive antennas");
  sim->add_option("--constraint", sim_constraint, "peak | avg")
      ->check(CLI::IsMember({"peak", "avg"}));
  sim->add_option("--snr", sim_snr, "start:step:stop in dB")->required();
  sim->add_option("--trials", sim_trials, "Codewords per SNR point")->required();
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out, "CSV path, stdout when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_fa, gen_format, gen_out);
    if (ver->parsed()) return cmd_verify(ver_in);
    if (met->parsed()) return cmd_metrics(met_fa, met_constellation);
    if (tab->parsed()) return cmd_table1(tab_min, tab_max, tab_out);
    if (sim->parsed()) {
      return cmd_simulate(sim_fa, sim_design, sim_constellation, sim_nrx, sim_constraint,
                          sim_snr, sim_trials, sim_seed, sim_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace stbc
