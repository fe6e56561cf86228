// Copyright 2026 The sykspectra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "syk/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "syk/errors.hpp"

#ifdef SYKSPECTRA_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace syk {

namespace {

using json = nlohmann::json;

void check_sorted(std::span<const double> values, const char* who) {
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument(std::string(who) + ": input must be sorted ascending");
  }
}

std::vector<std::uint64_t> sector_basis(int n_qubits, SectorLabel sector) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const int want = (sector == SectorLabel::Even) ? 0 : 1;
  std::vector<std::uint64_t> basis;
  basis.reserve(dim / 2);
  for (std::uint64_t s = 0; s < dim; ++s) {
    if ((std::popcount(s) & 1) == want) basis.push_back(s);
  }
  return basis;
}

}  // namespace

Eigen::MatrixXcd build_matrix(std::span<const HamiltonianTerm> terms,
                              std::optional<SectorLabel> sector, std::uint64_t dim_cap) {
  if (terms.empty()) throw std::invalid_argument("build_matrix: no terms");
  const int n_qubits = terms.front().op.n_qubits();
  for (const auto& term : terms) {
    if (term.op.n_qubits() != n_qubits) {
      throw std::invalid_argument("build_matrix: terms with mixed qubit counts");
    }
    if (sector && (std::popcount(term.op.x_mask()) & 1) != 0) {
      throw std::invalid_argument(
          "build_matrix: term does not commute with the parity string");
    }
  }
  const std::uint64_t full_dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t dim = sector ? full_dim / 2 : full_dim;
  if (dim > dim_cap) {
    const double gib = static_cast<double>(dim) * static_cast<double>(dim) * 16.0 /
                       (1024.0 * 1024.0 * 1024.0);
    std::ostringstream msg;
    msg << "build_matrix: dimension " << dim << " exceeds the cap " << dim_cap
        << " (dense matrix would need ~" << gib << " GiB); raise the cap to override";
    throw ResourceLimitError(msg.str());
  }

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  if (!sector) {
    for (const auto& term : terms) {
      for (std::uint64_t col = 0; col < dim; ++col) {
        const auto entry = term.op.column_entry(col);
        m(static_cast<Eigen::Index>(entry.row), static_cast<Eigen::Index>(col)) +=
            term.coefficient * entry.value;
      }
    }
    return m;
  }

  const auto basis = sector_basis(n_qubits, *sector);
  std::vector<std::uint32_t> index_of(full_dim, 0);
  for (std::size_t i = 0; i < basis.size(); ++i) index_of[basis[i]] = static_cast<std::uint32_t>(i);
  for (const auto& term : terms) {
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const auto entry = term.op.column_entry(basis[col]);
      // popcount(x) is even, so the row state stays inside the sector.
      m(static_cast<Eigen::Index>(index_of[entry.row]), static_cast<Eigen::Index>(col)) +=
          term.coefficient * entry.value;
    }
  }
  return m;
}

namespace {

template <typename Matrix>
void check_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    throw std::invalid_argument("eigenvalues: matrix is not Hermitian (max deviation " +
                                std::to_string(dev) + ")");
  }
}

}  // namespace

std::vector<double> eigenvalues(const Eigen::MatrixXcd& m) {
  check_hermitian(m);
  const Eigen::Index n = m.rows();
  std::vector<double> evals(static_cast<std::size_t>(n));
#ifdef SYKSPECTRA_HAVE_LAPACKE
  {
    Eigen::MatrixXcd work = m;
    const int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                   reinterpret_cast<lapack_complex_double*>(work.data()),
                                   static_cast<lapack_int>(n), evals.data());
    if (info != 0) throw std::runtime_error("eigenvalues: zheev failed with info=" +
                                            std::to_string(info));
    return evals;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: Eigen solver did not converge");
  }
  Eigen::Map<Eigen::VectorXd>(evals.data(), n) = solver.eigenvalues();
  return evals;
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  check_hermitian(m);
  const Eigen::Index n = m.rows();
  std::vector<double> evals(static_cast<std::size_t>(n));
#ifdef SYKSPECTRA_HAVE_LAPACKE
  {
    Eigen::MatrixXd work = m;
    const int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                   work.data(), static_cast<lapack_int>(n), evals.data());
    if (info != 0) throw std::runtime_error("eigenvalues: dsyev failed with info=" +
                                            std::to_string(info));
    return evals;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: Eigen solver did not converge");
  }
  Eigen::Map<Eigen::VectorXd>(evals.data(), n) = solver.eigenvalues();
  return evals;
}

std::vector<Multiplicity> detect_degeneracies(std::span<const double> sorted_eigs, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("detect_degeneracies: tol must be positive");
  check_sorted(sorted_eigs, "detect_degeneracies");
  std::vector<Multiplicity> clusters;
  for (const double e : sorted_eigs) {
    if (!clusters.empty() && e - clusters.back().value <= tol) {
      ++clusters.back().count;
    } else {
      clusters.push_back(Multiplicity{e, 1});
    }
  }
  return clusters;
}

double default_degeneracy_tol(std::span<const double> eigs) {
  double max_abs = 0.0;
  for (const double e : eigs) max_abs = std::max(max_abs, std::abs(e));
  return 1e-10 * std::max(1.0, max_abs);
}

std::vector<double> distinct_values(const std::vector<Multiplicity>& mults) {
  std::vector<double> values;
  values.reserve(mults.size());
  for (const auto& m : mults) values.push_back(m.value);
  return values;
}

DegeneracyClass classify_degeneracy(
    int n_majorana, const std::array<std::vector<Multiplicity>, 2>& sector_multiplicities) {
  if (n_majorana % 2 != 0) throw std::invalid_argument("classify_degeneracy: N must be even");
  const int expected = (n_majorana % 8 == 4) ? 2 : 1;
  for (const auto& sector : sector_multiplicities) {
    for (const auto& m : sector) {
      if (m.count != expected) return DegeneracyClass::ExtraDegenerate;
    }
  }
  return DegeneracyClass::LeastDegenerate;
}

double SpectrumRecord::sum_sq_over_dim() const {
  double s = 0.0;
  for (const double e : eigenvalues) s += e * e;
  return s / static_cast<double>(dimension());
}

std::string SpectrumRecord::canonical_filename(const std::string& extension) const {
  std::ostringstream ss;
  ss << "N" << n_majorana << "_K" << k << "_" << scheme_file_token(scheme) << "_s" << seed
     << extension;
  return ss.str();
}

SpectrumRecord diagonalize(const CouplingSet& cs, std::uint64_t dim_cap,
                           std::optional<double> degeneracy_tol) {
  const auto terms = assemble(cs);
  SpectrumRecord record;
  record.n_majorana = cs.n_majorana;
  record.k = cs.k();
  record.scheme = cs.scheme;
  record.seed = cs.seed;

  for (const SectorLabel sector : {SectorLabel::Even, SectorLabel::Odd}) {
    const auto m = build_matrix(terms, sector, dim_cap);
    record.sector_eigenvalues[static_cast<int>(sector)] = eigenvalues(m);
  }
  record.eigenvalues.reserve(record.dimension());
  std::merge(record.sector_eigenvalues[0].begin(), record.sector_eigenvalues[0].end(),
             record.sector_eigenvalues[1].begin(), record.sector_eigenvalues[1].end(),
             std::back_inserter(record.eigenvalues));

  record.degeneracy_tol =
      degeneracy_tol ? *degeneracy_tol : default_degeneracy_tol(record.eigenvalues);
  record.multiplicities = detect_degeneracies(record.eigenvalues, record.degeneracy_tol);
  for (int s = 0; s < 2; ++s) {
    record.sector_multiplicities[s] =
        detect_degeneracies(record.sector_eigenvalues[s], record.degeneracy_tol);
  }
  return record;
}

namespace {

constexpr char kBinaryMagic[] = "SYKSPEC1";

/// What a spectrum file carries: both parity sectors, one of them, or the
/// undecomposed full spectrum.
std::string record_content(const SpectrumRecord& r) {
  const bool has_even = !r.sector_eigenvalues[0].empty();
  const bool has_odd = !r.sector_eigenvalues[1].empty();
  if (has_even && has_odd) return "sectors";
  if (has_even) return "even";
  if (has_odd) return "odd";
  return "full";
}

json metadata_json(const SpectrumRecord& r) {
  return json{{"schema_version", 1},
              {"N", r.n_majorana},
              {"K", r.k},
              {"scheme", scheme_name(r.scheme)},
              {"seed", r.seed},
              {"degeneracy_tol", r.degeneracy_tol},
              {"content", record_content(r)}};
}

void apply_metadata(SpectrumRecord& r, const json& meta) {
  r.n_majorana = meta.at("N").get<int>();
  r.k = meta.at("K").get<std::uint64_t>();
  const auto scheme = scheme_from_name(meta.at("scheme").get<std::string>());
  if (!scheme) throw DataError("spectrum file: unknown scheme in metadata");
  r.scheme = *scheme;
  r.seed = meta.at("seed").get<std::uint64_t>();
  r.degeneracy_tol = meta.at("degeneracy_tol").get<double>();
}

void write_doubles_le(std::ofstream& out, std::span<const double> values) {
  const std::uint64_t count = values.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

std::vector<double> read_doubles_le(std::ifstream& in) {
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || count > (std::uint64_t{1} << 32)) throw DataError("spectrum file: bad count");
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw DataError("spectrum file: truncated eigenvalue block");
  return values;
}

static_assert(std::endian::native == std::endian::little,
              "binary spectrum files are little-endian; add byte swapping for this platform");

}  // namespace

void save_spectrum(const SpectrumRecord& record, const std::string& path,
                   SpectrumFileFormat format) {
  const std::string content = record_content(record);
  if (format == SpectrumFileFormat::Binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open spectrum file for writing: " + path);
    out << kBinaryMagic << "\n" << metadata_json(record).dump() << "\n";
    if (content == "sectors") {
      write_doubles_le(out, record.sector_eigenvalues[0]);
      write_doubles_le(out, record.sector_eigenvalues[1]);
    } else if (content == "even") {
      write_doubles_le(out, record.sector_eigenvalues[0]);
    } else if (content == "odd") {
      write_doubles_le(out, record.sector_eigenvalues[1]);
    } else {
      write_doubles_le(out, record.eigenvalues);
    }
    if (!out) throw DataError("failed writing spectrum file: " + path);
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open spectrum file for writing: " + path);
  out << "# " << metadata_json(record).dump() << "\n";
  out << "sector,index,eigenvalue\n";
  out.precision(17);
  auto write_rows = [&out](const char* name, const std::vector<double>& evals) {
    for (std::size_t i = 0; i < evals.size(); ++i) {
      out << name << "," << i << "," << evals[i] << "\n";
    }
  };
  if (content == "sectors" || content == "even") write_rows("even", record.sector_eigenvalues[0]);
  if (content == "sectors" || content == "odd") write_rows("odd", record.sector_eigenvalues[1]);
  if (content == "full") write_rows("full", record.eigenvalues);
  if (!out) throw DataError("failed writing spectrum file: " + path);
}

SpectrumRecord load_spectrum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open spectrum file: " + path);
  std::string first_line;
  if (!std::getline(in, first_line)) throw DataError("empty spectrum file: " + path);

  SpectrumRecord record;
  std::string content;
  std::vector<double> full_list;
  if (first_line == kBinaryMagic) {
    std::string meta_line;
    if (!std::getline(in, meta_line)) throw DataError("spectrum file: missing metadata");
    const json meta = json::parse(meta_line);
    apply_metadata(record, meta);
    content = meta.value("content", "sectors");
    if (content == "sectors") {
      record.sector_eigenvalues[0] = read_doubles_le(in);
      record.sector_eigenvalues[1] = read_doubles_le(in);
    } else if (content == "even") {
      record.sector_eigenvalues[0] = read_doubles_le(in);
    } else if (content == "odd") {
      record.sector_eigenvalues[1] = read_doubles_le(in);
    } else if (content == "full") {
      full_list = read_doubles_le(in);
    } else {
      throw DataError("spectrum file: unknown content tag '" + content + "'");
    }
  } else if (first_line.rfind("# ", 0) == 0) {
    const json meta = json::parse(first_line.substr(2));
    apply_metadata(record, meta);
    content = meta.value("content", "sectors");
    std::string line;
    if (!std::getline(in, line) || line != "sector,index,eigenvalue") {
      throw DataError("spectrum file: missing CSV header: " + path);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string sector_name, index_str, value_str;
      if (!std::getline(ss, sector_name, ',') || !std::getline(ss, index_str, ',') ||
          !std::getline(ss, value_str)) {
        throw DataError("spectrum file: malformed CSV row: " + line);
      }
      if (sector_name == "even") {
        record.sector_eigenvalues[0].push_back(std::stod(value_str));
      } else if (sector_name == "odd") {
        record.sector_eigenvalues[1].push_back(std::stod(value_str));
      } else if (sector_name == "full") {
        full_list.push_back(std::stod(value_str));
      } else {
        throw DataError("spectrum file: unknown sector '" + sector_name + "'");
      }
    }
  } else {
    throw DataError("unrecognized spectrum file format: " + path);
  }

  for (auto& sector : record.sector_eigenvalues) {
    if (!std::is_sorted(sector.begin(), sector.end())) {
      throw DataError("spectrum file: sector eigenvalues not sorted: " + path);
    }
  }
  if (content == "full") {
    if (!std::is_sorted(full_list.begin(), full_list.end())) {
      throw DataError("spectrum file: eigenvalues not sorted: " + path);
    }
    record.eigenvalues = std::move(full_list);
  } else {
    record.eigenvalues.reserve(record.sector_eigenvalues[0].size() +
                               record.sector_eigenvalues[1].size());
    std::merge(record.sector_eigenvalues[0].begin(), record.sector_eigenvalues[0].end(),
               record.sector_eigenvalues[1].begin(), record.sector_eigenvalues[1].end(),
               std::back_inserter(record.eigenvalues));
  }
  const std::uint64_t expected =
      (content == "sectors" || content == "full") ? record.dimension() : record.dimension() / 2;
  if (record.eigenvalues.size() != expected) {
    throw DataError("spectrum file: eigenvalue count does not match the metadata: " + path);
  }
  record.multiplicities = detect_degeneracies(record.eigenvalues, record.degeneracy_tol);
  for (int s = 0; s < 2; ++s) {
    if (!record.sector_eigenvalues[s].empty()) {
      record.sector_multiplicities[s] =
          detect_degeneracies(record.sector_eigenvalues[s], record.degeneracy_tol);
    }
  }
  return record;
}

}  // namespace syk
