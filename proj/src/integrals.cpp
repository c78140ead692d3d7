#include "downfold/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace downfold {

namespace {

int parse_header_int(const std::string& header, const std::string& key) {
  auto pos = header.find(key);
  if (pos == std::string::npos) throw std::runtime_error("FCIDUMP header missing " + key);
  pos = header.find('=', pos);
  if (pos == std::string::npos) throw std::runtime_error("FCIDUMP header missing value for " + key);
  ++pos;
  while (pos < header.size() && std::isspace(static_cast<unsigned char>(header[pos]))) ++pos;
  size_t end = pos;
  while (end < header.size() &&
         (std::isdigit(static_cast<unsigned char>(header[end])) || header[end] == '-' ||
          header[end] == '+'))
    ++end;
  if (end == pos) throw std::runtime_error("FCIDUMP header: unparsable value for " + key);
  return std::stoi(header.substr(pos, end - pos));
}

}  // namespace

ParsedIntegrals parse_fcidump(std::istream& in) {
  std::string line;
  std::string header;
  bool in_header = true;
  std::vector<std::array<double, 5>> records;

  while (std::getline(in, line)) {
    if (in_header) {
      header += line + "\n";
      auto upper = line;
      std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
      if (upper.find("&END") != std::string::npos || upper.find("/") != std::string::npos)
        in_header = false;
      continue;
    }
    std::istringstream ss(line);
    double v;
    int i, j, k, l;
    if (ss >> v >> i >> j >> k >> l)
      records.push_back({v, static_cast<double>(i), static_cast<double>(j),
                         static_cast<double>(k), static_cast<double>(l)});
  }
  if (in_header) throw std::runtime_error("FCIDUMP: header not terminated by &END");

  ParsedIntegrals out;
  out.system.n_spatial = parse_header_int(header, "NORB");
  out.system.n_electrons = parse_header_int(header, "NELEC");
  try {
    out.system.ms2 = parse_header_int(header, "MS2");
  } catch (const std::runtime_error&) {
    out.system.ms2 = 0;
  }
  if (out.system.ms2 != 0)
    throw std::runtime_error("FCIDUMP: MS2 != 0 unsupported (closed-shell only)");
  if (out.system.n_electrons % 2 != 0)
    throw std::runtime_error("FCIDUMP: odd NELEC unsupported (closed-shell only)");

  const int n = out.system.n_spatial;
  out.one.h1 = Mat::Zero(n, n);
  out.two.h2 = Tensor4(n);

  for (const auto& r : records) {
    const double v = r[0];
    const int i = static_cast<int>(r[1]), j = static_cast<int>(r[2]),
              k = static_cast<int>(r[3]), l = static_cast<int>(r[4]);
    for (int idx : {i, j, k, l})
      if (idx < 0 || idx > n) throw std::runtime_error("FCIDUMP: index out of range [1,NORB]");
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      out.core_energy = v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw std::runtime_error("FCIDUMP: malformed one-electron record");
      out.one.h1(i - 1, j - 1) = v;
      out.one.h1(j - 1, i - 1) = v;
    } else {
      if (i == 0 || j == 0) throw std::runtime_error("FCIDUMP: malformed two-electron record");
      // chemist (ij|kl); complete the 8-fold symmetry
      const int p = i - 1, q = j - 1, rr = k - 1, s = l - 1;
      const std::array<std::array<int, 4>, 8> images = {{{p, q, rr, s},
                                                         {q, p, rr, s},
                                                         {p, q, s, rr},
                                                         {q, p, s, rr},
                                                         {rr, s, p, q},
                                                         {s, rr, p, q},
                                                         {rr, s, q, p},
                                                         {s, rr, q, p}}};
      for (const auto& im : images) out.two.set_from_chemist(im[0], im[1], im[2], im[3], v);
    }
  }

  // canonical orbital energies = diagonal of the closed-shell Fock matrix
  std::vector<int> occ(out.system.n_electrons / 2);
  std::iota(occ.begin(), occ.end(), 0);
  Mat f = fock_matrix(out.one, out.two, occ);
  out.system.mo_energies.resize(n);
  for (int p = 0; p < n; ++p) {
    out.system.mo_energies[p] = f(p, p);
    if (!std::isfinite(out.system.mo_energies[p]))
      throw std::runtime_error("non-finite orbital energy");
  }
  return out;
}

ParsedIntegrals parse_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("input not found: " + path);
  return parse_fcidump(in);
}

void write_fcidump(std::ostream& out, const ParsedIntegrals& ints, double write_tol) {
  const int n = ints.system.n_spatial;
  out << "&FCI NORB=" << n << ",NELEC=" << ints.system.n_electrons
      << ",MS2=" << ints.system.ms2 << ",\n";
  out << "  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n&END\n";
  out << std::setprecision(16) << std::scientific;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = ints.two.chemist(i, j, k, l);
          if (std::abs(v) > write_tol)
            out << std::setw(23) << v << " " << i + 1 << " " << j + 1 << " " << k + 1 << " "
                << l + 1 << "\n";
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(ints.one.h1(i, j)) > write_tol)
        out << std::setw(23) << ints.one.h1(i, j) << " " << i + 1 << " " << j + 1 << " 0 0\n";
  out << std::setw(23) << ints.core_energy << " 0 0 0 0\n";
}

std::vector<int> order_orbitals(const MolecularSystem& sys) {
  if (sys.mo_energies.size() != static_cast<size_t>(sys.n_spatial))
    throw std::runtime_error("order_orbitals: mo_energies missing");
  std::vector<int> perm(sys.n_spatial);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return sys.mo_energies[a] < sys.mo_energies[b];
  });
  return perm;
}

OrbitalClassification classify_orbitals(const MolecularSystem& sys, int n_electrons,
                                        const std::vector<int>& active_window) {
  if (n_electrons > 2 * sys.n_spatial)
    throw std::runtime_error("classify_orbitals: more electrons than spin orbitals");
  OrbitalClassification out;
  out.kind.assign(sys.n_spatial, OrbitalKind::Virtual);
  const int nocc = n_electrons / 2;
  for (int i = 0; i < nocc; ++i) out.kind[i] = OrbitalKind::Core;
  for (int a : active_window) {
    if (a < 0 || a >= sys.n_spatial) throw std::runtime_error("active window index out of range");
    out.kind[a] = OrbitalKind::Active;
  }
  return out;
}

Mat fock_matrix(const OneBodyTensor& one, const TwoBodyTensor& two,
                const std::vector<int>& occupied) {
  const int n = one.h1.rows();
  Mat f = one.h1;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double v = 0.0;
      for (int i : occupied) v += 2.0 * two.chemist(p, q, i, i) - two.chemist(p, i, i, q);
      f(p, q) += v;
    }
  return f;
}

double hf_energy(const OneBodyTensor& one, const TwoBodyTensor& two,
                 const std::vector<int>& occupied) {
  double e = 0.0;
  for (int i : occupied) e += 2.0 * one.h1(i, i);
  for (int i : occupied)
    for (int j : occupied) e += 2.0 * two.chemist(i, i, j, j) - two.chemist(i, j, j, i);
  return e;
}

}  // namespace downfold
