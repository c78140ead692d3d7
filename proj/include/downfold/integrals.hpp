#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "downfold/core.hpp"

namespace downfold {

struct MolecularSystem {
  int n_spatial = 0;
  int n_electrons = 0;
  std::vector<double> mo_energies;  // Hartree, one per spatial orbital
  int ms2 = 0;
  std::string point_group = "C1";
};

/// One-electron integrals h1_pq over spatial orbitals (Hartree).
struct OneBodyTensor {
  Mat h1;
};

/// Two-electron integrals stored in the operator ordering
///   H2 = sum_{abcd} h2[a,b,c,d] f+_{a,s} f+_{b,s'} f_{c,s'} f_{d,s}
/// which relates to chemist notation by  h2[a,b,c,d] = (ad|bc) / 2.
struct TwoBodyTensor {
  Tensor4 h2;

  double chemist(int p, int q, int r, int s) const { return 2.0 * h2(p, r, s, q); }
  void set_from_chemist(int p, int q, int r, int s, double v) { h2(p, r, s, q) = 0.5 * v; }
};

enum class OrbitalKind { Virtual, Core, Active };

struct OrbitalClassification {
  std::vector<OrbitalKind> kind;  // per spatial orbital

  std::vector<int> occupied_like() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(kind.size()); ++i)
      if (kind[i] != OrbitalKind::Virtual) out.push_back(i);
    return out;
  }
};

struct ParsedIntegrals {
  MolecularSystem system;
  OneBodyTensor one;
  TwoBodyTensor two;
  double core_energy = 0.0;
};

/// Parse an FCIDUMP stream (namelist header + "value i j k l" records,
/// chemist notation, 1-based indices). Throws std::runtime_error on malformed
/// input, indices out of range, or MS2 != 0.
ParsedIntegrals parse_fcidump(std::istream& in);
ParsedIntegrals parse_fcidump_file(const std::string& path);

/// Write integrals back in FCIDUMP form; unique chemist records only.
void write_fcidump(std::ostream& out, const ParsedIntegrals& ints, double write_tol = 0.0);

/// Permutation sorting mo_energies ascending, ties broken by original index.
std::vector<int> order_orbitals(const MolecularSystem& sys);

/// Lowest n_electrons/2 orbitals occupied-side (Core unless inside the active
/// window), rest Virtual. Throws if n_electrons exceeds capacity.
OrbitalClassification classify_orbitals(const MolecularSystem& sys, int n_electrons,
                                        const std::vector<int>& active_window = {});

/// Restricted closed-shell Fock matrix:
///   f_pq = h1_pq + sum_{i in occ} [2 (pq|ii) - (pi|iq)].
Mat fock_matrix(const OneBodyTensor& one, const TwoBodyTensor& two,
                const std::vector<int>& occupied);

/// Restricted HF energy of the determinant occupying `occupied` (no core term).
double hf_energy(const OneBodyTensor& one, const TwoBodyTensor& two,
                 const std::vector<int>& occupied);

}  // namespace downfold
