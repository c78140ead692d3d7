#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "downfold/core.hpp"
#include "downfold/integrals.hpp"
#include "downfold/tensorfactor.hpp"

namespace downfold {

/// Block Hamiltonian of the not-yet-downfolded orbitals. After the first
/// flow step the two-electron interaction splits into spin channels:
///   H = sum h1 f+f + sum_s h2s[abcd] f+_{as}f+_{bs}f_{cs}f_{ds}
///                  + sum_s h2o[abcd] f+_{as}f+_{b,-s}f_{c,-s}f_{ds}.
/// A freshly ingested Hamiltonian has h2s == h2o == the parsed ERI tensor.
struct EffectiveHamiltonian {
  int n = 0;
  Mat h1;
  Tensor4 h2s, h2o;
  double core_energy = 0.0;
  std::vector<int> occupied;               // reference occupied orbitals
  std::vector<double> energy_ledger;       // per-step diagonal contributions

  std::optional<CholeskyFactors> chol;     // factorized views (step-0 ERI)
  std::optional<CPFactors> cp;

  static EffectiveHamiltonian from_integrals(const ParsedIntegrals& ints);

  int n_active() const { return n; }
  int frontier() const { return n - 1; }   // orbital downfolded next
  std::vector<int> virtuals_below_frontier() const;
  bool frontier_is_virtual() const;

  /// Closed-shell Fock matrix of the current block (uses channel tensors).
  Mat fock() const;
};

/// Cluster amplitudes for one downfolding step of orbital N = n-1.
/// t1[i]: singles i -> N; t2m(b,i,j): mixed doubles (i,s;j,s') -> (N,s;b,s');
/// t2p(i,j): paired doubles (i up, j dn) -> (N up, N dn).
struct AmplitudeSet {
  Vec t1;
  Tensor3 t2m;
  Mat t2p;

  static AmplitudeSet zero(int n) {
    AmplitudeSet a;
    a.t1 = Vec::Zero(n);
    a.t2m = Tensor3(n, n, n);
    a.t2p = Mat::Zero(n, n);
    return a;
  }
  double max_abs() const;
};

struct ResidualSet {
  Vec r1;       // length n
  Tensor3 r2;   // (n,n,n), mixed-doubles channel (b,i,j)
  Mat r2p;      // (n,n), paired channel
  double inf_norm() const;
};

enum class GeneratorVariant {
  SingleReference,  // reference-projected equations, occ/virt amplitude blocks
  MultiReference,   // full-range amplitudes; exact <=2-electron decoupling
};

struct SolverConfig {
  double tol = 1e-8;          // residual inf-norm
  int max_iter = 200;
  int diis_depth = 8;
  double divergence_norm = 1e3;
  double denom_floor = 1e-6;  // quasi-degeneracy safeguard
  GeneratorVariant variant = GeneratorVariant::SingleReference;
};

struct StepDiagnostics {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  bool quasi_degenerate = false;
  double wall_ms = 0.0;
};

struct EnergyTraceRow {
  int step = 0;
  int orbital = 0;
  int iterations = 0;
  double residual_norm = 0.0;
  double e_step = 0.0;
  double e_cum = 0.0;
  double wall_ms = 0.0;
};

struct EnergyTrace {
  std::vector<EnergyTraceRow> rows;
  double hf_energy = 0.0;       // reference energy incl. core
  double total_energy = 0.0;    // downfolded total incl. core
  double correlation_energy() const { return total_energy - hf_energy; }
};

/// Singles residual of the reference-projected equations (dense path).
Vec residual_t1(const EffectiveHamiltonian& h, const AmplitudeSet& amps);

/// Mixed-doubles and paired-doubles residuals (dense path).
std::pair<Tensor3, Mat> residual_t2(const EffectiveHamiltonian& h, const AmplitudeSet& amps);

ResidualSet residuals(const EffectiveHamiltonian& h, const AmplitudeSet& amps);

/// Multiply-count ledger for the factorized contraction engine.
struct FlopCounter {
  // multiplies per expression id (1..11), one representative slice
  // contraction each, plus the grand total over all evaluated terms.
  std::array<long long, 12> per_expression{};
  long long total = 0;
};

/// Residuals evaluated through the factorized representations
/// (CP factors of the Cholesky ERI; CP factors of t2m). Requires h.cp.
ResidualSet residual_factorized(const EffectiveHamiltonian& h, const AmplitudeSet& amps,
                                const AmplitudeFactors& t2f, FlopCounter* flops = nullptr);

/// Solve the current step's amplitude equations (DIIS-accelerated
/// preconditioned iteration). Deterministic given config.
std::pair<AmplitudeSet, StepDiagnostics> solve_step(const EffectiveHamiltonian& h,
                                                    const SolverConfig& cfg);

/// Apply the flow: renormalize h1/h2 with the converged amplitudes, drop the
/// frontier orbital, and return the step's diagonal energy contribution
/// (zero for a virtual frontier).
std::pair<EffectiveHamiltonian, double> rg_update(const EffectiveHamiltonian& h,
                                                  const AmplitudeSet& amps);

struct DownfoldConfig {
  SolverConfig solver;
  int stop_orbital = 0;          // downfold until this many orbitals remain
  bool factorized = false;       // evaluate residuals through CP factors
  double rank_mult = 2.0;        // N_htf = rank_mult * N_aux
  int ttf_rank = 0;              // 0: max(N_v, 2 N_o)
  double chol_delta = 1e-6;
  uint64_t seed = 12345;
};

/// Full recursion: iterate solve_step + rg_update from the top orbital down,
/// then fold remaining occupied orbitals into the ledger.
EnergyTrace downfold(const EffectiveHamiltonian& h0, const DownfoldConfig& cfg,
                     std::vector<EnergyTraceRow>* detailed = nullptr);

void write_trace_csv(std::ostream& out, const EnergyTrace& trace);

}  // namespace downfold
