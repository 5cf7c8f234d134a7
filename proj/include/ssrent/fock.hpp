#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssrent/error.hpp"

namespace ssrent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class Party { alice, bob };

// |n, i>: n particles, i labels the degenerate states at that particle number
struct LocalLabel {
  int particles = 0;
  int index = 0;
  friend auto operator<=>(const LocalLabel&, const LocalLabel&) = default;
};

// One party's local Hilbert space, graded by particle number.
// Flat ordering: by particle number, then internal index.
class LocalSpace {
 public:
  LocalSpace();
  explicit LocalSpace(std::vector<int> degeneracy);

  // non-degenerate levels |0>..|max>
  static LocalSpace levels(int max_particles);
  // `count` binary modes; level n has C(count, n) states
  static LocalSpace modes(int count);

  int max_particles() const { return static_cast<int>(deg_.size()) - 1; }
  int degeneracy(int n) const;
  int dimension() const { return offsets_.back(); }
  int offset(int n) const;
  bool contains(const LocalLabel& l) const;
  int flat(const LocalLabel& l) const;
  LocalLabel label(int flat) const;
  bool nondegenerate() const;
  const std::vector<int>& degeneracies() const { return deg_; }

  friend bool operator==(const LocalSpace&, const LocalSpace&) = default;

 private:
  std::vector<int> deg_;
  std::vector<int> offsets_;
};

// occupation bit string of a mode register <-> label (ascending numeric order within a level)
LocalLabel mode_label(unsigned bits, int count);
unsigned mode_bits(const LocalLabel& l, int count);

// Two registers held by one party, viewed as a single graded space.
// Within a combined level: first-register particles, then first index, then second index.
class RegisterPair {
 public:
  RegisterPair(LocalSpace first, LocalSpace second);

  const LocalSpace& first() const { return first_; }
  const LocalSpace& second() const { return second_; }
  const LocalSpace& combined() const { return combined_; }

  LocalLabel combine(const LocalLabel& a, const LocalLabel& b) const;
  std::pair<LocalLabel, LocalLabel> split(const LocalLabel& c) const;
  // combined flat index for kron index (flat_a * dim_b + flat_b)
  const std::vector<int>& kron_to_flat() const { return kron_to_flat_; }
  // operator A (x) B expressed on the combined space
  CMatrix tensor(const CMatrix& a, const CMatrix& b) const;

 private:
  LocalSpace first_, second_, combined_;
  std::vector<int> kron_to_flat_;
};

// Ordered (alice, bob) labels with a fixed total particle number.
class BlockBasis {
 public:
  BlockBasis(const LocalSpace& alice, const LocalSpace& bob, int total);

  int total() const { return total_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::pair<LocalLabel, LocalLabel>>& labels() const { return labels_; }
  // -1 when the pair is not part of this block
  int position(const LocalLabel& a, const LocalLabel& b) const;

 private:
  LocalSpace alice_, bob_;
  int total_;
  std::vector<std::pair<LocalLabel, LocalLabel>> labels_;
  std::map<int, int> sector_offset_;
};

struct Amplitude {
  LocalLabel alice;
  LocalLabel bob;
  cplx value;
};

class BlockDensityMatrix;

// Bipartite pure state with fixed total particle number, stored as phi = (+)_n phi^n
// where n is Alice's particle number. Need not be normalized.
class SectoredPureState {
 public:
  SectoredPureState(LocalSpace alice, LocalSpace bob, int total, std::map<int, CMatrix> sectors);

  // normalizes; infers spaces from the labels unless given
  static SectoredPureState from_amplitudes(std::span<const Amplitude> amplitudes,
                                           std::optional<LocalSpace> alice = std::nullopt,
                                           std::optional<LocalSpace> bob = std::nullopt);

  int total_particles() const { return total_; }
  const LocalSpace& alice_space() const { return alice_; }
  const LocalSpace& bob_space() const { return bob_; }
  const std::map<int, CMatrix>& sectors() const { return sectors_; }

  double norm() const;
  SectoredPureState normalized() const;
  CMatrix coefficients() const;
  CVector block_vector() const;  // in BlockBasis(alice, bob, total) order
  std::vector<Amplitude> amplitudes() const;
  BlockDensityMatrix density() const;
  cplx inner(const SectoredPureState& other) const;
  // probability of Alice holding n particles (unnormalized weights)
  std::map<int, double> sector_weights() const;

 private:
  LocalSpace alice_, bob_;
  int total_;
  std::map<int, CMatrix> sectors_;
};

std::vector<double> schmidt_sector(const SectoredPureState& state, int n);
SectoredPureState tensor(const SectoredPureState& x, const SectoredPureState& y);
SectoredPureState state_from_block_vector(const LocalSpace& alice, const LocalSpace& bob, int total,
                                          const CVector& v);

// A pure bipartite vector without the SSR constraint (superpositions of totals allowed).
struct GeneralPureState {
  LocalSpace alice, bob;
  CMatrix coefficients;  // alice.dimension() x bob.dimension()
};

GeneralPureState tensor(const GeneralPureState& x, const GeneralPureState& y);
// rho = sum_k w_k |psi_k><psi_k| / <psi_k|psi_k>, dense kron(alice, bob) ordering
CMatrix dense_density(std::span<const std::pair<double, GeneralPureState>> terms);

// Density operator that is block diagonal in the total particle number.
class BlockDensityMatrix {
 public:
  // checks block shapes, hermiticity (1e-12) and unit trace (1e-12)
  BlockDensityMatrix(LocalSpace alice, LocalSpace bob, std::map<int, CMatrix> blocks);

  static BlockDensityMatrix from_dense(const LocalSpace& alice, const LocalSpace& bob,
                                       const CMatrix& dense, double tol = 1e-12);

  const LocalSpace& alice_space() const { return alice_; }
  const LocalSpace& bob_space() const { return bob_; }
  const std::map<int, CMatrix>& blocks() const { return blocks_; }
  BlockBasis basis(int total) const { return BlockBasis(alice_, bob_, total); }

  double trace() const;
  double min_eigenvalue() const;
  void check_positive(double tol = 1e-10) const;
  CMatrix dense() const;
  cplx element(const LocalLabel& a, const LocalLabel& b, const LocalLabel& a2,
               const LocalLabel& b2) const;

 private:
  LocalSpace alice_, bob_;
  std::map<int, CMatrix> blocks_;
};

BlockDensityMatrix dephase(const BlockDensityMatrix& rho);
CMatrix partial_trace(const BlockDensityMatrix& rho, Party keep);
BlockDensityMatrix tensor(const BlockDensityMatrix& x, const BlockDensityMatrix& y);
BlockDensityMatrix mixture(std::span<const std::pair<double, BlockDensityMatrix>> terms);
double max_abs_difference(const BlockDensityMatrix& x, const BlockDensityMatrix& y);

// Measurement on one party. Operator i maps level n of the input space to level
// n + shift[i] of its output space.
class LocalKrausSet {
 public:
  LocalKrausSet(LocalSpace input, std::vector<CMatrix> operators, std::vector<int> shifts = {},
                std::optional<LocalSpace> output = std::nullopt, double tol = 1e-10);
  LocalKrausSet(LocalSpace input, std::vector<CMatrix> operators, std::vector<int> shifts,
                std::vector<LocalSpace> outputs, double tol = 1e-10);

  static LocalKrausSet identity(const LocalSpace& space);
  static LocalKrausSet number_projectors(const LocalSpace& space);
  // {F, sqrt(1 - F^dag F)} for a block-diagonal contraction F
  static LocalKrausSet filter(const LocalSpace& space, const CMatrix& f);

  std::size_t size() const { return ops_.size(); }
  const LocalSpace& input_space() const { return input_; }
  const LocalSpace& output_space(std::size_t i) const { return outputs_.at(i); }
  const CMatrix& op(std::size_t i) const { return ops_.at(i); }
  int shift(std::size_t i) const { return shifts_.at(i); }
  bool common_output() const;
  // block of operator i taking level n to level n + shift(i)
  CMatrix level_block(std::size_t i, int n) const;

 private:
  void validate(double tol) const;
  LocalSpace input_;
  std::vector<CMatrix> ops_;
  std::vector<int> shifts_;
  std::vector<LocalSpace> outputs_;
};

struct KrausResult {
  BlockDensityMatrix state;
  double probability;
};

KrausResult apply_local_kraus(const BlockDensityMatrix& rho, const LocalKrausSet& alice,
                              const LocalKrausSet& bob,
                              std::optional<std::pair<std::size_t, std::size_t>> select = std::nullopt);

// unnormalized action of a single Kraus operator on a pure state
SectoredPureState apply_kraus_operator(const SectoredPureState& state, const LocalKrausSet& kraus,
                                       std::size_t i, Party party);

}  // namespace ssrent
