#pragma once

#include <Eigen/Dense>
#include <optional>

#include "biclab/basis.hpp"
#include "biclab/model.hpp"

namespace biclab {

// Two-cluster configuration: positions x1 < x2, both away from the impurity.
// In the A sector each position carries a boson pair; in the B sector the
// impurity holds two bosons and each position a single one.
struct PairConfig {
	int x1, x2;
	friend bool operator==(const PairConfig&, const PairConfig&) = default;
};

enum class ClusterSector { APair, BPair };  // (0,2,2) and (2,1,1)

// Ordered list of all PairConfigs with |x| <= L (lexicographic by (x1, x2)).
class EffectiveBasis {
  public:
	explicit EffectiveBasis(int half_length);

	int                        half_length() const { return half_length_; }
	std::size_t                dim() const { return configs_.size(); }
	const PairConfig&          config(std::size_t i) const { return configs_[i]; }
	std::optional<std::size_t> index_of(PairConfig c) const;

	// embeds pair coefficients as Fock amplitudes of the given sector shape
	Eigen::VectorXd embed(const Eigen::VectorXd& coefficients, ClusterSector sector,
	                      const SectorBasis& fock) const;

  private:
	int                     half_length_;
	std::vector<PairConfig> configs_;
};

// Effective Hamiltonian of the (0,2,2) sector on an open chain: cluster
// hopping 2t^2/U (impurity site excluded), nearest-neighbour attraction
// -16t^2/U, impurity-adjacent diagonal 2t^2/(U - n_{+-1} V), constant
// 4t^2/U, plus the 2U sector offset when include_constant is set.
SparseOperator build_h022(const ModelParams& params, int half_length, bool include_constant = true);

// Effective Hamiltonian of the (2,1,1) sector. Order 1: -t nearest-neighbour
// hops (impurity excluded) plus the U+2V offset (behind include_constant).
// Order 2 adds the exact second-order terms: the across-impurity exchange
// t^2 (U-V)/((U+V)(2U+V)), the impurity-adjacent diagonal
// t^2 (8U^2+5UV-V^2)/(V(U+V)(2U+V)) (n_-1 + n_+1), the constant 4t^2/(U+V),
// and the adjacent-pair processes through a doubly occupied site: diagonal
// -4t^2/U per adjacent pair and correlated pair shifts -2t^2/U.
SparseOperator build_h211(const ModelParams& params, int half_length, int order,
                          bool include_constant = true);

// Block matrix on A ⊕ B with the single cross coupling 4*sqrt(2)*t^2/V
// between the A and B configurations (-1, +1).
SparseOperator build_combined(const ModelParams& params, int half_length);

double cross_coupling(const ModelParams& params);  // 4*sqrt(2)*t^2/V

// Brute-force degenerate perturbation theory through second order:
//   P_bra (tT) P_ket  +  P_bra (tT) Q (E0_ket - H0)^-1 Q (tT) P_ket
// computed exactly over the full Fock space. Q excludes every configuration
// with an A- or B-sector shape. The Fock basis must be open-boundary with
// half-length >= configs.half_length() + 1 so that boundary configurations
// keep all their virtual processes, and carry N = 4.
// Throws when a resolvent denominator vanishes (the U ~ V breakdown).
Eigen::MatrixXd numeric_second_order(ClusterSector bra, ClusterSector ket,
                                     const ModelParams& params, const SectorBasis& fock,
                                     const EffectiveBasis& configs);

enum class Branch { B1, B2, Secondary };

// Closed-form bound-state data of the (0,2,2) effective model. Energies
// include the 2U sector offset. Momentum factors are the plane-wave bases
// (e^{i k1}, e^{i k2}) of the wavefunction.
struct BoundStateFormula {
	Branch branch;
	double energy = 0;
	bool   exists = false;
	double momentum1 = 0, momentum2 = 0;
};

BoundStateFormula bound_state_energy(Branch branch, const ModelParams& params);

// Unnormalized closed-form amplitude at a configuration. parity_sign is +-1;
// branch B2 carries even parity only and returns 0 for parity_sign = -1.
double bound_state_wavefunction(Branch branch, int parity_sign, const ModelParams& params,
                                PairConfig config);

// Wavefunction over the truncated pair basis, normalized
Eigen::VectorXd assemble_bound_state(Branch branch, int parity_sign, const ModelParams& params,
                                     const EffectiveBasis& basis);

}  // namespace biclab
