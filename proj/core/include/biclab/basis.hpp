#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "biclab/types.hpp"

namespace biclab {

// Number of Fock states with N bosons on M sites, C(M+N-1, N).
// Throws biclab::error on 64-bit overflow instead of wrapping.
std::size_t sector_dimension(int site_count, int particles);

FockState parity_reflect(const FockState& state);

// Fixed-particle-number occupation basis over a chain.
//
// Order is descending lexicographic on occupation vectors read from site -L
// to +L, so (N,0,...,0) has rank 0. Ranks are computed with the combinatorial
// number system; no lookup table is needed for either direction.
class SectorBasis {
  public:
	static constexpr std::size_t kDefaultDimensionCap = 5'000'000;

	SectorBasis(LatticeSpec lattice, int particles,
	            std::size_t dimension_cap = kDefaultDimensionCap);

	const LatticeSpec& lattice() const { return lattice_; }
	int                particles() const { return particles_; }
	std::size_t        dim() const { return dim_; }

	std::span<const occupation_t> state(std::size_t rank) const {
		return {occ_.data() + rank * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
	}
	FockState state_vector(std::size_t rank) const;

	// rank of an occupation vector; O(M) arithmetic
	std::size_t rank_of(std::span<const occupation_t> state) const;

	// rank of the state reflected about site 0
	std::size_t reflected(std::size_t rank) const;

	// convenience: state with the given site -> occupation assignments
	FockState   fock_from_sites(const std::vector<std::pair<int, int>>& site_occupations) const;

  private:
	LatticeSpec lattice_;
	int         particles_;
	int         m_;
	std::size_t dim_;
	std::vector<occupation_t> occ_;               // dim x M, row-major
	std::vector<std::size_t>  compositions_;      // comp_[r*(m_+1)+k] = C(r+k-1, k-1)
	std::size_t compositions(int remaining, int slots) const {
		return compositions_[static_cast<std::size_t>(remaining) * (m_ + 1) + slots];
	}
};

// Parity-adapted (symmetric/antisymmetric) combinations over a SectorBasis.
//
// Element k is either a self-symmetric basis state (even sector only) or the
// normalized pair (|n> +- P|n>)/sqrt(2) with rep = min(rank, reflected rank).
class ParityBasis {
  public:
	struct Element {
		std::size_t rep;
		std::size_t partner;  // == rep for self-symmetric states
		bool        self_symmetric;
	};

	ParityBasis(std::shared_ptr<const SectorBasis> parent, Parity parity);

	const SectorBasis& parent() const { return *parent_; }
	std::shared_ptr<const SectorBasis> parent_ptr() const { return parent_; }
	Parity             parity() const { return parity_; }
	double             sign() const { return parity_ == Parity::Even ? 1.0 : -1.0; }
	std::size_t        dim() const { return elements_.size(); }
	const Element&     element(std::size_t k) const { return elements_[k]; }

	static constexpr std::size_t npos = static_cast<std::size_t>(-1);
	// adapted index owning a full-basis rank (npos if the orbit is absent,
	// i.e. a self-symmetric state in the odd sector)
	std::size_t adapted_index(std::size_t full_rank) const { return owner_[full_rank]; }

	Eigen::VectorXd  lift(const Eigen::VectorXd& adapted) const;
	Eigen::VectorXd  project(const Eigen::VectorXd& full) const;
	Eigen::VectorXcd lift(const Eigen::VectorXcd& adapted) const;
	Eigen::VectorXcd project(const Eigen::VectorXcd& full) const;

  private:
	std::shared_ptr<const SectorBasis> parent_;
	Parity                             parity_;
	std::vector<Element>               elements_;
	std::vector<std::size_t>           owner_;
};

std::size_t count_self_symmetric(const SectorBasis& basis);

}  // namespace biclab
