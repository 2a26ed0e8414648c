#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "biclab/basis.hpp"
#include "biclab/types.hpp"

namespace biclab {

// Real symmetric sparse matrix, stored once per unordered index pair
// (upper triangle, col >= row) in CSR form.
class SparseOperator {
  public:
	struct Triplet {
		std::size_t row, col;
		double      value;
	};

	SparseOperator() = default;
	static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> entries,
	                                    bool symmetric = true);

	std::size_t dim() const { return dim_; }
	bool        symmetric() const { return symmetric_; }
	std::size_t stored_entries() const { return values_.size(); }

	void apply(const double* in, double* out) const;  // out = A * in
	Eigen::VectorXd  apply(const Eigen::VectorXd& in) const;
	Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const;

	Eigen::MatrixXd to_dense() const;
	double          max_abs() const;
	double          trace() const;
	double          coeff(std::size_t row, std::size_t col) const;

	template<typename F>  // F(row, col, value) over stored (upper-triangle) entries
	void for_each_entry(F&& f) const {
		for(std::size_t r = 0; r < dim_; ++r)
			for(std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) f(r, cols_[k], values_[k]);
	}

	// coordinate-format text dump, one "row col value" line per stored entry
	void write_coordinate_file(std::ostream& os) const;

	SparseOperator add_scaled(const SparseOperator& other, double factor) const;  // this + factor*other

  private:
	std::size_t              dim_       = 0;
	bool                     symmetric_ = true;
	std::vector<std::size_t> row_start_;
	std::vector<std::size_t> cols_;
	std::vector<double>      values_;
};

// One boson hop plus its amplitude, produced by applying a lattice move to a
// Fock state.
struct Move {
	FockState state;
	double    amplitude;
};

std::vector<std::pair<int, int>> lattice_bonds(const LatticeSpec& lattice);

// All single-boson hops of T = -sum_bonds (b+_x b_y + h.c.) applied to a state
void kinetic_moves(std::span<const occupation_t> state,
                   const std::vector<std::pair<int, int>>& bonds, std::vector<Move>& out);

// Hamiltonian of the impurity chain:
//   H = -t sum_bonds (b+_x b_y + h.c.) + (U/2) sum_x n_x (n_x - 1) + V n_0
SparseOperator build_full_hamiltonian(const ModelParams& params, const SectorBasis& basis);
SparseOperator build_full_hamiltonian(const ModelParams& params, const ParityBasis& basis);

// Diagonal part H0 (interaction + impurity) and hopping part T with H = H0 + t*T
SparseOperator build_h0(const ModelParams& params, const SectorBasis& basis);
SparseOperator build_h0(const ModelParams& params, const ParityBasis& basis);
SparseOperator build_kinetic(const SectorBasis& basis);
SparseOperator build_kinetic(const ParityBasis& basis);

SparseOperator build_number_operator(int site, const SectorBasis& basis);
SparseOperator build_number_operator(int site, const ParityBasis& basis);
SparseOperator build_parity_matrix(const SectorBasis& basis);

}  // namespace biclab
