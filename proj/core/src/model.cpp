#include "biclab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace biclab {

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> entries,
                                             bool symmetric) {
	SparseOperator op;
	op.dim_       = dim;
	op.symmetric_ = symmetric;
	for(auto& e : entries) {
		if(e.row >= dim || e.col >= dim) throw error("sparse entry index out of range");
		if(symmetric && e.row > e.col) std::swap(e.row, e.col);
	}
	std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
		return a.row != b.row ? a.row < b.row : a.col < b.col;
	});
	op.row_start_.assign(dim + 1, 0);
	op.cols_.reserve(entries.size());
	op.values_.reserve(entries.size());
	for(std::size_t i = 0; i < entries.size();) {
		std::size_t j   = i;
		double      sum = 0;
		while(j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col)
			sum += entries[j++].value;
		if(sum != 0.0) {
			op.cols_.push_back(entries[i].col);
			op.values_.push_back(sum);
			op.row_start_[entries[i].row + 1] += 1;
		}
		i = j;
	}
	for(std::size_t r = 0; r < dim; ++r) op.row_start_[r + 1] += op.row_start_[r];
	return op;
}

void SparseOperator::apply(const double* in, double* out) const {
	for(std::size_t r = 0; r < dim_; ++r) out[r] = 0.0;
	for(std::size_t r = 0; r < dim_; ++r) {
		double acc = 0.0;
		for(std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
			const std::size_t c = cols_[k];
			const double      v = values_[k];
			acc += v * in[c];
			if(symmetric_ && c != r) out[c] += v * in[r];
		}
		out[r] += acc;
	}
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& in) const {
	if(static_cast<std::size_t>(in.size()) != dim_) throw error("apply: size mismatch");
	Eigen::VectorXd out(in.size());
	apply(in.data(), out.data());
	return out;
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& in) const {
	if(static_cast<std::size_t>(in.size()) != dim_) throw error("apply: size mismatch");
	Eigen::VectorXd re(in.size()), im(in.size());
	for(Eigen::Index i = 0; i < in.size(); ++i) {
		re[i] = in[i].real();
		im[i] = in[i].imag();
	}
	Eigen::VectorXd  ore(in.size()), oim(in.size());
	apply(re.data(), ore.data());
	apply(im.data(), oim.data());
	Eigen::VectorXcd out(in.size());
	for(Eigen::Index i = 0; i < in.size(); ++i) out[i] = {ore[i], oim[i]};
	return out;
}

Eigen::MatrixXd SparseOperator::to_dense() const {
	Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
	                                          static_cast<Eigen::Index>(dim_));
	for_each_entry([&](std::size_t r, std::size_t c, double v) {
		m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
		if(symmetric_ && r != c) m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
	});
	return m;
}

double SparseOperator::max_abs() const {
	double m = 0;
	for(double v : values_) m = std::max(m, std::abs(v));
	return m;
}

double SparseOperator::trace() const {
	double tr = 0;
	for_each_entry([&](std::size_t r, std::size_t c, double v) {
		if(r == c) tr += v;
	});
	return tr;
}

double SparseOperator::coeff(std::size_t row, std::size_t col) const {
	if(symmetric_ && row > col) std::swap(row, col);
	for(std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k)
		if(cols_[k] == col) return values_[k];
	return 0.0;
}

void SparseOperator::write_coordinate_file(std::ostream& os) const {
	char buf[64];
	for_each_entry([&](std::size_t r, std::size_t c, double v) {
		std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", r, c, v);
		os << buf;
	});
}

SparseOperator SparseOperator::add_scaled(const SparseOperator& other, double factor) const {
	if(dim_ != other.dim_) throw error("add_scaled: dimension mismatch");
	std::vector<Triplet> tris;
	tris.reserve(stored_entries() + other.stored_entries());
	for_each_entry([&](std::size_t r, std::size_t c, double v) { tris.push_back({r, c, v}); });
	other.for_each_entry(
	    [&](std::size_t r, std::size_t c, double v) { tris.push_back({r, c, factor * v}); });
	return from_triplets(dim_, std::move(tris), symmetric_ && other.symmetric_);
}

std::vector<std::pair<int, int>> lattice_bonds(const LatticeSpec& lattice) {
	std::vector<std::pair<int, int>> bonds;
	const int                        m = lattice.site_count();
	for(int i = 0; i + 1 < m; ++i) bonds.emplace_back(i, i + 1);
	if(lattice.boundary == Boundary::Periodic) bonds.emplace_back(m - 1, 0);
	return bonds;
}

void kinetic_moves(std::span<const occupation_t> s, const std::vector<std::pair<int, int>>& bonds,
                   std::vector<Move>& out) {
	out.clear();
	for(auto [a, b] : bonds) {
		for(auto [src, dst] : {std::pair{a, b}, std::pair{b, a}}) {
			if(s[src] == 0) continue;
			FockState ns(s.begin(), s.end());
			ns[src] -= 1;
			ns[dst] += 1;
			out.push_back({std::move(ns), -std::sqrt(double(s[src]) * double(s[dst] + 1))});
		}
	}
}

namespace {

double h0_diagonal(std::span<const occupation_t> s, const ModelParams& p, int impurity_index) {
	double d = 0;
	for(occupation_t n : s) d += 0.5 * p.U * n * (n - 1.0);
	d += p.V * s[impurity_index];
	return d;
}

// Assembles diag + t*T in the full sector basis.
SparseOperator assemble_full(const SectorBasis& basis,
                             const std::function<double(std::span<const occupation_t>)>& diagonal,
                             double hop_prefactor) {
	const auto  bonds = lattice_bonds(basis.lattice());
	std::vector<SparseOperator::Triplet> tris;
	tris.reserve(basis.dim() * (2 + 2 * bonds.size()) / 2);
	std::vector<Move> moves;
	for(std::size_t r = 0; r < basis.dim(); ++r) {
		const auto s = basis.state(r);
		const double d = diagonal(s);
		if(d != 0.0) tris.push_back({r, r, d});
		if(hop_prefactor != 0.0) {
			kinetic_moves(s, bonds, moves);
			for(const Move& mv : moves) {
				const std::size_t c = basis.rank_of(mv.state);
				if(c >= r) tris.push_back({r, c, hop_prefactor * mv.amplitude});
			}
		}
	}
	return SparseOperator::from_triplets(basis.dim(), std::move(tris), true);
}

// Assembles diag + t*T in a parity-adapted basis. Works column by column:
// expand adapted element j into full states, apply moves, fold the results
// back onto adapted indices.
SparseOperator assemble_adapted(const ParityBasis& basis,
                                const std::function<double(std::span<const occupation_t>)>& diagonal,
                                double hop_prefactor) {
	const SectorBasis& parent = basis.parent();
	const auto         bonds  = lattice_bonds(parent.lattice());
	const double       sgn    = basis.sign();
	constexpr double   inv_sqrt2 = 0.70710678118654752440;

	std::vector<SparseOperator::Triplet> tris;
	std::vector<Move>                    moves;
	std::map<std::size_t, double>        column;
	for(std::size_t j = 0; j < basis.dim(); ++j) {
		const auto& e = basis.element(j);
		column.clear();
		// (full rank, weight) expansion of the adapted element
		std::pair<std::size_t, double> comps[2];
		int                            ncomp = 0;
		if(e.self_symmetric) comps[ncomp++] = {e.rep, 1.0};
		else {
			comps[ncomp++] = {e.rep, inv_sqrt2};
			comps[ncomp++] = {e.partner, sgn * inv_sqrt2};
		}
		for(int ci = 0; ci < ncomp; ++ci) {
			auto [fr, w] = comps[ci];
			const auto s = parent.state(fr);
			const double d = diagonal(s);
			if(d != 0.0) column[fr] += w * d;
			if(hop_prefactor != 0.0) {
				kinetic_moves(s, bonds, moves);
				for(const Move& mv : moves)
					column[parent.rank_of(mv.state)] += w * hop_prefactor * mv.amplitude;
			}
		}
		// fold full-basis column back onto adapted rows
		std::map<std::size_t, double> adapted_col;
		for(auto [fr, v] : column) {
			const std::size_t k = basis.adapted_index(fr);
			if(k == ParityBasis::npos) continue;  // vanishing component in this parity sector
			const auto& ek = basis.element(k);
			double      weight;
			if(ek.self_symmetric) weight = 1.0;
			else if(fr == ek.rep) weight = inv_sqrt2;
			else weight = sgn * inv_sqrt2;
			adapted_col[k] += weight * v;
		}
		for(auto [k, v] : adapted_col)
			if(k >= j && v != 0.0) tris.push_back({k, j, v});
	}
	// entries were stored as (row >= col); from_triplets reorders to upper triangle
	return SparseOperator::from_triplets(basis.dim(), std::move(tris), true);
}

}  // namespace

SparseOperator build_full_hamiltonian(const ModelParams& params, const SectorBasis& basis) {
	const int ci = basis.lattice().index_of(0);
	return assemble_full(
	    basis, [&](std::span<const occupation_t> s) { return h0_diagonal(s, params, ci); }, params.t);
}

SparseOperator build_full_hamiltonian(const ModelParams& params, const ParityBasis& basis) {
	const int ci = basis.parent().lattice().index_of(0);
	return assemble_adapted(
	    basis, [&](std::span<const occupation_t> s) { return h0_diagonal(s, params, ci); }, params.t);
}

SparseOperator build_h0(const ModelParams& params, const SectorBasis& basis) {
	const int ci = basis.lattice().index_of(0);
	return assemble_full(
	    basis, [&](std::span<const occupation_t> s) { return h0_diagonal(s, params, ci); }, 0.0);
}

SparseOperator build_h0(const ModelParams& params, const ParityBasis& basis) {
	const int ci = basis.parent().lattice().index_of(0);
	return assemble_adapted(
	    basis, [&](std::span<const occupation_t> s) { return h0_diagonal(s, params, ci); }, 0.0);
}

SparseOperator build_kinetic(const SectorBasis& basis) {
	return assemble_full(
	    basis, [](std::span<const occupation_t>) { return 0.0; }, 1.0);
}

SparseOperator build_kinetic(const ParityBasis& basis) {
	return assemble_adapted(
	    basis, [](std::span<const occupation_t>) { return 0.0; }, 1.0);
}

SparseOperator build_number_operator(int site, const SectorBasis& basis) {
	const int idx = basis.lattice().index_of(site);
	return assemble_full(
	    basis, [idx](std::span<const occupation_t> s) { return double(s[idx]); }, 0.0);
}

SparseOperator build_number_operator(int site, const ParityBasis& basis) {
	const int idx = basis.parent().lattice().index_of(site);
	return assemble_adapted(
	    basis, [idx](std::span<const occupation_t> s) { return double(s[idx]); }, 0.0);
}

SparseOperator build_parity_matrix(const SectorBasis& basis) {
	std::vector<SparseOperator::Triplet> tris;
	tris.reserve(basis.dim());
	for(std::size_t r = 0; r < basis.dim(); ++r) {
		const std::size_t pr = basis.reflected(r);
		if(pr >= r) tris.push_back({r, pr, 1.0});
	}
	return SparseOperator::from_triplets(basis.dim(), std::move(tris), true);
}

}  // namespace biclab
