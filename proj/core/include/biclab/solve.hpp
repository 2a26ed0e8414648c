#pragma once

#include <Eigen/Dense>
#include <optional>

#include "biclab/model.hpp"
#include "biclab/types.hpp"

namespace biclab {

struct EigenPair {
	double          value;
	Eigen::VectorXd vector;
	double          residual;  // ||H v - E v||_2, recomputed at acceptance
};

// Eigenpairs in ascending value order; complete is set only by full
// diagonalization.
struct Spectrum {
	std::vector<double> values;
	Eigen::MatrixXd     vectors;    // column k belongs to values[k]
	std::vector<double> residuals;
	bool                complete = false;

	std::size_t size() const { return values.size(); }
	EigenPair   pair(std::size_t k) const {
        return {values[k], vectors.col(static_cast<Eigen::Index>(k)), residuals[k]};
	}
};

struct DenseOptions {
	std::size_t dense_cap = 12000;
};

// Full diagonalization of a symmetric operator (LAPACK dsyevd when available).
Spectrum eig_dense(const SparseOperator& op, const DenseOptions& options = {});

struct WindowOptions {
	double        tol          = 1e-8;  // residual bound on returned pairs, in units of H
	int           max_basis    = 160;   // Krylov basis per restart cycle
	int           keep         = 32;    // Ritz pairs carried across restarts
	int           max_restarts = 600;
	std::uint64_t rng_seed     = 0x1531u;
	std::optional<Eigen::VectorXd> seed;  // optional start vector (e.g. an effective-model state)
	// strict: the count nearest-center states themselves must converge.
	// relaxed: return the count nearest among converged pairs, which may skip
	// slowly converging neighbours closer to the center (seeded hunts).
	bool strict_nearest = true;
	// > 0 with a seed and strict_nearest off: stop once the converged pairs
	// hold this fraction of the seed's weight, and return them ranked by
	// overlap (up to count; possibly fewer).
	double seed_capture = 0.0;
	// return the best available (possibly unconverged) pairs at the restart
	// cap instead of throwing; residuals stay honest
	bool best_effort = false;
	bool trace       = false;  // per-restart progress on stderr
};

// Interior eigenpairs nearest `center`, via thick-restart Lanczos on the
// spectral fold (H - center)^2 with Rayleigh-Ritz recovery of signed values.
// Returns at least `count` pairs with residual <= tol (all dim pairs when
// count >= dim); throws on non-convergence, reporting the best residual.
Spectrum eig_window(const SparseOperator& op, double center, std::size_t count,
                    const WindowOptions& options = {});

// Two-stage localized-candidate hunt: a loose seeded probe locates the
// dominant eigenstate near energy_ref, then a tight solve re-centered on the
// probe value polishes `count` pairs around it.
Spectrum windowed_candidates(const SparseOperator& op, double energy_ref, std::size_t count,
                             WindowOptions options);

struct EvolveOptions {
	int    max_krylov   = 30;
	double min_substep  = 1e-8;
	int    max_substeps = 200000;
};

// state -> exp(-i H dt) state with accumulated 2-norm error <= tol.
Eigen::VectorXcd evolve(const SparseOperator& hamiltonian, const Eigen::VectorXcd& state,
                        double dt, double tol, const EvolveOptions& options = {});

// Rotates eigenvectors inside degenerate clusters so each becomes a +-1
// eigenvector of the (commuting) symmetry operator; returns the signs.
std::vector<int> resolve_degeneracy_by_symmetry(Spectrum& spectrum, const SparseOperator& symmetry,
                                                double cluster_tol = 1e-9);

}  // namespace biclab
