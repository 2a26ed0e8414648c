#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "biclab/basis.hpp"
#include "biclab/solve.hpp"

namespace biclab {

// Per-site particle density rho(x) = <n_x>/N; sums to one.
struct DensityProfile {
	int                 half_length = 0;
	int                 particles   = 0;
	std::vector<double> rho;  // index x + L

	double at_site(int x) const { return rho[static_cast<std::size_t>(x + half_length)]; }
	double sum() const;
};

DensityProfile density(const Eigen::VectorXd& state, const SectorBasis& basis);
DensityProfile density(const Eigen::VectorXcd& state, const SectorBasis& basis);
DensityProfile density(const Eigen::VectorXd& adapted, const ParityBasis& basis);

// Width of the particle distribution,
//   dx = sqrt( sum_x x^2 rho(x) - (sum_x x rho(x))^2 ),
// with x the linear site label. Tiny negative variances are clamped to zero;
// anything below -1e-12 signals corrupted input and throws.
double width(const DensityProfile& profile);

// Unweighted mean of eev over eigenstates with |E_alpha - energy| <= half_window.
double microcanonical_average(const Spectrum& spectrum, std::span<const double> eev, double energy,
                              double half_window);

double               overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
std::complex<double> overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

double energy_expectation(const SparseOperator& op, const Eigen::VectorXd& state);
double energy_expectation(const SparseOperator& op, const Eigen::VectorXcd& state);

// Diagonal of n_site. In a parity basis the operator stays diagonal (orbits
// are disjoint), with value (n_x(rep) + n_x(partner))/2 on pair elements.
std::vector<double> number_diagonal(int site, const SectorBasis& basis);
std::vector<double> number_diagonal(int site, const ParityBasis& basis);

// <v_k | diag | v_k> for every eigenvector column
std::vector<double> eigenstate_expectations(const Spectrum& spectrum,
                                            std::span<const double> diagonal);

}  // namespace biclab
