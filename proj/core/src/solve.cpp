#include "biclab/solve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <cstdio>
#include <random>

#ifdef BICLAB_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace biclab {

namespace {

// In-place symmetric eigendecomposition of a dense column-major matrix;
// eigenvectors overwrite the input.
void dense_symmetric_eig(Eigen::MatrixXd& a, Eigen::VectorXd& w) {
	const auto n = a.rows();
	w.resize(n);
	if(n == 0) return;
#ifdef BICLAB_HAVE_LAPACKE
	lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
	                                 a.data(), static_cast<lapack_int>(n), w.data());
	if(info != 0) throw error("dsyevd failed with info = " + std::to_string(info));
#else
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
	if(es.info() != Eigen::Success) throw error("dense eigensolver failed");
	w = es.eigenvalues();
	a = es.eigenvectors();
#endif
}

void compute_residuals(const SparseOperator& op, Spectrum& s) {
	s.residuals.resize(s.size());
	Eigen::VectorXd hv(static_cast<Eigen::Index>(op.dim()));
	for(std::size_t k = 0; k < s.size(); ++k) {
		op.apply(s.vectors.col(static_cast<Eigen::Index>(k)).data(), hv.data());
		s.residuals[k] = (hv - s.values[k] * s.vectors.col(static_cast<Eigen::Index>(k))).norm();
	}
}

}  // namespace

Spectrum eig_dense(const SparseOperator& op, const DenseOptions& options) {
	if(op.dim() > options.dense_cap)
		throw error("dimension " + std::to_string(op.dim()) + " above dense cap "
		            + std::to_string(options.dense_cap) + "; use eig_window");
	Spectrum s;
	s.complete       = true;
	Eigen::MatrixXd a = op.to_dense();
	Eigen::VectorXd w;
	dense_symmetric_eig(a, w);
	s.values.assign(w.data(), w.data() + w.size());
	s.vectors = std::move(a);
	compute_residuals(op, s);
	return s;
}

namespace {

struct RitzSet {
	std::vector<double>          values;     // signed eigenvalue estimates
	std::vector<Eigen::VectorXd> vectors;
	std::vector<double>          residuals;
};

// Rayleigh-Ritz of H over the span of `vecs` (orthonormalized internally);
// splits fold-degenerate clusters into signed eigenpairs.
RitzSet rayleigh_ritz(const SparseOperator& op, std::vector<Eigen::VectorXd> vecs) {
	RitzSet out;
	// orthonormalize (modified Gram-Schmidt, drop near-dependent vectors)
	std::vector<Eigen::VectorXd> q;
	for(auto& v : vecs) {
		for(const auto& u : q) v -= u.dot(v) * u;
		for(const auto& u : q) v -= u.dot(v) * u;
		const double nrm = v.norm();
		if(nrm > 1e-8) q.push_back(v / nrm);
	}
	if(q.empty()) return out;
	const int       m = static_cast<int>(q.size());
	Eigen::MatrixXd h(m, m);
	std::vector<Eigen::VectorXd> hq(m);
	for(int i = 0; i < m; ++i) hq[i] = op.apply(q[i]);
	for(int i = 0; i < m; ++i)
		for(int j = 0; j <= i; ++j) h(i, j) = h(j, i) = q[i].dot(hq[j]);
	Eigen::VectorXd w;
	dense_symmetric_eig(h, w);
	for(int k = 0; k < m; ++k) {
		Eigen::VectorXd y = Eigen::VectorXd::Zero(q[0].size());
		for(int i = 0; i < m; ++i) y += h(i, k) * q[i];
		y.normalize();
		const Eigen::VectorXd hy  = op.apply(y);
		const double          val = y.dot(hy);
		out.values.push_back(val);
		out.residuals.push_back((hy - val * y).norm());
		out.vectors.push_back(std::move(y));
	}
	return out;
}

}  // namespace

Spectrum eig_window(const SparseOperator& op, double center, std::size_t count,
                    const WindowOptions& options) {
	const std::size_t dim = op.dim();
	if(count < 1) throw error("eig_window: count must be >= 1");
	if(count >= dim || dim <= 128) {
		// small problem, or everything requested: dense path
		Spectrum s   = eig_dense(op, DenseOptions{.dense_cap = std::max<std::size_t>(dim, 1)});
		s.complete   = true;
		if(count < dim) {
			// keep the count nearest center, then sort ascending
			std::vector<std::size_t> idx(dim);
			std::iota(idx.begin(), idx.end(), 0);
			std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
				return std::abs(s.values[a] - center) < std::abs(s.values[b] - center);
			});
			idx.resize(count);
			std::sort(idx.begin(), idx.end(),
			          [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
			Spectrum t;
			t.complete = false;
			t.vectors.resize(s.vectors.rows(), static_cast<Eigen::Index>(count));
			for(std::size_t k = 0; k < count; ++k) {
				t.values.push_back(s.values[idx[k]]);
				t.residuals.push_back(s.residuals[idx[k]]);
				t.vectors.col(static_cast<Eigen::Index>(k)) = s.vectors.col(static_cast<Eigen::Index>(idx[k]));
			}
			return t;
		}
		return s;
	}

	const int m    = std::max(options.max_basis, static_cast<int>(4 * count) + 16);
	const int keep = std::min<int>(std::max<int>(options.keep, static_cast<int>(count) + 4), m / 2);

	// fold apply: w = (H - center)^2 v
	Eigen::VectorXd tmp(static_cast<Eigen::Index>(dim));
	auto            fold_apply = [&](const Eigen::VectorXd& v) {
        op.apply(v.data(), tmp.data());
        tmp -= center * v;
        Eigen::VectorXd w(v.size());
        op.apply(tmp.data(), w.data());
        w -= center * tmp;
        return w;
	};

	Eigen::MatrixXd basis(dim, m + 1);
	Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m, m);

	Eigen::VectorXd v0;
	if(options.seed) {
		if(static_cast<std::size_t>(options.seed->size()) != dim)
			throw error("eig_window: seed size mismatch");
		v0 = *options.seed;
	}
	else {
		std::mt19937_64                  rng(options.rng_seed);
		std::normal_distribution<double> nd;
		v0.resize(static_cast<Eigen::Index>(dim));
		for(Eigen::Index i = 0; i < v0.size(); ++i) v0[i] = nd(rng);
	}
	const double v0n = v0.norm();
	if(v0n == 0.0) throw error("eig_window: zero start vector");
	basis.col(0) = v0 / v0n;
	const bool capture_mode
	    = options.seed_capture > 0 && options.seed && !options.strict_nearest;
	const Eigen::VectorXd seed_copy = basis.col(0);

	int     nkept      = 0;  // leading block of tmat holding restarted Ritz data
	double  best_resid = std::numeric_limits<double>::infinity();
	RitzSet last_rs;
	bool    ran_out = false;
	for(int restart = 0; restart <= options.max_restarts; ++restart) {
		int    j         = nkept;
		double beta_last = 0.0;  // coupling of the final basis column to basis.col(m)
		bool   exhausted = false;
		// continue Lanczos from column nkept (coupled to the kept block via tmat)
		for(; j < m; ++j) {
			Eigen::VectorXd w = fold_apply(basis.col(j));
			if(j > nkept) w -= tmat(j, j - 1) * basis.col(j - 1);
			else if(nkept > 0)
				for(int i = 0; i < nkept; ++i) w -= tmat(i, nkept) * basis.col(i);
			const double alpha = basis.col(j).dot(w);
			tmat(j, j)         = alpha;
			w -= alpha * basis.col(j);
			// full reorthogonalization; repeat only if the first pass removed
			// a large component
			const double pre = w.norm();
			w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
			if(w.norm() < 0.7071 * pre)
				w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
			const double beta = w.norm();
			if(beta < 1e-10) {
				exhausted = true;
				++j;
				break;  // invariant subspace
			}
			basis.col(j + 1) = w / beta;
			if(j + 1 < m) tmat(j + 1, j) = tmat(j, j + 1) = beta;
			else beta_last = beta;
		}
		const int       mm = j;
		Eigen::MatrixXd tsub = tmat.topLeftCorner(mm, mm);
		Eigen::VectorXd theta;
		dense_symmetric_eig(tsub, theta);  // tsub now holds eigenvectors

		// candidate Ritz vectors for the smallest fold values
		const int ncand = std::min<int>(mm, std::max<int>(static_cast<int>(count) + 4, keep));
		std::vector<Eigen::VectorXd> cand;
		cand.reserve(ncand);
		for(int k = 0; k < ncand; ++k) cand.emplace_back(basis.leftCols(mm) * tsub.col(k));

		RitzSet rs = rayleigh_ritz(op, cand);
		// order by distance from center
		std::vector<std::size_t> idx(rs.values.size());
		std::iota(idx.begin(), idx.end(), 0);
		std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
			return std::abs(rs.values[a] - center) < std::abs(rs.values[b] - center);
		});
		std::vector<std::size_t> take;
		if(capture_mode) {
			// collect converged pairs until they carry the seed's weight
			std::vector<std::pair<double, std::size_t>> conv;
			double weight = 0;
			for(std::size_t k = 0; k < rs.values.size(); ++k)
				if(rs.residuals[k] <= options.tol) {
					const double ov = rs.vectors[k].dot(seed_copy);
					conv.emplace_back(ov * ov, k);
					weight += ov * ov;
				}
			if(!conv.empty() && weight >= options.seed_capture) {
				std::sort(conv.begin(), conv.end(), std::greater<>());
				for(std::size_t k = 0; k < conv.size() && take.size() < count; ++k)
					take.push_back(conv[k].second);
			}
		}
		else if(options.strict_nearest) {
			std::size_t converged = 0;
			for(std::size_t k = 0; k < idx.size() && converged < count; ++k) {
				if(rs.residuals[idx[k]] <= options.tol) ++converged;
				else break;
			}
			if(converged >= count) take.assign(idx.begin(), idx.begin() + count);
		}
		else {
			for(std::size_t k = 0; k < idx.size() && take.size() < count; ++k)
				if(rs.residuals[idx[k]] <= options.tol) take.push_back(idx[k]);
			if(take.size() < count) take.clear();
		}
		if(!rs.residuals.empty())
			best_resid = std::min(best_resid, rs.residuals[idx[0]]);
		if(options.trace) {
			double wsum = 0, rmin = std::numeric_limits<double>::infinity();
			for(std::size_t k = 0; k < rs.values.size(); ++k) {
				rmin = std::min(rmin, rs.residuals[k]);
				if(capture_mode && rs.residuals[k] <= options.tol) {
					const double ov = rs.vectors[k].dot(seed_copy);
					wsum += ov * ov;
				}
			}
			std::fprintf(stderr, "eig_window restart %d: E0=%.8f r0=%.2e rmin=%.2e capture=%.3f\n",
			             restart, rs.values.empty() ? 0.0 : rs.values[idx[0]],
			             rs.residuals.empty() ? 0.0 : rs.residuals[idx[0]], rmin, wsum);
		}
		if(!take.empty()) {
			Spectrum s;
			s.complete = false;
			std::sort(take.begin(), take.end(),
			          [&](std::size_t a, std::size_t b) { return rs.values[a] < rs.values[b]; });
			s.vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(take.size()));
			for(std::size_t k = 0; k < take.size(); ++k) {
				s.values.push_back(rs.values[take[k]]);
				s.residuals.push_back(rs.residuals[take[k]]);
				s.vectors.col(static_cast<Eigen::Index>(k)) = rs.vectors[take[k]];
			}
			return s;
		}
		if(exhausted || restart == options.max_restarts) {
			last_rs = std::move(rs);
			ran_out = true;
			break;
		}

		// thick restart: keep the lowest-fold Ritz pairs plus the residual direction
		Eigen::MatrixXd ynew(basis.rows(), keep + 1);
		for(int k = 0; k < keep; ++k) ynew.col(k) = basis.leftCols(mm) * tsub.col(k);
		ynew.col(keep) = basis.col(mm);
		tmat.setZero();
		for(int k = 0; k < keep; ++k) {
			tmat(k, k)    = theta[k];
			tmat(k, keep) = tmat(keep, k) = beta_last * tsub(mm - 1, k);
		}
		basis.leftCols(keep + 1) = ynew;
		nkept                    = keep;
	}
	if(!ran_out || !options.best_effort || last_rs.values.empty())
		throw error("eig_window: no convergence after " + std::to_string(options.max_restarts)
		            + " restarts; best residual " + std::to_string(best_resid));

	// best effort: hand back the current Ritz data, residuals included
	std::vector<std::size_t> order(last_rs.values.size());
	std::iota(order.begin(), order.end(), 0);
	if(capture_mode) {
		std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
			return std::abs(last_rs.vectors[a].dot(seed_copy))
			       > std::abs(last_rs.vectors[b].dot(seed_copy));
		});
	}
	else {
		std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
			return std::abs(last_rs.values[a] - center) < std::abs(last_rs.values[b] - center);
		});
	}
	order.resize(std::min<std::size_t>(count, order.size()));
	std::sort(order.begin(), order.end(),
	          [&](std::size_t a, std::size_t b) { return last_rs.values[a] < last_rs.values[b]; });
	Spectrum s;
	s.complete = false;
	s.vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(order.size()));
	for(std::size_t k = 0; k < order.size(); ++k) {
		s.values.push_back(last_rs.values[order[k]]);
		s.residuals.push_back(last_rs.residuals[order[k]]);
		s.vectors.col(static_cast<Eigen::Index>(k)) = last_rs.vectors[order[k]];
	}
	return s;
}

namespace {

// Crude spectral interval of H from a short plain Lanczos run, padded.
std::pair<double, double> spectral_bounds(const SparseOperator& op, std::uint64_t rng_seed) {
	const std::size_t dim = op.dim();
	const int         m   = std::min<std::size_t>(40, dim);
	std::mt19937_64   rng(rng_seed);
	std::normal_distribution<double> nd;
	Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
	for(Eigen::Index i = 0; i < v.size(); ++i) v[i] = nd(rng);
	v.normalize();
	Eigen::VectorXd vprev = Eigen::VectorXd::Zero(v.size());
	Eigen::MatrixXd t     = Eigen::MatrixXd::Zero(m, m);
	double          beta  = 0;
	for(int j = 0; j < m; ++j) {
		Eigen::VectorXd w = op.apply(v);
		if(j > 0) w -= beta * vprev;
		const double alpha = v.dot(w);
		t(j, j)            = alpha;
		w -= alpha * v;
		beta = w.norm();
		if(beta < 1e-12) {
			Eigen::MatrixXd tt = t.topLeftCorner(j + 1, j + 1);
			Eigen::VectorXd ww;
			dense_symmetric_eig(tt, ww);
			return {ww.minCoeff(), ww.maxCoeff()};
		}
		if(j + 1 < m) t(j + 1, j) = t(j, j + 1) = beta;
		vprev = v;
		v     = w / beta;
	}
	Eigen::VectorXd w_eig;
	dense_symmetric_eig(t, w_eig);
	const double lo = w_eig.minCoeff(), hi = w_eig.maxCoeff();
	const double pad = 0.05 * (hi - lo) + 2 * beta;
	return {lo - pad, hi + pad};
}

// One Chebyshev filter application on the spectral fold: amplifies
// |E - sigma| < w relative to the rest of [lo, hi]. Degree-d three-term
// recurrence, d fold applications.
Eigen::VectorXd cheb_filter(const SparseOperator& op, double sigma, double w, double rho2,
                            int degree, const Eigen::VectorXd& x) {
	const double w2 = w * w;
	const double half_span = 0.5 * (rho2 - w2);
	const double mid       = 0.5 * (rho2 + w2);
	Eigen::VectorXd tmp(x.size());
	auto            y_apply = [&](const Eigen::VectorXd& v) {
        op.apply(v.data(), tmp.data());
        tmp -= sigma * v;
        Eigen::VectorXd out(v.size());
        op.apply(tmp.data(), out.data());
        out -= sigma * tmp;           // out = (H - sigma)^2 v
        out = (out - mid * v) / half_span;
        return out;
	};
	Eigen::VectorXd t0 = x;
	Eigen::VectorXd t1 = y_apply(x);
	for(int k = 1; k < degree; ++k) {
		Eigen::VectorXd t2 = 2.0 * y_apply(t1) - t0;
		t0                 = std::move(t1);
		t1                 = std::move(t2);
	}
	return t1;
}

}  // namespace

Spectrum windowed_candidates(const SparseOperator& op, double energy_ref, std::size_t count,
                             WindowOptions options) {
	options.strict_nearest = false;
	if(!options.seed) {
		// loose probe to find something localized near the reference energy
		WindowOptions probe_opts = options;
		probe_opts.tol           = std::max(1e-4, options.tol);
		probe_opts.max_restarts  = std::min(options.max_restarts, 150);
		const Spectrum probe     = eig_window(op, energy_ref, 1, probe_opts);
		options.seed             = probe.vectors.col(0);
		energy_ref               = probe.values[0];
	}
	if(options.seed_capture <= 0) options.seed_capture = 0.75;
	const Eigen::VectorXd anchor = *options.seed / options.seed->norm();

	// loose pass: pull the dominant eigenstates out of the seed
	WindowOptions loose = options;
	loose.tol           = std::max(1e-4, options.tol);
	loose.best_effort   = true;
	loose.max_restarts  = std::clamp(options.max_restarts / 4, 20, 150);
	const Spectrum probe = eig_window(op, energy_ref, count, loose);
	std::vector<std::size_t> order(probe.size());
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		return std::abs(probe.vectors.col(static_cast<Eigen::Index>(a)).dot(anchor))
		       > std::abs(probe.vectors.col(static_cast<Eigen::Index>(b)).dot(anchor));
	});

	// refinement: Chebyshev filtering on the fold, re-centered on the running
	// Rayleigh quotient; converged vectors are deflated from later slots
	const auto [lo, hi] = spectral_bounds(op, options.rng_seed ^ 0x9e3779b97f4a7c15ull);
	std::vector<Eigen::VectorXd> accepted;
	std::vector<double>          values, residuals;
	const int                    degree = 900, max_apps = 200;
	for(std::size_t slot = 0; slot < order.size(); ++slot) {
		Eigen::VectorXd x = probe.vectors.col(static_cast<Eigen::Index>(order[slot]));
		for(const auto& v : accepted) x -= v.dot(x) * v;
		if(x.norm() < 1e-6) continue;
		x.normalize();
		double theta  = x.dot(op.apply(x));
		double resid  = (op.apply(x) - theta * x).norm();
		double window = 0.02;
		for(int app = 0; app < max_apps && resid > options.tol; ++app) {
			const double rho2 = std::max((hi - theta) * (hi - theta), (theta - lo) * (theta - lo));
			window            = std::max({window, 4 * options.tol, 1e-9});
			x                 = cheb_filter(op, theta, window, rho2, degree, x);
			for(const auto& v : accepted) x -= v.dot(x) * v;
			x.normalize();
			const Eigen::VectorXd hx = op.apply(x);
			theta                    = x.dot(hx);
			const double rnew        = (hx - theta * x).norm();
			if(rnew > 0.6 * resid) window *= 0.4;  // a neighbour sits inside the passband
			resid = rnew;
		}
		if(resid > options.tol) {
			if(slot == 0)
				throw error("windowed_candidates: residual " + std::to_string(resid)
				            + " above tolerance after filtering");
			break;  // secondary slots are best-effort
		}
		accepted.push_back(x);
		values.push_back(theta);
		residuals.push_back(resid);
	}

	std::vector<std::size_t> by_value(accepted.size());
	std::iota(by_value.begin(), by_value.end(), 0);
	std::sort(by_value.begin(), by_value.end(),
	          [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
	Spectrum s;
	s.complete = false;
	s.vectors.resize(static_cast<Eigen::Index>(op.dim()),
	                 static_cast<Eigen::Index>(accepted.size()));
	for(std::size_t k = 0; k < by_value.size(); ++k) {
		s.values.push_back(values[by_value[k]]);
		s.residuals.push_back(residuals[by_value[k]]);
		s.vectors.col(static_cast<Eigen::Index>(k)) = accepted[by_value[k]];
	}
	return s;
}

Eigen::VectorXcd evolve(const SparseOperator& hamiltonian, const Eigen::VectorXcd& state,
                        double dt, double tol, const EvolveOptions& options) {
	const std::size_t dim = hamiltonian.dim();
	if(static_cast<std::size_t>(state.size()) != dim) throw error("evolve: size mismatch");
	if(dt == 0.0) return state;
	const double direction = dt > 0 ? 1.0 : -1.0;
	double       remaining = std::abs(dt);
	const double total     = remaining;

	Eigen::VectorXcd cur = state;
	const int        mmax = options.max_krylov;
	Eigen::MatrixXcd basis(dim, mmax + 1);
	Eigen::VectorXd  alpha(mmax), beta(mmax);

	double tau = remaining;
	int    steps = 0;
	double err_budget_used = 0.0;
	while(remaining > 1e-15 * total) {
		if(++steps > options.max_substeps) throw error("evolve: substep limit exceeded");
		tau = std::min(tau, remaining);

		// Lanczos basis from the current state (coefficients are real since H is
		// real symmetric and phases factor out of the recurrence)
		const double nrm = cur.norm();
		basis.col(0)     = cur / nrm;
		int  m           = 0;
		bool happy       = false;
		for(; m < mmax; ++m) {
			Eigen::VectorXcd w = hamiltonian.apply(Eigen::VectorXcd(basis.col(m)));
			if(m > 0) w -= beta[m - 1] * basis.col(m - 1);
			alpha[m] = basis.col(m).dot(w).real();
			w -= alpha[m] * basis.col(m);
			// reorthogonalize
			w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).adjoint() * w);
			beta[m] = w.norm();
			if(beta[m] < 1e-13 * std::max(1.0, hamiltonian.max_abs())) {
				happy = true;
				++m;
				break;
			}
			basis.col(m + 1) = w / beta[m];
		}

		Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m, m);
		for(int i = 0; i < m; ++i) {
			tmat(i, i) = alpha[i];
			if(i + 1 < m) tmat(i + 1, i) = tmat(i, i + 1) = beta[i];
		}
		Eigen::VectorXd w_small;
		dense_symmetric_eig(tmat, w_small);  // tmat -> eigenvectors

		// try the step; halve tau until the local error estimate fits the budget
		const Eigen::MatrixXcd smat = tmat.cast<std::complex<double>>();
		for(;;) {
			Eigen::VectorXcd coeff(m);
			for(int i = 0; i < m; ++i)
				coeff[i] = std::exp(std::complex<double>(0.0, -direction * tau * w_small[i]))
				           * tmat(0, i);
			Eigen::VectorXcd u       = smat * coeff;
			const double     err_est = happy ? 0.0 : beta[m - 1] * std::abs(u[m - 1]);
			const double     budget  = tol * (tau / total);
			if(err_est <= budget) {
				u *= nrm;
				cur = basis.leftCols(m) * u;
				err_budget_used += err_est;
				remaining -= tau;
				if(err_est < 0.1 * budget) tau *= 1.8;  // room to grow
				break;
			}
			if(tau <= options.min_substep)
				throw error("evolve: tolerance unreachable at minimum substep");
			tau *= 0.5;
		}
	}
	return cur;
}

std::vector<int> resolve_degeneracy_by_symmetry(Spectrum& spectrum, const SparseOperator& symmetry,
                                                double cluster_tol) {
	std::vector<int> signs(spectrum.size(), 0);
	const double     scale = 1.0 + (spectrum.values.empty()
	                                    ? 0.0
	                                    : std::max(std::abs(spectrum.values.front()),
	                                               std::abs(spectrum.values.back())));
	std::size_t i = 0;
	while(i < spectrum.size()) {
		std::size_t j = i;
		while(j + 1 < spectrum.size()
		      && spectrum.values[j + 1] - spectrum.values[i] < cluster_tol * scale)
			++j;
		const int nb = static_cast<int>(j - i + 1);
		if(nb == 1) {
			const auto v = spectrum.vectors.col(static_cast<Eigen::Index>(i));
			signs[i]     = symmetry.apply(Eigen::VectorXd(v)).dot(v) > 0 ? 1 : -1;
		}
		else {
			Eigen::MatrixXd block(nb, nb);
			std::vector<Eigen::VectorXd> pv(nb);
			for(int a = 0; a < nb; ++a)
				pv[a] = symmetry.apply(
				    Eigen::VectorXd(spectrum.vectors.col(static_cast<Eigen::Index>(i + a))));
			for(int a = 0; a < nb; ++a)
				for(int b = 0; b <= a; ++b)
					block(a, b) = block(b, a)
					    = pv[a].dot(spectrum.vectors.col(static_cast<Eigen::Index>(i + b)));
			Eigen::VectorXd pw;
			dense_symmetric_eig(block, pw);
			Eigen::MatrixXd rotated = spectrum.vectors.middleCols(static_cast<Eigen::Index>(i), nb) * block;
			spectrum.vectors.middleCols(static_cast<Eigen::Index>(i), nb) = rotated;
			for(int a = 0; a < nb; ++a) signs[i + a] = pw[a] > 0 ? 1 : -1;
		}
		i = j + 1;
	}
	return signs;
}

}  // namespace biclab
