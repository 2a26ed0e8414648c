#include "commands.hpp"

#include <fstream>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "biclab/classify.hpp"
#include "biclab/effective.hpp"
#include "biclab/quench.hpp"

namespace biclab::cli {

using nlohmann::json;

std::string format_number(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

namespace {

std::string csv_header(const std::string& command, const RunConfig& cfg) {
	std::string h;
	h += std::string("# biclab ") + kVersion + "\n";
	h += "# command: " + command + "\n";
	h += "# config: " + cfg.echo() + "\n";
	return h;
}

json json_header(const std::string& command, const RunConfig& cfg) {
	json j;
	j["version"] = kVersion;
	j["command"] = command;
	json c       = json::object();
	for(const auto& [k, v] : cfg.entries()) c[k] = v;
	j["config"] = c;
	return j;
}

Parity parse_parity(const std::string& s) {
	if(s == "even") return Parity::Even;
	if(s == "odd") return Parity::Odd;
	if(s == "none") return Parity::None;
	throw error("parity must be even, odd, none or both; got '" + s + "'");
}

struct LabeledState {
	double energy;
	double width;
	int    parity_sign;
	double residual;
};

// Dense spectrum with parity labels and widths, solved block by block.
std::vector<LabeledState> labeled_dense_spectrum(const LatticeSpec& lattice,
                                                 const ModelParams& params, int particles,
                                                 std::size_t dense_cap) {
	auto                      basis = std::make_shared<SectorBasis>(lattice, particles);
	std::vector<LabeledState> rows;
	for(Parity p : {Parity::Even, Parity::Odd}) {
		ParityBasis          pb(basis, p);
		const SparseOperator h    = build_full_hamiltonian(params, pb);
		const Spectrum       spec = eig_dense(h, DenseOptions{.dense_cap = dense_cap});
		for(std::size_t k = 0; k < spec.size(); ++k) {
			const double w = width(
			    density(Eigen::VectorXd(spec.vectors.col(static_cast<Eigen::Index>(k))), pb));
			rows.push_back({spec.values[k], w, p == Parity::Even ? 1 : -1, spec.residuals[k]});
		}
	}
	std::sort(rows.begin(), rows.end(), [](const LabeledState& a, const LabeledState& b) {
		if(a.energy != b.energy) return a.energy < b.energy;
		return a.parity_sign > b.parity_sign;
	});
	return rows;
}

std::vector<double> grid_values(double from, double to, double step) {
	if(step == 0) throw error("grid step must be nonzero");
	if((to - from) * step < 0) throw error("grid step runs away from the endpoint");
	std::vector<double> vals;
	const std::size_t   n = static_cast<std::size_t>((to - from) / step + 1e-9) + 1;
	if(n == 0 || n > 100000) throw error("grid has unreasonable size");
	for(std::size_t i = 0; i < n; ++i) vals.push_back(from + static_cast<double>(i) * step);
	return vals;
}

}  // namespace

std::string cmd_spectrum(const RunConfig& cfg) {
	const LatticeSpec lattice = cfg.lattice();
	const ModelParams params  = cfg.params();
	const int         n       = static_cast<int>(cfg.get_int("sector", "n"));
	const std::size_t cap     = static_cast<std::size_t>(cfg.get_int("solver", "dense_cap", 12000));
	const std::string parity  = cfg.get_string("sector", "parity", "both");

	if(cfg.has("output", "dump_operator")) {
		// coordinate-format dump of the assembled Hamiltonian (full basis)
		const std::string path = cfg.get_string("output", "dump_operator");
		std::ofstream     dump(path, std::ios::binary);
		if(!dump) throw error("cannot open operator dump file '" + path + "'");
		SectorBasis basis(lattice, n);
		build_full_hamiltonian(params, basis).write_coordinate_file(dump);
	}

	std::ostringstream os;
	os << csv_header("spectrum", cfg);
	os << "index,energy,width,parity,residual\n";
	if(parity == "both") {
		const auto rows = labeled_dense_spectrum(lattice, params, n, cap);
		for(std::size_t k = 0; k < rows.size(); ++k)
			os << k << "," << format_number(rows[k].energy) << "," << format_number(rows[k].width)
			   << "," << rows[k].parity_sign << "," << format_number(rows[k].residual) << "\n";
	}
	else {
		auto basis = std::make_shared<SectorBasis>(lattice, n);
		const Parity p = parse_parity(parity);
		if(p == Parity::None) {
			const SparseOperator h    = build_full_hamiltonian(params, *basis);
			Spectrum             spec = eig_dense(h, DenseOptions{.dense_cap = cap});
			const auto signs = resolve_degeneracy_by_symmetry(spec, build_parity_matrix(*basis));
			for(std::size_t k = 0; k < spec.size(); ++k) {
				const double w = width(density(
				    Eigen::VectorXd(spec.vectors.col(static_cast<Eigen::Index>(k))), *basis));
				os << k << "," << format_number(spec.values[k]) << "," << format_number(w) << ","
				   << signs[k] << "," << format_number(spec.residuals[k]) << "\n";
			}
		}
		else {
			ParityBasis          pb(basis, p);
			const SparseOperator h    = build_full_hamiltonian(params, pb);
			const Spectrum       spec = eig_dense(h, DenseOptions{.dense_cap = cap});
			for(std::size_t k = 0; k < spec.size(); ++k) {
				const double w = width(density(
				    Eigen::VectorXd(spec.vectors.col(static_cast<Eigen::Index>(k))), pb));
				os << k << "," << format_number(spec.values[k]) << "," << format_number(w) << ","
				   << (p == Parity::Even ? 1 : -1) << "," << format_number(spec.residuals[k]) << "\n";
			}
		}
	}
	return os.str();
}

std::string cmd_sweep(const RunConfig& cfg) {
	const LatticeSpec lattice = cfg.lattice();
	ModelParams       params  = cfg.params();
	const int         n       = static_cast<int>(cfg.get_int("sector", "n"));
	const std::size_t cap     = static_cast<std::size_t>(cfg.get_int("solver", "dense_cap", 12000));
	const std::string which   = cfg.get_string("sweep", "param", "u");
	if(which != "u" && which != "v") throw error("sweep.param must be U or V");
	const auto grid = grid_values(cfg.get_double("sweep", "from"), cfg.get_double("sweep", "to"),
	                              cfg.get_double("sweep", "step"));

	std::ostringstream os;
	os << csv_header("sweep", cfg);
	os << which << ",energy,width,parity\n";
	for(double g : grid) {
		ModelParams p = params;
		(which == "u" ? p.U : p.V) = g;
		std::vector<LabeledState> rows;
		try {
			rows = labeled_dense_spectrum(lattice, p, n, cap);
		} catch(const std::exception& e) {
			throw error("sweep failed at " + which + " = " + format_number(g) + ": " + e.what());
		}
		for(const auto& r : rows)
			os << format_number(g) << "," << format_number(r.energy) << ","
			   << format_number(r.width) << "," << r.parity_sign << "\n";
	}
	return os.str();
}

std::string cmd_classify(const RunConfig& cfg) {
	const LatticeSpec base_lattice = cfg.lattice();
	const ModelParams params       = cfg.params();
	const int         n            = static_cast<int>(cfg.get_int("sector", "n"));
	const double      e_ref        = cfg.get_double("classify", "e_ref");
	const double      window       = cfg.get_double("classify", "window", 0.5);
	const auto        l_list       = cfg.get_int_list("classify", "l_list");
	const std::size_t count        = static_cast<std::size_t>(cfg.get_int("classify", "count", 1));
	const std::string parity_str   = cfg.get_string("classify", "parity", "both");
	const std::string seed_kind    = cfg.get_string("classify", "seed", "effective");
	const double      wtol         = cfg.get_double("solver", "window_tol", 3e-7);
	const std::size_t dense_below  = static_cast<std::size_t>(cfg.get_int("classify", "dense_below", 1200));

	ClassifyOptions copts;
	copts.r0  = static_cast<int>(cfg.get_int("classify", "r0", 3));
	copts.eps = cfg.get_double("classify", "eps", 0.20);
	if(l_list.size() < 3) throw error("classify.L_list needs at least 3 sizes");

	std::vector<Parity> parities;
	if(parity_str == "both") parities = {Parity::Even, Parity::Odd};
	else parities = {parse_parity(parity_str)};

	json out        = json_header("classify", cfg);
	out["candidates"] = json::array();
	for(Parity parity : parities) {
		json cand;
		cand["parity"] = to_string(parity);
		cand["e_ref"]  = e_ref;
		json matches   = json::array();
		json profiles  = json::array();
		std::vector<SizedSpectrum> spectra;
		std::vector<TailProfile>   tails;
		std::string                failure;
		try {
			for(long l_val : l_list) {
				LatticeSpec lat = base_lattice;
				lat.half_length = static_cast<int>(l_val);
				auto basis      = std::make_shared<SectorBasis>(lat, n);
				auto pbasis     = std::make_shared<ParityBasis>(basis, parity);
				const SparseOperator h = build_full_hamiltonian(params, *pbasis);
				Spectrum             spec;
				if(pbasis->dim() <= dense_below) spec = eig_dense(h);
				else {
					WindowOptions wopts;
					wopts.tol          = wtol;
					wopts.max_basis    = static_cast<int>(cfg.get_int("solver", "max_basis", 64));
					wopts.keep         = static_cast<int>(cfg.get_int("solver", "keep", 16));
					wopts.max_restarts = static_cast<int>(cfg.get_int("solver", "max_restarts", 6000));
					if(seed_kind == "effective" && n == 4) {
						const EffectiveBasis eb(lat.half_length);
						const Eigen::VectorXd psi = assemble_bound_state(
						    Branch::B1, parity == Parity::Even ? 1 : -1, params, eb);
						wopts.seed = pbasis->project(eb.embed(psi, ClusterSector::APair, *basis));
					}
					spec = windowed_candidates(h, e_ref, count, wopts);
				}
				spectra.push_back({static_cast<int>(l_val), pbasis, std::move(spec)});
			}
			const auto ms = match_candidate_across_sizes(spectra, e_ref, window);
			for(std::size_t i = 0; i < ms.size(); ++i) {
				const auto&           m   = ms[i];
				const SizedSpectrum&  s   = spectra[i];
				const Eigen::VectorXd vec = s.spectrum.vectors.col(static_cast<Eigen::Index>(m.spectrum_index));
				matches.push_back({{"l", m.L},
				                   {"energy", m.energy},
				                   {"width", m.width},
				                   {"residual", s.spectrum.residuals[m.spectrum_index]}});
				const TailProfile tp = tail_profile(density(vec, *s.basis), m.energy, parity);
				profiles.push_back({{"l", tp.half_length}, {"tail", tp.tail}});
				tails.push_back(tp);
			}
		} catch(const std::exception& e) {
			failure = e.what();
		}
		cand["matches"]  = matches;
		cand["profiles"] = profiles;
		if(!failure.empty()) {
			cand["error"]   = failure;
			cand["verdict"] = "Error";
		}
		else {
			const Classification c = classify_candidate(tails, copts);
			cand["verdict"]        = to_string(c.verdict);
			if(c.decay_rate) cand["decay_rate"] = *c.decay_rate;
			else cand["decay_rate"] = nullptr;
			json steps = json::array();
			for(const auto& s : c.evidence)
				steps.push_back(
				    {{"l_from", s.L_small}, {"l_to", s.L_large}, {"r", s.r}, {"ratio", s.ratio}});
			cand["steps"] = steps;
			json trends   = json::array();
			for(const auto& [r, t] : c.trends)
				trends.push_back({{"r", r},
				                  {"trend", t == Trend::NonIncreasing ? "nonincreasing"
				                            : t == Trend::Increasing  ? "increasing"
				                                                      : "mixed"}});
			cand["trends"] = trends;
			cand["thresholds"] = {{"r0", copts.r0}, {"eps", copts.eps}};
		}
		out["candidates"].push_back(cand);
	}
	return out.dump(2) + "\n";
}

std::string cmd_effective(const RunConfig& cfg) {
	const ModelParams params0 = cfg.params();
	const int         l_eff   = static_cast<int>(cfg.get_int("effective", "l", 16));
	const std::string sector  = cfg.get_string("effective", "sector", "a");
	const int         order   = static_cast<int>(cfg.get_int("effective", "order", 2));
	const bool        with_const = cfg.get_bool("effective", "include_constant", true);
	const auto grid = grid_values(cfg.get_double("effective", "from", params0.U),
	                              cfg.get_double("effective", "to", params0.U),
	                              cfg.get_double("effective", "step", 1.0));

	std::ostringstream os;
	os << csv_header("effective", cfg);
	os << "u,e_b1,b1_exists,e_b2,b2_exists,e_secondary,secondary_exists,model_index,model_energy\n";
	for(double u : grid) {
		ModelParams p = params0;
		p.U           = u;
		std::string closed;
		{
			std::ostringstream cs;
			try {
				const auto b1 = bound_state_energy(Branch::B1, p);
				const auto b2 = bound_state_energy(Branch::B2, p);
				const auto b3 = bound_state_energy(Branch::Secondary, p);
				cs << format_number(b1.energy) << "," << (b1.exists ? 1 : 0) << ","
				   << format_number(b2.energy) << "," << (b2.exists ? 1 : 0) << ","
				   << format_number(b3.energy) << "," << (b3.exists ? 1 : 0);
			} catch(const std::exception&) {
				cs << "nan,0,nan,0,nan,0";  // closed forms undefined at this point
			}
			closed = cs.str();
		}
		try {
			SparseOperator model;
			if(sector == "a") model = build_h022(p, l_eff, with_const);
			else if(sector == "b") model = build_h211(p, l_eff, order, with_const);
			else if(sector == "combined") model = build_combined(p, l_eff);
			else throw error("effective.sector must be a, b or combined");
			const Spectrum spec = eig_dense(model);
			for(std::size_t k = 0; k < spec.size(); ++k)
				os << format_number(u) << "," << closed << "," << k << ","
				   << format_number(spec.values[k]) << "\n";
		} catch(const error& e) {
			// flagged per point, the sweep continues
			os << format_number(u) << "," << closed << ",-1,nan\n";
		}
	}
	return os.str();
}

std::string cmd_quench(const RunConfig& cfg) {
	QuenchScenario sc;
	sc.lattice = cfg.lattice();
	sc.params  = cfg.params();
	sc.initial = parse_initial_state(cfg.get_string("quench", "initial", "n4_1122"));
	if(sc.initial == InitialState::Custom) {
		const auto occs = cfg.get_int_list("quench", "fock");
		sc.custom_fock.assign(occs.size(), 0);
		for(std::size_t i = 0; i < occs.size(); ++i)
			sc.custom_fock[i] = static_cast<occupation_t>(occs[i]);
		sc.symmetrize = cfg.get_bool("quench", "symmetrize", true);
	}
	sc.t_max      = cfg.get_double("quench", "t_max", 400.0);
	sc.samples    = static_cast<std::size_t>(cfg.get_int("quench", "samples", 801));
	sc.tail_start = cfg.get_double("quench", "tail_start", sc.t_max / 2);
	sc.mc_half_window = cfg.get_double("quench", "mc_delta", 0.5);
	sc.evolve_tol = cfg.get_double("quench", "tol", 1e-9);
	sc.dense_cap  = static_cast<std::size_t>(cfg.get_int("solver", "dense_cap", 12000));
	{
		std::vector<long> sites = cfg.get_int_list("quench", "sites", {0, 1, 2});
		sc.sites.clear();
		for(long s : sites) sc.sites.push_back(static_cast<int>(s));
	}
	const std::string ens = cfg.get_string("quench", "ensembles", "auto");
	if(ens == "on") sc.with_ensembles = true;
	else if(ens == "off") sc.with_ensembles = false;
	else {
		const SectorBasis probe(sc.lattice, sc.initial == InitialState::N4_1122 ? 4 : 6);
		sc.with_ensembles = probe.dim() <= sc.dense_cap;
	}

	const QuenchResult r = run_quench(sc);

	json out           = json_header("quench", cfg);
	out["energy"]      = r.energy;
	out["energy_drift"] = r.energy_drift;
	out["norm_drift"]  = r.norm_drift;
	out["parity_drift"] = r.parity_drift;
	out["times"]       = r.times;
	json series        = json::object();
	for(const auto& [site, vals] : r.series) series[std::to_string(site)] = vals;
	out["series"] = series;
	json lta      = json::object();
	for(const auto& [site, v] : r.long_time_avg) lta[std::to_string(site)] = v;
	out["long_time_avg"] = lta;
	if(!r.microcanonical.empty()) {
		json mc = json::object(), de = json::object();
		for(const auto& [site, v] : r.microcanonical) mc[std::to_string(site)] = v;
		for(const auto& [site, v] : r.diagonal) de[std::to_string(site)] = v;
		out["microcanonical"]    = mc;
		out["diagonal_ensemble"] = de;
	}
	else {
		out["microcanonical"]    = nullptr;
		out["diagonal_ensemble"] = nullptr;
	}
	json overlaps = json::array();
	for(const auto& o : r.overlaps)
		overlaps.push_back({{"energy", o.energy},
		                    {"weight", o.weight},
		                    {"width", o.width},
		                    {"parity", o.parity_sign}});
	out["overlaps"] = overlaps;
	// dominant oscillation frequency over the tail window, per site
	json freqs = json::object();
	for(const auto& [site, vals] : r.series) {
		std::vector<double> tail;
		for(std::size_t k = 0; k < vals.size(); ++k)
			if(r.times[k] >= sc.tail_start) tail.push_back(vals[k]);
		if(tail.size() >= 8) {
			const double dt = r.times[1] - r.times[0];
			freqs[std::to_string(site)] = dominant_frequency(tail, dt);
		}
	}
	out["tail_frequency"] = freqs;
	return out.dump(2) + "\n";
}

std::string run_command(const std::string& command, const RunConfig& cfg) {
	if(command == "spectrum") return cmd_spectrum(cfg);
	if(command == "sweep") return cmd_sweep(cfg);
	if(command == "classify") return cmd_classify(cfg);
	if(command == "effective") return cmd_effective(cfg);
	if(command == "quench") return cmd_quench(cfg);
	throw error("unknown command '" + command
	            + "'; expected spectrum, sweep, classify, effective or quench");
}

}  // namespace biclab::cli
