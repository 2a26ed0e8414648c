#include "runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace biclab::cli {

namespace {

std::string trim(const std::string& s) {
	std::size_t a = 0, b = s.size();
	while(a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
	while(b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
	return s.substr(a, b - a);
}

std::string lower(std::string s) {
	std::transform(s.begin(), s.end(), s.begin(),
	               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	return s;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
	std::ifstream in(path);
	if(!in) throw error("cannot open config file '" + path + "'");
	std::stringstream ss;
	ss << in.rdbuf();
	return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
	RunConfig          cfg;
	std::istringstream in(text);
	std::string        line, section;
	int                lineno = 0;
	while(std::getline(in, line)) {
		++lineno;
		const auto hash = line.find('#');
		if(hash != std::string::npos) line = line.substr(0, hash);
		line = trim(line);
		if(line.empty()) continue;
		if(line.front() == '[') {
			if(line.back() != ']') throw error("config line " + std::to_string(lineno) + ": bad section");
			section = lower(trim(line.substr(1, line.size() - 2)));
			continue;
		}
		const auto eq = line.find('=');
		if(eq == std::string::npos)
			throw error("config line " + std::to_string(lineno) + ": expected key = value");
		const std::string key = lower(trim(line.substr(0, eq)));
		const std::string val = trim(line.substr(eq + 1));
		if(section.empty()) throw error("config line " + std::to_string(lineno) + ": key outside section");
		cfg.entries_[section + "." + key] = val;
	}
	return cfg;
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
	if(dotted_key.find('.') == std::string::npos)
		throw error("override key must be section.key, got '" + dotted_key + "'");
	entries_[lower(dotted_key)] = value;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
	return entries_.count(section + "." + key) > 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
	const auto it = entries_.find(section + "." + key);
	if(it == entries_.end()) throw error("missing config key " + section + "." + key);
	return it->second;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
	return has(section, key) ? get_string(section, key) : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
	const std::string v = get_string(section, key);
	try {
		std::size_t pos = 0;
		double      d   = std::stod(v, &pos);
		if(pos != v.size()) throw std::invalid_argument(v);
		return d;
	} catch(const std::exception&) {
		throw error("config key " + section + "." + key + ": '" + v + "' is not a number");
	}
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
	return has(section, key) ? get_double(section, key) : fallback;
}

long RunConfig::get_int(const std::string& section, const std::string& key) const {
	const std::string v = get_string(section, key);
	try {
		std::size_t pos = 0;
		long        d   = std::stol(v, &pos);
		if(pos != v.size()) throw std::invalid_argument(v);
		return d;
	} catch(const std::exception&) {
		throw error("config key " + section + "." + key + ": '" + v + "' is not an integer");
	}
}

long RunConfig::get_int(const std::string& section, const std::string& key, long fallback) const {
	return has(section, key) ? get_int(section, key) : fallback;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
	if(!has(section, key)) return fallback;
	const std::string v = lower(get_string(section, key));
	if(v == "true" || v == "1" || v == "yes" || v == "on") return true;
	if(v == "false" || v == "0" || v == "no" || v == "off") return false;
	throw error("config key " + section + "." + key + ": '" + v + "' is not a boolean");
}

std::vector<long> RunConfig::get_int_list(const std::string& section, const std::string& key) const {
	const std::string  v = get_string(section, key);
	std::vector<long>  out;
	std::istringstream ss(v);
	std::string        item;
	while(std::getline(ss, item, ',')) {
		item = trim(item);
		if(item.empty()) continue;
		try {
			out.push_back(std::stol(item));
		} catch(const std::exception&) {
			throw error("config key " + section + "." + key + ": '" + item + "' is not an integer");
		}
	}
	if(out.empty()) throw error("config key " + section + "." + key + ": empty list");
	return out;
}

std::vector<long> RunConfig::get_int_list(const std::string& section, const std::string& key,
                                          const std::vector<long>& fallback) const {
	return has(section, key) ? get_int_list(section, key) : fallback;
}

std::string RunConfig::echo() const {
	std::string out;
	for(const auto& [k, v] : entries_) {  // std::map iterates sorted
		if(!out.empty()) out += " ";
		out += k + "=" + v;
	}
	return out;
}

LatticeSpec RunConfig::lattice() const {
	LatticeSpec spec;
	spec.half_length = static_cast<int>(get_int("lattice", "l"));
	if(spec.half_length < 1) throw error("lattice.L must be >= 1");
	const std::string b = get_string("lattice", "boundary", "periodic");
	if(b == "periodic") spec.boundary = Boundary::Periodic;
	else if(b == "open") spec.boundary = Boundary::Open;
	else throw error("lattice.boundary must be periodic or open");
	return spec;
}

ModelParams RunConfig::params() const {
	ModelParams p;
	p.t = get_double("params", "t", 1.0);
	p.U = get_double("params", "u");
	p.V = get_double("params", "v");
	return p;
}

}  // namespace biclab::cli
