#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biclab/types.hpp"

namespace biclab::cli {

// Declarative run manifest: "[section]" headers with "key = value" lines,
// '#' comments. CLI --set section.key=value overrides win.
class RunConfig {
  public:
	static RunConfig from_file(const std::string& path);
	static RunConfig from_string(const std::string& text);

	void set(const std::string& dotted_key, const std::string& value);  // "section.key"

	bool                       has(const std::string& section, const std::string& key) const;
	std::string                get_string(const std::string& section, const std::string& key) const;
	std::string                get_string(const std::string& section, const std::string& key,
	                                      const std::string& fallback) const;
	double                     get_double(const std::string& section, const std::string& key) const;
	double                     get_double(const std::string& section, const std::string& key,
	                                      double fallback) const;
	long                       get_int(const std::string& section, const std::string& key) const;
	long                       get_int(const std::string& section, const std::string& key,
	                                   long fallback) const;
	bool                       get_bool(const std::string& section, const std::string& key,
	                                    bool fallback) const;
	std::vector<long>          get_int_list(const std::string& section, const std::string& key) const;
	std::vector<long>          get_int_list(const std::string& section, const std::string& key,
	                                        const std::vector<long>& fallback) const;

	// canonical single-line echo: sorted "section.key=value" entries
	std::string echo() const;
	const std::map<std::string, std::string>& entries() const { return entries_; }

	// common typed blocks
	LatticeSpec lattice() const;
	ModelParams params() const;

  private:
	std::map<std::string, std::string> entries_;  // "section.key" -> value
};

}  // namespace biclab::cli
