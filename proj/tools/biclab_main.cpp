#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
	CLI::App app{"biclab - exact diagonalization and effective-model toolkit for the "
	             "Bose-Hubbard impurity chain"};
	app.require_subcommand(1);

	std::string              config_path, out_path;
	std::vector<std::string> overrides;
	std::string              command;
	for(const char* name : {"spectrum", "sweep", "classify", "effective", "quench"}) {
		CLI::App* sub = app.add_subcommand(name);
		sub->add_option("--config", config_path, "run manifest (key = value sections)")->required();
		sub->add_option("--set", overrides, "override: section.key=value")->take_all();
		sub->add_option("--out", out_path, "output file (stdout when omitted)");
		sub->callback([&command, name] { command = name; });
	}

	CLI11_PARSE(app, argc, argv);

	try {
		biclab::cli::RunConfig cfg = biclab::cli::RunConfig::from_file(config_path);
		for(const std::string& kv : overrides) {
			const auto eq = kv.find('=');
			if(eq == std::string::npos)
				throw biclab::error("--set expects section.key=value, got '" + kv + "'");
			cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
		}
		const std::string text = biclab::cli::run_command(command, cfg);
		if(out_path.empty()) std::cout << text;
		else {
			std::ofstream out(out_path, std::ios::binary);
			if(!out) throw biclab::error("cannot open output file '" + out_path + "'");
			out << text;
		}
		return 0;
	} catch(const std::exception& e) {
		nlohmann::json err;
		err["error"]   = e.what();
		err["command"] = command;
		std::cerr << err.dump() << "\n";
		return 1;
	}
}
