// Command-line front end: run | spectrum | sweep | shots.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zenopure/cli.hpp"

namespace
{

constexpr int exit_config = 1;
constexpr int exit_numeric = 2;

// The whole document is rendered before anything is written, so a failing
// command never leaves a partial file behind.
int emit(const std::string& text, const std::optional<std::string>& path)
{
	if(!path)
	{
		std::cout << text;
		return 0;
	}
	const std::string tmp = *path + ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		out << text;
		if(!out)
		{
			std::cerr << "error: cannot write '" << *path << "'\n";
			std::remove(tmp.c_str());
			return exit_numeric;
		}
	}
	if(std::rename(tmp.c_str(), path->c_str()) != 0)
	{
		std::cerr << "error: cannot write '" << *path << "'\n";
		std::remove(tmp.c_str());
		return exit_numeric;
	}
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Purification by repeated probe confirmation"};
	app.require_subcommand(1);

	std::string config_path;
	std::optional<std::string> out_path;
	std::optional<std::uint64_t> seed;
	std::optional<std::int64_t> shots;
	std::optional<int> steps;

	auto add_common = [&](CLI::App* cmd) {
		cmd->add_option("--config", config_path, "YAML configuration file")->required();
		cmd->add_option("--out", out_path, "output file (default: output.path, else stdout)");
		cmd->add_option("--seed", seed, "Monte Carlo seed");
		cmd->add_option("--shots", shots, "number of Monte Carlo shots")->check(CLI::PositiveNumber);
		cmd->add_option("--steps", steps, "number of measurement cycles")->check(CLI::NonNegativeNumber);
	};
	auto* run = app.add_subcommand("run", "fidelity and success probability per step");
	auto* spectrum = app.add_subcommand("spectrum", "eigen-analysis of the projected evolution operator");
	auto* sweep = app.add_subcommand("sweep", "dominant-eigenvalue diagnostics over a parameter grid");
	auto* mc = app.add_subcommand("shots", "Monte Carlo trajectories against the exact success probability");
	for(auto* cmd : {run, spectrum, sweep, mc})
	{
		add_common(cmd);
	}

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::ParseError& e)
	{
		const int code = app.exit(e);
		return code == 0 ? 0 : exit_config;
	}

	std::optional<zeno::cli::RunConfig> cfg;
	try
	{
		cfg = zeno::cli::load_config(config_path);
		if(steps)
		{
			cfg->n_steps = *steps;
			cfg->shots.n_steps = *steps;
		}
		if(seed)
		{
			cfg->shots.seed = *seed;
		}
		if(shots)
		{
			cfg->shots.shots = *shots;
		}
		if(app.get_subcommands().front() == sweep && !cfg->sweep)
		{
			throw zeno::cli::ConfigError("config: field 'sweep': missing section (needed by the sweep command)");
		}
	}
	catch(const zeno::Error& e)
	{
		std::cerr << "config error: " << e.what() << "\n";
		return exit_config;
	}

	std::string text;
	try
	{
		auto* cmd = app.get_subcommands().front();
		if(cmd == run)
		{
			text = zeno::cli::cmd_run(*cfg);
		}
		else if(cmd == spectrum)
		{
			text = zeno::cli::cmd_spectrum(*cfg);
		}
		else if(cmd == sweep)
		{
			text = zeno::cli::cmd_sweep(*cfg);
		}
		else
		{
			text = zeno::cli::cmd_shots(*cfg);
		}
	}
	catch(const zeno::ZeroProbability& e)
	{
		std::cerr << "numeric failure: ZeroProbability: " << e.what() << "\n";
		return exit_numeric;
	}
	catch(const std::exception& e)
	{
		std::cerr << "numeric failure: " << e.what() << "\n";
		return exit_numeric;
	}
	return emit(text, out_path ? out_path : cfg->output_path);
}
