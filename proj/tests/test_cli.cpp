#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ranges>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "zenopure/cli.hpp"

using namespace zeno;
using namespace zeno::cli;
namespace fs = std::filesystem;

namespace
{

const std::string paper_system = R"(
system:
  kind: model3q
  units: omega
  omega: 1.0
  g: 0.25
  tau: 2pi
  alpha: 0.7071067811865476
  beta: 0.7071067811865476
)";

std::string with_system(const std::string& sys, const std::string& rest)
{
	return sys + rest;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
	std::vector<std::vector<std::string>> rows;
	std::istringstream in(text);
	std::string line;
	while(std::getline(in, line))
	{
		std::vector<std::string> cells;
		std::string cell;
		std::istringstream ls(line);
		while(std::getline(ls, cell, ','))
		{
			cells.push_back(cell);
		}
		if(!line.empty() && line.back() == ',')
		{
			cells.emplace_back();
		}
		rows.push_back(cells);
	}
	return rows;
}

std::string config_error(const std::string& text)
{
	try
	{
		parse_config(text);
	}
	catch(const ConfigError& e)
	{
		return e.what();
	}
	return "";
}

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

fs::path scratch_dir()
{
	const auto dir = fs::temp_directory_path() / "zenopure_cli_test";
	fs::create_directories(dir);
	return dir;
}

int run_tool(const std::string& args)
{
	const std::string cmd = std::string(ZENOPURE_CLI_PATH) + " " + args + " 2>/dev/null";
	const int status = std::system(cmd.c_str());
	return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("format_real uses 12 significant digits with ties to even")
{
	CHECK(format_real(0.5) == "0.5");
	CHECK(format_real(1.0) == "1");
	CHECK(format_real(-0.0) == "0");
	CHECK(format_real(1.0 / 3.0) == "0.333333333333");
	CHECK(format_real(2.0 / 3.0) == "0.666666666667");
	CHECK(format_real(1234567890125.0) == "1.23456789012e+12");
	CHECK(format_real(1234567890135.0) == "1.23456789014e+12");
}

TEST_CASE("presets and units are resolved at load")
{
	const auto cfg = parse_config(with_system(paper_system, "initial_state: paper-product\ntarget: psi-minus\n"));
	REQUIRE(cfg.is_model3q());
	const auto& p = std::get<Model3qSystem>(cfg.system).params;
	CHECK(p.tau == doctest::Approx(2.0 * std::numbers::pi));
	CHECK(p.g == doctest::Approx(0.25));
	CHECK(cfg.n_steps == 10);
	REQUIRE(cfg.target);
	CHECK(cfg.target->size() == 4);

	const auto scaled = parse_config(R"(
system:
  kind: model3q
  units: omega
  omega: 2.0
  g: 0.25
  tau: 2pi
  probe_angle: pi/4
initial_state: paper-mixed
)");
	const auto& q = std::get<Model3qSystem>(scaled.system).params;
	CHECK(q.g == doctest::Approx(0.5));
	CHECK(q.tau == doctest::Approx(std::numbers::pi));
	CHECK(std::abs(q.alpha - 1.0 / std::numbers::sqrt2) < 1e-15);
}

TEST_CASE("config errors name the offending field")
{
	CHECK(config_error(with_system(paper_system, "initial_state: nonsense\n")).find("'initial_state'") !=
	      std::string::npos);
	CHECK(config_error(with_system(paper_system, "initial_state: paper-product\nn_steps: -2\n")).find("'n_steps'") !=
	      std::string::npos);
	CHECK(config_error(with_system(paper_system, "initial_state: paper-product\nbogus: 1\n")).find("'bogus'") !=
	      std::string::npos);
	CHECK(config_error("system:\n  kind: model3q\n  g: 0.1\n  tau: 1\n  alpha: 1\n  beta: 1\ninitial_state: "
	                   "paper-product\n")
	          .find("'system.alpha'") != std::string::npos);
	CHECK(config_error("system:\n  kind: model3q\n  g: abc\n  tau: 1\n  alpha: 1\n  beta: 0\n")
	          .find("'system.g'") != std::string::npos);
	CHECK(config_error(with_system(paper_system,
	                               "initial_state: paper-product\nsweep:\n  axis: g\n  from: 0\n  to: 1\n  count: 1\n"))
	          .find("'sweep.count'") != std::string::npos);
	CHECK(config_error("system: [1, 2\n").find("config:") != std::string::npos);

	const std::string non_hermitian = R"(
system:
  kind: custom
  factors: [2, 1]
  tau: 1
  hamiltonian: [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]
  probe: [[1, 0], [0, 0]]
initial_state: [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
)";
	const auto msg = config_error(non_hermitian);
	CHECK(msg.find("'system.hamiltonian'") != std::string::npos);
	CHECK(msg.find("config:6:") != std::string::npos);
}

TEST_CASE("cmd_run writes the fidelity and success-probability table")
{
	const auto cfg = parse_config(with_system(paper_system, "initial_state: paper-product\ntarget: psi-minus\n"));
	const auto text = cmd_run(cfg);
	const auto rows = parse_csv(text);
	REQUIRE(rows.size() == 12);
	CHECK(text.rfind("n,fidelity,success_probability\n", 0) == 0);
	CHECK(rows[11][0] == "10");
	CHECK(std::stod(rows[11][1]) >= 0.9999);
	CHECK(std::abs(std::stod(rows[11][2]) - 0.5) <= 1e-3);
	CHECK(text.find('\r') == std::string::npos);

	auto zero = cfg;
	zero.n_steps = 0;
	const auto single = parse_csv(cmd_run(zero));
	REQUIRE(single.size() == 2);
	CHECK(single[1][1] == "0.5");

	auto json_cfg = cfg;
	json_cfg.format = Format::json;
	const auto doc = nlohmann::json::parse(cmd_run(json_cfg));
	CHECK(doc["rows"].size() == 11);
	CHECK(doc["rows"][10]["fidelity"].get<double>() == doctest::Approx(std::stod(rows[11][1])));
}

TEST_CASE("cmd_run fidelity columns agree for the product and mixed presets")
{
	const auto product = parse_csv(
		cmd_run(parse_config(with_system(paper_system, "initial_state: paper-product\ntarget: psi-minus\n"))));
	const auto mixed =
		parse_csv(cmd_run(parse_config(with_system(paper_system, "initial_state: paper-mixed\ntarget: psi-minus\n"))));
	REQUIRE(product.size() == mixed.size());
	for(std::size_t i = 2; i < product.size(); ++i)
	{
		CHECK(std::abs(std::stod(product[i][1]) - std::stod(mixed[i][1])) <= 1e-9);
	}
}

TEST_CASE("cmd_run reports a vanishing zeroth confirmation")
{
	const auto cfg = parse_config(R"(
system:
  kind: model3q
  g: 0.25
  tau: 6.283185307179586
  alpha: 1
  beta: 0
initial_state: [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]
)");
	CHECK_THROWS_AS(cmd_run(cfg), ZeroProbability);
}

TEST_CASE("cmd_spectrum")
{
	const auto doc = nlohmann::ordered_json::parse(
		cmd_spectrum(parse_config(with_system(paper_system, "initial_state: paper-product\n"))));
	std::vector<std::string> keys;
	for(const auto& [k, v] : doc.items())
	{
		keys.push_back(k);
	}
	CHECK(keys.front() == "eigenvalues");
	CHECK(keys[1] == "dominant_index");
	const std::vector<double> expected{1.0, 0.444, 0.444, 0.197};
	for(std::size_t k = 0; k < 4; ++k)
	{
		CHECK(std::abs(doc["eigenvalues"][k]["magnitude"].get<double>() - expected[k]) <= 1e-3);
	}
	CHECK(doc["dominant_unique"].get<bool>());
	CHECK(doc["conditions"]["coupling_ok"].get<bool>());
	CHECK(doc["yield_coefficient"].get<double>() == doctest::Approx(0.5));

	const auto decoupled = nlohmann::json::parse(cmd_spectrum(parse_config(R"(
system:
  kind: model3q
  g: 0
  tau: 2pi
  probe_angle: pi/4
initial_state: paper-product
)")));
	for(const auto& e : decoupled["eigenvalues"])
	{
		CHECK(e["magnitude"].get<double>() == doctest::Approx(1.0));
	}
	CHECK_FALSE(decoupled["dominant_unique"].get<bool>());

	const auto resonant = nlohmann::json::parse(cmd_spectrum(parse_config(R"(
system:
  kind: model3q
  g: 0.3535533905932738
  tau: 2pi
  probe_angle: pi/4
initial_state: paper-product
)")));
	CHECK_FALSE(resonant["dominant_unique"].get<bool>());
	CHECK_FALSE(resonant["conditions"]["coupling_ok"].get<bool>());
}

TEST_CASE("cmd_sweep over the coupling")
{
	const auto rows = parse_csv(cmd_sweep(parse_config(with_system(
		paper_system, "initial_state: paper-product\nsweep:\n  axis: g\n  from: 0.05\n  to: 0.45\n  count: 9\n"))));
	REQUIRE(rows.size() == 10);
	CHECK(rows[0] == std::vector<std::string>{"g", "lambda0_magnitude", "gap_ratio", "dominant_fidelity"});
	for(std::size_t i = 1; i < rows.size(); ++i)
	{
		if(i > 1)
		{
			CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
		}
		CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0));
		CHECK(std::stod(rows[i][3]) == doctest::Approx(1.0));
	}
	// g = 0.25 is the reference point; g = 0.35 sits next to the resonance at sqrt(2)/4
	CHECK(std::stod(rows[5][0]) == doctest::Approx(0.25));
	CHECK(std::stod(rows[5][2]) == doctest::Approx(0.4440).epsilon(1e-3));
	CHECK(std::stod(rows[7][2]) > 0.99);
	for(std::size_t i = 1; i <= 7; ++i)
	{
		CHECK(std::stod(rows[i][2]) >= std::stod(rows[5][2]) - 1e-12);
	}
}

TEST_CASE("cmd_sweep over tau follows the singlet eigenvalue")
{
	const auto rows = parse_csv(cmd_sweep(parse_config(with_system(
		paper_system, "initial_state: paper-product\nsweep:\n  axis: tau\n  from: pi\n  to: 2pi\n  count: 2\n"))));
	REQUIRE(rows.size() == 3);
	// at Ωτ = π the singlet eigenvalue vanishes and a triplet one dominates
	CHECK(std::stod(rows[1][1]) < 1.0);
	CHECK(std::stod(rows[1][3]) == doctest::Approx(0.0));
	CHECK(std::stod(rows[2][1]) == doctest::Approx(1.0));
	CHECK(std::stod(rows[2][3]) == doctest::Approx(1.0));

	const auto cfg = parse_config(with_system(paper_system, "initial_state: paper-product\n"));
	CHECK_THROWS_AS(cmd_sweep(cfg), ConfigError);
}

TEST_CASE("cmd_shots")
{
	auto cfg = parse_config(with_system(paper_system, "initial_state: paper-product\nshots:\n  count: 10000\n  seed: 42\n"));
	const auto text = cmd_shots(cfg);
	const auto rows = parse_csv(text);
	REQUIRE(rows.size() == 12);
	CHECK(rows[0] == std::vector<std::string>{"n", "mc_frequency", "exact_probability", "abs_error"});
	CHECK(std::stod(rows[6][3]) < 0.02);
	CHECK(cmd_shots(cfg) == text);

	const auto idle = parse_config(R"(
system:
  kind: custom
  factors: [2, 2]
  tau: 1
  hamiltonian: [[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]
  probe: [[1, 0], [0, 0]]
initial_state: [[1,0],[0,0],[0,0],[0,0]]
n_steps: 4
shots:
  count: 1
)");
	const auto idle_rows = parse_csv(cmd_shots(idle));
	REQUIRE(idle_rows.size() == 6);
	for(const auto& row : idle_rows | std::views::drop(1))
	{
		CHECK(row[1] == "1");
	}
}

TEST_CASE("command-line tool exit codes and outputs")
{
	const auto dir = scratch_dir();
	const std::string configs = ZENOPURE_CONFIG_DIR;

	const auto out = dir / "run.csv";
	fs::remove(out);
	CHECK(run_tool("run --config " + configs + "/paper_product.yaml --out " + out.string()) == 0);
	const auto first = slurp(out);
	CHECK(first.rfind("n,fidelity,success_probability\n", 0) == 0);
	CHECK(run_tool("run --config " + configs + "/paper_product.yaml --out " + out.string()) == 0);
	CHECK(slurp(out) == first);

	const auto shots_a = dir / "shots_a.csv";
	const auto shots_b = dir / "shots_b.csv";
	CHECK(run_tool("shots --config " + configs + "/paper_product.yaml --shots 5000 --seed 7 --out " +
	               shots_a.string()) == 0);
	CHECK(run_tool("shots --config " + configs + "/paper_product.yaml --shots 5000 --seed 7 --out " +
	               shots_b.string()) == 0);
	CHECK(slurp(shots_a) == slurp(shots_b));

	const auto spectrum = dir / "spectrum.json";
	CHECK(run_tool("spectrum --config " + configs + "/paper_product.yaml --out " + spectrum.string()) == 0);
	CHECK(nlohmann::json::parse(slurp(spectrum))["dominant_unique"].get<bool>());

	const auto sweep = dir / "sweep.csv";
	CHECK(run_tool("sweep --config " + configs + "/sweep_g.yaml --out " + sweep.string()) == 0);
	CHECK(run_tool("sweep --config " + configs + "/paper_product.yaml --out " + (dir / "nosweep.csv").string()) == 1);
	CHECK_FALSE(fs::exists(dir / "nosweep.csv"));

	CHECK(run_tool("run --config " + configs + "/custom_qubit_pair.yaml --out " + (dir / "custom.csv").string()) == 0);

	// orthogonal probe and initial state
	const auto bad = dir / "orthogonal.yaml";
	{
		std::ofstream f(bad);
		f << "system:\n  kind: model3q\n  g: 0.25\n  tau: 2pi\n  alpha: 1\n  beta: 0\n"
		  << "initial_state: [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]\n";
	}
	const auto failed = dir / "failed.csv";
	fs::remove(failed);
	CHECK(run_tool("run --config " + bad.string() + " --out " + failed.string()) == 2);
	CHECK_FALSE(fs::exists(failed));

	CHECK(run_tool("run --config " + (dir / "missing.yaml").string()) == 1);
	CHECK(run_tool("run") == 1);
	CHECK(run_tool("frobnicate --config x") == 1);
}
