#pragma once

#include <optional>
#include <string>
#include <variant>

#include "zenopure/engine.hpp"
#include "zenopure/errors.hpp"
#include "zenopure/model3q.hpp"
#include "zenopure/trajectories.hpp"

namespace zeno::cli
{

/// Rejected configuration; the message names the offending field.
class ConfigError : public Error
{
public:
	using Error::Error;
};

enum class Format
{
	csv,
	json
};

enum class SweepAxis
{
	tau,
	g,
	alpha_angle
};

struct Model3qSystem
{
	/// Absolute units (ħ = 1), already converted from `units: omega`.
	model3q::ModelParams params;
	/// Set when the config gave g in units of Ω and τ in units of 1/Ω. Sweep
	/// values are read and reported in the config's own units.
	bool omega_units = false;
};

struct CustomSystem
{
	Operator hamiltonian;
	ProbeSpec probe;
	double tau;
};

struct SweepSpec
{
	SweepAxis axis = SweepAxis::tau;
	double from = 0.0;
	double to = 0.0;
	int count = 0;
};

struct RunConfig
{
	RunConfig(std::variant<Model3qSystem, CustomSystem> sys, DensityMatrix initial)
		: system(std::move(sys))
		, initial_state(std::move(initial))
	{
	}

	std::variant<Model3qSystem, CustomSystem> system;
	DensityMatrix initial_state;
	int n_steps = 0;
	std::optional<Vector> target;
	std::optional<std::string> output_path;
	Format format = Format::csv;
	std::optional<SweepSpec> sweep;
	ShotConfig shots;

	[[nodiscard]] bool is_model3q() const { return std::holds_alternative<Model3qSystem>(system); }
};

/// Hamiltonian, interval and probe a config resolves to.
struct ResolvedSystem
{
	Operator hamiltonian;
	double tau;
	ProbeSpec probe;
};

ResolvedSystem resolve(const RunConfig& cfg);

/// Throws ConfigError on malformed input or violated invariants.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// 12 significant digits, round-half-even, no negative zero.
std::string format_real(double x);

/// Each command returns the complete output document.
std::string cmd_run(const RunConfig& cfg);
std::string cmd_spectrum(const RunConfig& cfg);
std::string cmd_sweep(const RunConfig& cfg);
std::string cmd_shots(const RunConfig& cfg);

} // namespace zeno::cli
