#include "zenopure/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "zenopure/parallel.hpp"

namespace zeno::cli
{

namespace
{

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what)
{
	std::ostringstream msg;
	msg << "config";
	if(node.IsDefined() && node.Mark().line >= 0)
	{
		msg << ":" << node.Mark().line + 1 << ":" << node.Mark().column + 1;
	}
	msg << ": field '" << field << "': " << what;
	throw ConfigError(msg.str());
}

void check_keys(const YAML::Node& map, const std::string& field, const std::set<std::string>& allowed)
{
	if(!map.IsMap())
	{
		fail(map, field, "expected a mapping");
	}
	for(const auto& kv : map)
	{
		const auto key = kv.first.as<std::string>();
		if(!allowed.contains(key))
		{
			fail(kv.first, field.empty() ? key : field + "." + key, "unknown key");
		}
	}
}

double parse_number(std::string_view text, bool& ok)
{
	while(!text.empty() && text.front() == ' ')
	{
		text.remove_prefix(1);
	}
	while(!text.empty() && text.back() == ' ')
	{
		text.remove_suffix(1);
	}
	if(!text.empty() && text.front() == '+')
	{
		text.remove_prefix(1);
	}
	double value = 0.0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	ok = ec == std::errc{} && ptr == text.data() + text.size() && !text.empty();
	return value;
}

// Plain reals, or multiples of pi: "pi", "2pi", "-0.5*pi", "pi/4", "3*pi/2".
double parse_real(const YAML::Node& node, const std::string& field)
{
	if(!node.IsDefined() || node.IsNull())
	{
		fail(node, field, "missing value");
	}
	if(!node.IsScalar())
	{
		fail(node, field, "expected a real number");
	}
	const std::string text = node.Scalar();
	bool ok = false;
	double value = 0.0;
	if(const auto at = text.find("pi"); at != std::string::npos)
	{
		std::string coef = text.substr(0, at);
		std::string rest = text.substr(at + 2);
		while(!coef.empty() && (coef.back() == ' ' || coef.back() == '*'))
		{
			coef.pop_back();
		}
		double c = 1.0;
		ok = true;
		if(coef == "-")
		{
			c = -1.0;
		}
		else if(!coef.empty() && coef != "+")
		{
			c = parse_number(coef, ok);
		}
		double den = 1.0;
		if(ok && !rest.empty())
		{
			const auto slash = rest.find('/');
			ok = slash != std::string::npos && rest.substr(0, slash).find_first_not_of(' ') == std::string::npos;
			if(ok)
			{
				den = parse_number(rest.substr(slash + 1), ok);
				ok = ok && den != 0.0;
			}
		}
		value = c * std::numbers::pi / den;
	}
	else
	{
		value = parse_number(text, ok);
	}
	if(!ok || !std::isfinite(value))
	{
		fail(node, field, "cannot read '" + text + "' as a real number");
	}
	return value;
}

int parse_int(const YAML::Node& node, const std::string& field)
{
	if(!node.IsDefined() || !node.IsScalar())
	{
		fail(node, field, "expected an integer");
	}
	int value = 0;
	const std::string& text = node.Scalar();
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if(ec != std::errc{} || ptr != text.data() + text.size())
	{
		fail(node, field, "cannot read '" + text + "' as an integer");
	}
	return value;
}

std::uint64_t parse_u64(const YAML::Node& node, const std::string& field)
{
	if(!node.IsDefined() || !node.IsScalar())
	{
		fail(node, field, "expected an unsigned integer");
	}
	std::uint64_t value = 0;
	const std::string& text = node.Scalar();
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if(ec != std::errc{} || ptr != text.data() + text.size())
	{
		fail(node, field, "cannot read '" + text + "' as an unsigned integer");
	}
	return value;
}

std::string parse_string(const YAML::Node& node, const std::string& field)
{
	if(!node.IsDefined() || !node.IsScalar())
	{
		fail(node, field, "expected a string");
	}
	return node.Scalar();
}

// A bare real, or an [re, im] pair.
cx_double parse_complex(const YAML::Node& node, const std::string& field)
{
	if(node.IsSequence())
	{
		if(node.size() != 2)
		{
			fail(node, field, "complex numbers are written as [re, im]");
		}
		return {parse_real(node[0], field + "[0]"), parse_real(node[1], field + "[1]")};
	}
	return parse_real(node, field);
}

cx_double parse_pair(const YAML::Node& node, const std::string& field)
{
	if(!node.IsSequence() || node.size() != 2)
	{
		fail(node, field, "expected an [re, im] pair");
	}
	return parse_complex(node, field);
}

Vector parse_vector(const YAML::Node& node, const std::string& field)
{
	if(!node.IsSequence() || node.size() == 0)
	{
		fail(node, field, "expected a non-empty list of [re, im] pairs");
	}
	Vector v(static_cast<Index>(node.size()));
	for(std::size_t i = 0; i < node.size(); ++i)
	{
		v(static_cast<Index>(i)) = parse_pair(node[i], field + "[" + std::to_string(i) + "]");
	}
	return v;
}

Matrix parse_matrix(const YAML::Node& node, const std::string& field)
{
	if(!node.IsSequence() || node.size() == 0)
	{
		fail(node, field, "expected a list of rows of [re, im] pairs");
	}
	const auto n = static_cast<Index>(node.size());
	Matrix m(n, n);
	for(Index i = 0; i < n; ++i)
	{
		const auto row = parse_vector(node[i], field + "[" + std::to_string(i) + "]");
		if(row.size() != n)
		{
			fail(node[i], field + "[" + std::to_string(i) + "]",
			     "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
		}
		m.row(i) = row.transpose();
	}
	return m;
}

// Depth-3 lists are matrices, depth-2 lists are pure-state vectors.
bool is_matrix_form(const YAML::Node& node)
{
	return node.IsSequence() && node.size() > 0 && node[0].IsSequence() && node[0].size() > 0 &&
	       node[0][0].IsSequence();
}

bool parse_units(const YAML::Node& sys)
{
	if(!sys["units"])
	{
		return false;
	}
	const auto units = parse_string(sys["units"], "system.units");
	if(units == "omega")
	{
		return true;
	}
	if(units != "absolute")
	{
		fail(sys["units"], "system.units", "expected 'omega' or 'absolute'");
	}
	return false;
}

Model3qSystem parse_model3q(const YAML::Node& sys)
{
	check_keys(sys, "system", {"kind", "units", "omega", "g", "tau", "alpha", "beta", "probe_angle"});
	Model3qSystem out;
	out.omega_units = parse_units(sys);
	auto& p = out.params;
	p.omega = sys["omega"] ? parse_real(sys["omega"], "system.omega") : 1.0;
	p.g = parse_real(sys["g"], "system.g");
	p.tau = parse_real(sys["tau"], "system.tau");
	if(p.tau < 0.0)
	{
		fail(sys["tau"], "system.tau", "must be non-negative");
	}
	if(out.omega_units)
	{
		if(p.omega == 0.0)
		{
			fail(sys["omega"], "system.omega", "must be nonzero with units: omega");
		}
		p.g *= std::abs(p.omega);
		p.tau /= std::abs(p.omega);
	}
	if(sys["probe_angle"])
	{
		if(sys["alpha"] || sys["beta"])
		{
			fail(sys["probe_angle"], "system.probe_angle", "give either probe_angle or alpha/beta, not both");
		}
		const double theta = parse_real(sys["probe_angle"], "system.probe_angle");
		p.alpha = std::cos(theta);
		p.beta = std::sin(theta);
	}
	else
	{
		p.alpha = parse_complex(sys["alpha"], "system.alpha");
		p.beta = parse_complex(sys["beta"], "system.beta");
	}
	try
	{
		p.validate();
	}
	catch(const InvalidArgument& e)
	{
		fail(sys["alpha"], "system.alpha", e.what());
	}
	return out;
}

CustomSystem parse_custom(const YAML::Node& sys)
{
	check_keys(sys, "system", {"kind", "units", "factors", "hamiltonian", "probe", "tau", "omega"});
	const bool omega_units = parse_units(sys);
	const auto& fnode = sys["factors"];
	if(!fnode || !fnode.IsSequence() || fnode.size() < 2)
	{
		fail(fnode ? fnode : sys, "system.factors", "expected [dim_x, dim_a, ...] with at least two entries");
	}
	std::vector<Index> factors;
	for(std::size_t i = 0; i < fnode.size(); ++i)
	{
		const int f = parse_int(fnode[i], "system.factors[" + std::to_string(i) + "]");
		if(f < 1)
		{
			fail(fnode[i], "system.factors[" + std::to_string(i) + "]", "must be positive");
		}
		factors.push_back(f);
	}
	const Index dim_a = std::accumulate(factors.begin() + 1, factors.end(), Index{1}, std::multiplies<>{});

	double tau = parse_real(sys["tau"], "system.tau");
	if(tau < 0.0)
	{
		fail(sys["tau"], "system.tau", "must be non-negative");
	}
	if(omega_units)
	{
		const double omega = sys["omega"] ? parse_real(sys["omega"], "system.omega") : 1.0;
		if(omega == 0.0)
		{
			fail(sys["omega"], "system.omega", "must be nonzero with units: omega");
		}
		tau /= std::abs(omega);
	}

	Matrix h = parse_matrix(sys["hamiltonian"], "system.hamiltonian");
	std::optional<Operator> hamiltonian;
	try
	{
		hamiltonian.emplace(std::move(h), factors);
	}
	catch(const Error& e)
	{
		fail(sys["hamiltonian"], "system.hamiltonian", e.what());
	}
	if(hamiltonian->hermiticity_defect() > hermitian_tolerance)
	{
		fail(sys["hamiltonian"], "system.hamiltonian", "matrix is not Hermitian");
	}

	Vector phi = parse_vector(sys["probe"], "system.probe");
	if(phi.size() != factors.front())
	{
		fail(sys["probe"], "system.probe", "length must equal factors[0] = " + std::to_string(factors.front()));
	}
	try
	{
		return CustomSystem{std::move(*hamiltonian), ProbeSpec(std::move(phi), dim_a), tau};
	}
	catch(const Error& e)
	{
		fail(sys["probe"], "system.probe", e.what());
	}
}

DensityMatrix parse_initial_state(const YAML::Node& node, bool model3q, const std::vector<Index>& factors)
{
	const std::string field = "initial_state";
	if(!node)
	{
		fail(node, field, "missing value");
	}
	if(node.IsScalar())
	{
		const auto name = node.Scalar();
		if(!model3q)
		{
			fail(node, field, "preset '" + name + "' needs system.kind = model3q");
		}
		if(name == "paper-product")
		{
			return model3q::paper_product_state();
		}
		if(name == "paper-mixed")
		{
			return model3q::paper_mixed_state();
		}
		fail(node, field, "unknown preset '" + name + "' (expected paper-product or paper-mixed)");
	}
	const Index dim = std::accumulate(factors.begin(), factors.end(), Index{1}, std::multiplies<>{});
	try
	{
		if(is_matrix_form(node))
		{
			Matrix m = parse_matrix(node, field);
			if(m.rows() != dim)
			{
				fail(node, field, "matrix dimension " + std::to_string(m.rows()) + " != system dimension " +
				                      std::to_string(dim));
			}
			return DensityMatrix(Operator(std::move(m), factors));
		}
		Vector psi = parse_vector(node, field);
		if(psi.size() != dim)
		{
			fail(node, field, "vector length " + std::to_string(psi.size()) + " != system dimension " +
			                      std::to_string(dim));
		}
		if(std::abs(psi.norm() - 1.0) > 1e-10)
		{
			fail(node, field, "pure state is not normalized");
		}
		return DensityMatrix::pure(psi, factors);
	}
	catch(const ConfigError&)
	{
		throw;
	}
	catch(const Error& e)
	{
		fail(node, field, e.what());
	}
}

std::optional<Vector> parse_target(const YAML::Node& node, bool model3q, Index dim_a)
{
	if(!node || node.IsNull())
	{
		return std::nullopt;
	}
	if(node.IsScalar())
	{
		if(node.Scalar() == "psi-minus" && model3q)
		{
			return model3q::bell_basis().psi_minus;
		}
		fail(node, "target", model3q ? "unknown preset '" + node.Scalar() + "' (expected psi-minus)"
		                             : "preset targets need system.kind = model3q");
	}
	Vector t = parse_vector(node, "target");
	if(t.size() != dim_a)
	{
		fail(node, "target", "length must equal dim_a = " + std::to_string(dim_a));
	}
	if(std::abs(t.norm() - 1.0) > 1e-10)
	{
		fail(node, "target", "target state is not normalized");
	}
	return t;
}

SweepSpec parse_sweep(const YAML::Node& node, bool model3q)
{
	check_keys(node, "sweep", {"axis", "from", "to", "count"});
	SweepSpec s;
	const auto axis = parse_string(node["axis"], "sweep.axis");
	if(axis == "tau")
	{
		s.axis = SweepAxis::tau;
	}
	else if(axis == "g")
	{
		s.axis = SweepAxis::g;
	}
	else if(axis == "alpha-angle")
	{
		s.axis = SweepAxis::alpha_angle;
	}
	else
	{
		fail(node["axis"], "sweep.axis", "expected tau, g or alpha-angle");
	}
	if(!model3q && s.axis != SweepAxis::tau)
	{
		fail(node["axis"], "sweep.axis", "custom systems can only sweep tau");
	}
	s.from = parse_real(node["from"], "sweep.from");
	s.to = parse_real(node["to"], "sweep.to");
	s.count = parse_int(node["count"], "sweep.count");
	if(s.count < 2)
	{
		fail(node["count"], "sweep.count", "must be at least 2");
	}
	if(!(s.from < s.to))
	{
		fail(node["to"], "sweep.to", "must be greater than sweep.from");
	}
	if(s.axis == SweepAxis::tau && s.from < 0.0)
	{
		fail(node["from"], "sweep.from", "tau must be non-negative");
	}
	return s;
}

// Round-trips through the 12-digit text so JSON numbers match CSV output.
double rounded(double x)
{
	return std::stod(format_real(x));
}

std::string csv(const std::string& header, const std::vector<std::vector<std::string>>& rows)
{
	std::string out = header + "\n";
	for(const auto& row : rows)
	{
		for(std::size_t i = 0; i < row.size(); ++i)
		{
			out += (i == 0 ? "" : ",") + row[i];
		}
		out += "\n";
	}
	return out;
}

} // namespace

std::string format_real(double x)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.12g", x);
	std::string s(buf);
	if(s == "-0")
	{
		s = "0";
	}
	return s;
}

ResolvedSystem resolve(const RunConfig& cfg)
{
	if(const auto* m = std::get_if<Model3qSystem>(&cfg.system))
	{
		return {model3q::build_hamiltonian(m->params), m->params.tau, m->params.probe()};
	}
	const auto& c = std::get<CustomSystem>(cfg.system);
	return {c.hamiltonian, c.tau, c.probe};
}

RunConfig parse_config(const std::string& text)
{
	YAML::Node root;
	try
	{
		root = YAML::Load(text);
	}
	catch(const YAML::Exception& e)
	{
		throw ConfigError("config:" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
		                  ": " + e.msg);
	}
	if(!root.IsMap())
	{
		throw ConfigError("config: top level must be a mapping");
	}
	check_keys(root, "", {"system", "initial_state", "n_steps", "target", "output", "sweep", "shots"});

	const auto& sys = root["system"];
	if(!sys || !sys.IsMap())
	{
		fail(sys ? sys : root, "system", "missing section");
	}
	const auto kind = parse_string(sys["kind"], "system.kind");
	std::optional<std::variant<Model3qSystem, CustomSystem>> system;
	std::vector<Index> factors;
	Index dim_a = 0;
	if(kind == "model3q")
	{
		system = parse_model3q(sys);
		factors = {2, 2, 2};
		dim_a = 4;
	}
	else if(kind == "custom")
	{
		auto custom = parse_custom(sys);
		factors = custom.hamiltonian.factors();
		dim_a = custom.probe.dim_a();
		system = std::move(custom);
	}
	else
	{
		fail(sys["kind"], "system.kind", "expected model3q or custom");
	}
	const bool is_model = kind == "model3q";

	RunConfig cfg{*system, parse_initial_state(root["initial_state"], is_model, factors)};
	cfg.n_steps = root["n_steps"] ? parse_int(root["n_steps"], "n_steps") : 10;
	if(cfg.n_steps < 0)
	{
		fail(root["n_steps"], "n_steps", "must be non-negative");
	}
	cfg.target = parse_target(root["target"], is_model, dim_a);

	if(const auto& out = root["output"])
	{
		check_keys(out, "output", {"path", "format"});
		if(out["path"])
		{
			cfg.output_path = parse_string(out["path"], "output.path");
		}
		if(out["format"])
		{
			const auto f = parse_string(out["format"], "output.format");
			if(f == "json")
			{
				cfg.format = Format::json;
			}
			else if(f != "csv")
			{
				fail(out["format"], "output.format", "expected csv or json");
			}
		}
	}
	if(root["sweep"])
	{
		cfg.sweep = parse_sweep(root["sweep"], is_model);
	}
	if(const auto& shots = root["shots"])
	{
		check_keys(shots, "shots", {"count", "seed"});
		if(shots["count"])
		{
			cfg.shots.shots = parse_int(shots["count"], "shots.count");
			if(cfg.shots.shots < 1)
			{
				fail(shots["count"], "shots.count", "must be at least 1");
			}
		}
		if(shots["seed"])
		{
			cfg.shots.seed = parse_u64(shots["seed"], "shots.seed");
		}
	}
	cfg.shots.n_steps = cfg.n_steps;
	return cfg;
}

RunConfig load_config(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in)
	{
		throw ConfigError("cannot open config file '" + path + "'");
	}
	std::ostringstream text;
	text << in.rdbuf();
	return parse_config(text.str());
}

std::string cmd_run(const RunConfig& cfg)
{
	const auto sys = resolve(cfg);
	const auto trace = run_protocol(cfg.initial_state, sys.hamiltonian, sys.tau, sys.probe, cfg.n_steps, cfg.target);

	if(cfg.format == Format::json)
	{
		json rows = json::array();
		for(const auto& s : trace.steps)
		{
			json row;
			row["n"] = s.n;
			row["fidelity"] = s.fidelity ? json(rounded(*s.fidelity)) : json(nullptr);
			row["success_probability"] = rounded(s.success_probability);
			rows.push_back(std::move(row));
		}
		json doc;
		doc["rows"] = std::move(rows);
		return doc.dump(2) + "\n";
	}
	std::vector<std::vector<std::string>> rows;
	for(const auto& s : trace.steps)
	{
		rows.push_back({std::to_string(s.n), s.fidelity ? format_real(*s.fidelity) : "",
		                format_real(s.success_probability)});
	}
	return csv("n,fidelity,success_probability", rows);
}

std::string cmd_spectrum(const RunConfig& cfg)
{
	const auto sys = resolve(cfg);
	const Operator v = projected_evolution(sys.hamiltonian, sys.tau, sys.probe);
	const auto conditioned = condition_on_probe(cfg.initial_state, sys.probe);
	const auto report = spectral_report(v, conditioned.state_a);

	json doc;
	json eigenvalues = json::array();
	const auto& lambda = report.eigensystem.eigenvalues;
	for(Index n = 0; n < lambda.size(); ++n)
	{
		json e;
		e["re"] = rounded(lambda(n).real());
		e["im"] = rounded(lambda(n).imag());
		e["magnitude"] = rounded(std::abs(lambda(n)));
		eigenvalues.push_back(std::move(e));
	}
	doc["eigenvalues"] = std::move(eigenvalues);
	doc["dominant_index"] = report.dominant_index ? json(*report.dominant_index) : json(nullptr);
	doc["dominant_unique"] = report.dominant_unique;
	doc["gap_ratio"] = rounded(report.gap_ratio);
	doc["diagonalizable"] = report.eigensystem.diagonalizable;
	doc["yield_coefficient"] = report.yield_coefficient ? json(rounded(*report.yield_coefficient)) : json(nullptr);
	doc["unit_modulus"] = report.dominant_index ? json(efficiency_check(report).unit_modulus) : json(nullptr);
	if(const auto* m = std::get_if<Model3qSystem>(&cfg.system))
	{
		const auto c = model3q::check_conditions(m->params);
		json conditions;
		conditions["tuning_ok"] = c.tuning_ok;
		conditions["probe_ok"] = c.probe_ok;
		conditions["coupling_ok"] = c.coupling_ok;
		doc["conditions"] = std::move(conditions);
	}
	return doc.dump(2) + "\n";
}

std::string cmd_sweep(const RunConfig& cfg)
{
	if(!cfg.sweep)
	{
		throw ConfigError("config: field 'sweep': missing section (needed by the sweep command)");
	}
	const SweepSpec& s = *cfg.sweep;
	const auto* model = std::get_if<Model3qSystem>(&cfg.system);
	const std::optional<Vector> target = model ? std::optional<Vector>(model3q::bell_basis().psi_minus) : cfg.target;

	std::vector<double> grid(static_cast<std::size_t>(s.count));
	for(int i = 0; i < s.count; ++i)
	{
		grid[i] = i + 1 == s.count ? s.to : s.from + (s.to - s.from) * i / (s.count - 1);
	}

	struct Point
	{
		double magnitude;
		double gap_ratio;
		std::optional<double> fidelity;
	};
	std::vector<Point> points(grid.size());

	detail::parallel_for(grid.size(), [&](std::size_t i) {
		const double value = grid[i];
		Operator v = Operator::identity({1});
		if(model)
		{
			auto p = model->params;
			const double omega = model->omega_units ? std::abs(p.omega) : 1.0;
			switch(s.axis)
			{
			case SweepAxis::tau: p.tau = value / omega; break;
			case SweepAxis::g: p.g = value * omega; break;
			case SweepAxis::alpha_angle:
				p.alpha = std::cos(value);
				p.beta = std::sin(value);
				break;
			}
			v = projected_evolution(model3q::build_hamiltonian(p), p.tau, p.probe());
		}
		else
		{
			const auto& c = std::get<CustomSystem>(cfg.system);
			v = projected_evolution(c.hamiltonian, value, c.probe);
		}
		const auto report = spectral_report(v);
		Point pt{report.dominant_magnitude(), report.gap_ratio, std::nullopt};
		if(target)
		{
			pt.fidelity = std::norm(braket(*target, report.eigensystem.right_vector(0)));
		}
		points[i] = pt;
	});

	const char* axis_name = s.axis == SweepAxis::tau ? "tau" : s.axis == SweepAxis::g ? "g" : "alpha_angle";
	std::vector<std::vector<std::string>> rows;
	for(std::size_t i = 0; i < grid.size(); ++i)
	{
		rows.push_back({format_real(grid[i]), format_real(points[i].magnitude), format_real(points[i].gap_ratio),
		                points[i].fidelity ? format_real(*points[i].fidelity) : ""});
	}
	return csv(std::string(axis_name) + ",lambda0_magnitude,gap_ratio,dominant_fidelity", rows);
}

std::string cmd_shots(const RunConfig& cfg)
{
	const auto sys = resolve(cfg);
	ShotConfig shots = cfg.shots;
	shots.n_steps = cfg.n_steps;
	const auto summary = run_shots(cfg.initial_state, sys.hamiltonian, sys.tau, sys.probe, shots);
	const auto exact = run_protocol(cfg.initial_state, sys.hamiltonian, sys.tau, sys.probe, cfg.n_steps);

	std::vector<std::vector<std::string>> rows;
	for(std::size_t n = 0; n < summary.frequency.size(); ++n)
	{
		const double p = exact.steps[n].success_probability;
		rows.push_back({std::to_string(n), format_real(summary.frequency[n]), format_real(p),
		                format_real(std::abs(summary.frequency[n] - p))});
	}
	return csv("n,mc_frequency,exact_probability,abs_error", rows);
}

} // namespace zeno::cli
