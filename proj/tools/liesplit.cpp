// Command-line frontend: batch subcommands over the scheme/control/spec
// file formats. Exit codes: 0 success, 2 usage, 3 parse error,
// 4 verification or obstruction negative (and domain errors), 5 search
// failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "liesplit/errors.hpp"
#include "liesplit/numverify.hpp"
#include "liesplit/obstruction.hpp"
#include "liesplit/scheme_io.hpp"
#include "liesplit/search.hpp"

namespace {

using namespace liesplit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitVerification = 4;
constexpr int kExitSearchFailure = 5;

std::vector<Bracket> parse_flow_list(const std::string &raw)
{
	std::vector<Bracket> flows;
	std::istringstream in(raw);
	std::string tok;
	while (in >> tok)
		flows.push_back(Bracket::parse(tok));
	return flows;
}

int cmd_basis(int letters, int degree, const std::string &policy_name,
              const std::string &out_path)
{
	HallPolicy policy = hall_policy_from_name(policy_name);
	HallBasis basis = HallBasis::generate(letters, degree, policy);

	std::ostringstream os;
	os << basis.to_text();
	os << "witt-counts:";
	for (int n = 1; n <= degree; ++n)
		os << " " << n << ":" << basis.degree_elements(n).size();
	os << " total:" << basis.size() << "\n";

	auto violations = basis.validate();
	os << "validation: " << (violations.empty() ? "pass" : "fail") << "\n";
	for (auto &v : violations)
		os << "violation: " << v.message << "\n";

	if (out_path.empty())
		std::cout << os.str();
	else
	{
		std::ofstream out(out_path);
		out << os.str();
		std::cout << "basis written to " << out_path << "\n";
	}
	return violations.empty() ? kExitOk : kExitVerification;
}

int cmd_order(const std::string &path, int max_order)
{
	Scheme s = load_scheme_file(path);
	OrderResult r = order_of_scheme(s, max_order);
	std::cout << r.summary() << "\n";
	return kExitOk;
}

int cmd_search(const std::string &spec_path, const std::string &out_path,
               std::optional<uint64_t> seed, int restarts_override)
{
	SearchSpec spec = load_search_spec_file(spec_path);
	if (seed)
		spec.seed = seed;
	if (restarts_override > 0)
		spec.max_restarts = restarts_override;

	SearchOutcome out = solve(spec);
	std::cout << (out.success ? "search: success" : "search: failure") << "\n";
	std::cout << "restarts used: " << out.restarts_used << "\n";
	std::cout.precision(6);
	std::cout << "best residual: " << out.best_residual << "\n";
	if (!out.success)
	{
		std::cout << out.detail << "\n";
		return kExitSearchFailure;
	}
	std::cout << "residual norm: " << out.residual_norm << "\n";
	std::cout << "verification: " << out.verification.detail << "\n";
	if (out.verification.exact)
		std::cout << "certificate: exact order " << out.verification.exact_order << "\n";
	std::string target = out_path.empty() ? spec_path + ".scheme" : out_path;
	save_scheme_file(target, out.scheme);
	std::cout << "scheme written to " << target << "\n";
	return kExitOk;
}

int cmd_verify(const std::string &scheme_path, const std::string &system_name,
               const std::string &csv_path, bool multistep)
{
	Scheme s = load_scheme_file(scheme_path);
	auto sys = find_system(system_name);
	ConvergenceReport rep;
	if (multistep)
		rep = empirical_order_multistep(s, *sys, 1.0, {8, 16, 32, 64, 128, 256, 512},
		                                sys->default_state());
	else
		rep = empirical_order(s, *sys, default_grid(), sys->default_state());

	if (csv_path.empty())
		std::cout << rep.csv();
	else
	{
		std::ofstream out(csv_path);
		out << rep.csv();
	}
	std::cout << system_name << ": " << rep.summary() << "\n";
	return kExitOk;
}

int cmd_obstruct(const std::string &input_path, const std::string &family, int n,
                 const std::string &flow_names, bool bound_query, int bound_limit)
{
	if (bound_query)
	{
		auto flows = parse_flow_list(flow_names);
		MaxOrderBound b = max_order_bound(flows, bound_limit);
		if (b.bounded)
			std::cout << "max order " << b.bound << " (criterion N=" << b.witness_n
			          << ")\n";
		else
			std::cout << "unbounded-by-this-criterion up to N=" << bound_limit << "\n";
		return kExitOk;
	}

	DiracControl c = load_control_or_scheme_file(input_path);
	ObstructionReport rep;
	if (family == "w1")
		rep = w1_obstruction(c);
	else if (family == "w2")
		rep = w2_obstruction(c);
	else if (family == "wN")
	{
		std::vector<Bracket> flows = parse_flow_list(flow_names);
		if (flows.empty())
			for (auto &im : c.impulses)
			{
				bool seen = false;
				for (auto &f : flows)
					seen = seen || f == im.channel;
				if (!seen)
					flows.push_back(im.channel);
			}
		rep = wN_obstruction(c, n, flows);
	}
	else
		throw CLI::ValidationError("--family must be w1, w2 or wN");

	std::cout << rep.to_text();
	return rep.hypotheses_met() ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"splitting-method analysis in the truncated free Lie algebra"};
	app.require_subcommand(1);

	// basis
	auto *basis = app.add_subcommand("basis", "generate and validate a Hall basis");
	int letters = 2, degree = 5;
	std::string policy = "bstar", basis_out;
	basis->add_option("--letters", letters, "number of generators")->default_val(2);
	basis->add_option("--degree", degree, "maximal bracket length")->required();
	basis->add_option("--policy", policy, "bstar | lyndon")->default_val("bstar");
	basis->add_option("--out", basis_out, "write the listing to a file");

	// order
	auto *order = app.add_subcommand("order", "exact symbolic order of a scheme");
	std::string order_file;
	int order_max = 8;
	order->add_option("scheme", order_file, "scheme file")->required();
	order->add_option("--max", order_max, "largest order probed")->default_val(8);

	// search
	auto *search = app.add_subcommand("search", "numerical order-condition search");
	std::string spec_file, search_out;
	uint64_t seed_value = 0;
	bool seed_given = false;
	int restarts_override = 0;
	search->add_option("spec", spec_file, "search spec file")->required();
	search->add_option("--out", search_out, "output scheme file");
	search->add_option("--seed", seed_value, "seed override")
	    ->each([&](const std::string &) { seed_given = true; });
	search->add_option("--restarts", restarts_override, "restart override");

	// verify
	auto *verify = app.add_subcommand("verify", "empirical convergence order");
	std::string verify_file, system_name, csv_path;
	bool multistep = false;
	verify->add_option("scheme", verify_file, "scheme file")->required();
	verify->add_option("--system", system_name, "test system name")->required();
	verify->add_option("--csv", csv_path, "write the (T, error) table to a file");
	verify->add_flag("--multistep", multistep, "fixed final time, n steps");

	// obstruct
	auto *obstruct = app.add_subcommand("obstruct", "coercive obstruction functionals");
	std::string obstruct_file, family = "w1";
	int obstruct_n = 1, bound_limit = 8;
	std::string flow_names;
	bool bound_query = false;
	obstruct->add_option("input", obstruct_file, "scheme or control file");
	obstruct->add_option("--family", family, "w1 | w2 | wN")->default_val("w1");
	obstruct->add_option("--n", obstruct_n, "N for the wN family")->default_val(1);
	obstruct->add_option("--flows", flow_names,
	                     "declared flow set, space separated (quote the list)");
	obstruct->add_flag("--bound", bound_query, "report the max-order bound for --flows");
	obstruct->add_option("--bound-limit", bound_limit, "largest N tried")->default_val(8);

	try
	{
		app.parse(argc, argv);

		if (*basis)
			return cmd_basis(letters, degree, policy, basis_out);
		if (*order)
			return cmd_order(order_file, order_max);
		if (*search)
			return cmd_search(spec_file, search_out,
			                  seed_given ? std::optional<uint64_t>(seed_value)
			                             : std::nullopt,
			                  restarts_override);
		if (*verify)
			return cmd_verify(verify_file, system_name, csv_path, multistep);
		if (*obstruct)
		{
			if (!bound_query && obstruct_file.empty())
				throw CLI::ValidationError("obstruct needs an input file or --bound");
			return cmd_obstruct(obstruct_file, family, obstruct_n, flow_names,
			                    bound_query, bound_limit);
		}
		return kExitUsage;
	}
	catch (const CLI::ParseError &e)
	{
		int code = app.exit(e);
		return code == 0 ? kExitOk : kExitUsage;
	}
	catch (const liesplit::ParseError &e)
	{
		std::cerr << "parse error: " << e.what() << "\n";
		return kExitParse;
	}
	catch (const std::invalid_argument &e)
	{
		std::cerr << "usage error: " << e.what() << "\n";
		return kExitUsage;
	}
	catch (const std::domain_error &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return kExitVerification;
	}
	catch (const std::exception &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return kExitVerification;
	}
}
