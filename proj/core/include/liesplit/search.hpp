#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liesplit/numverify.hpp"
#include "liesplit/scheme.hpp"

namespace liesplit {

// Numerical order-condition search: multi-start damped least squares on the
// first-kind coordinate residuals, with forward-mode dual-number Jacobians
// over the dense two-letter float kernel.
struct SearchSpec {
	int target_order = 2;
	std::vector<Bracket> flows; // stage channels, assigned round-robin
	int stages = 0;             // 0: cumulative Lie dimension through the target
	AlphaDomain alpha_domain = AlphaDomain::Positive;
	BetaDomain beta_domain = BetaDomain::Real;
	std::optional<uint64_t> seed; // unset: deterministic hash of the spec
	int max_restarts = 64;
	double tolerance = 1e-12;

	int effective_stages() const;
	uint64_t effective_seed() const;
};

// File format, line oriented with '#' comments:
//   search
//   target-order 4
//   flows X1 [X1,[X1,X0]]
//   stages 8
//   alpha-domain R+
//   beta-domain R
//   restarts 64
//   tolerance 1e-12
//   seed 42
SearchSpec parse_search_spec(std::istream &);
std::string format_search_spec(const SearchSpec &);
SearchSpec load_search_spec_file(const std::string &path);

// Raw parameter vector layout: per stage, the alpha parameter followed by
// one (real) or two (complex) beta parameters. Positivity constraints are
// realized by exponential reparameterization; for the R+ alpha domain the
// alphas are normalized to sum 1 (so the drift coordinate row is dropped),
// for R/R* a (sum alpha - 1) row is appended instead.
int parameter_count(const SearchSpec &);
Scheme decode_scheme(const std::vector<double> &params, const SearchSpec &);

// zeta_b(decoded scheme) - zeta_b(exp(X0+X1)) over the basis elements of
// degree <= target_order except X0 (imaginary parts appended for complex
// beta domains).
std::vector<double> residuals(const std::vector<double> &params, const SearchSpec &);

// Continued-fraction reconstruction of every coefficient with bounded
// denominator; empty when some coefficient does not admit one.
std::optional<Scheme> snap_to_exact(const Scheme &, long max_denominator = 4096,
                                    double tolerance = 1e-9);

struct VerifyReport {
	bool verified = false;
	bool exact = false; // certified by the exact order checker
	int exact_order = 0;
	double slope_a = 0, slope_b = 0; // one-step slopes on the two linear systems
	std::optional<Scheme> snapped;   // exact-coefficient upgrade, when found
	std::string detail;
};

// Exact schemes: order_of_scheme must reach the target. Float schemes: try
// the rational snap, else the empirical slope must match on two independent
// linear systems (order estimate within +-0.3).
VerifyReport verify_candidate(const Scheme &, const SearchSpec &);

struct SearchOutcome {
	bool success = false;
	Scheme scheme; // meaningful when success
	double residual_norm = 0;
	VerifyReport verification;
	int restarts_used = 0;
	double best_residual = 0; // best norm over all restarts (success or not)
	std::string detail;
};

// Multi-start solve; never reports success that verify_candidate rejects.
// When the flow set leaves some W_N uncompensated, targets beyond the
// 2N bound fail with a best residual kept away from zero by the coercive
// functional (a soft check: the solver only certifies the floor it finds).
SearchOutcome solve(const SearchSpec &);

} // namespace liesplit
