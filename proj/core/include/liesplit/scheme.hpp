#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liesplit/hall.hpp"

namespace liesplit {

enum class AlphaDomain { Real, Positive, NonZero };                 // R, R+, R*
enum class BetaDomain { Real, Positive, Complex, ComplexRight };    // R, R+, C, C+

AlphaDomain alpha_domain_from_name(const std::string &);
BetaDomain beta_domain_from_name(const std::string &);
std::string alpha_domain_name(AlphaDomain);
std::string beta_domain_name(BetaDomain);

struct Stage {
	Rat alpha;       // drift duration coefficient (flow of f0)
	Bracket channel; // controlled flow: X1 or a commutator bracket
	GaussRat beta;   // jump amplitude
};

// A splitting scheme, stored in composition order: the stage list spells
// the written product e^{a1 T f0} e^{b1 T^{|c1|} f_{c1}} e^{a2 T f0} ...,
// which acts on x(0) rightmost-first, so the *last* stage is the earliest
// in time.
struct Scheme {
	std::vector<Stage> stages;
	AlphaDomain alpha_domain = AlphaDomain::Positive;
	BetaDomain beta_domain = BetaDomain::Real;
	// false when the coefficients came from floating-point search; such
	// schemes are rejected by the exact order checker.
	bool exact = true;

	Rat total_time() const;
	bool is_real() const;
	// Checks every coefficient against its declared domain and the rule
	// that distinct non-drift flows are separated by positive drift.
	void check_domains() const;
};

struct Impulse {
	Rat time;
	Bracket channel;
	GaussRat amplitude;
};

// Control that is a finite sum of Dirac masses on [0, horizon]; the drift
// channel X0 carries the implicit constant control 1. Impulse times are
// strictly increasing.
struct DiracControl {
	Rat horizon;
	std::vector<Impulse> impulses;

	void check() const;
	double amplitude_norm() const; // sum of |amplitudes|
};

// Reads the scheme right-to-left in time: the last stage's jump lands at
// t = 0. Strang (1/2,1)(1/2,0) gives the single impulse delta_{1/2}; the
// two-stage scheme (1/4,2/3)(3/4,1/3) gives (1/3)delta_0 + (2/3)delta_{3/4}.
// Zero-amplitude impulses are dropped; zero-duration stages between jumps
// on the same channel merge. Requires alpha >= 0.
DiracControl scheme_to_control(const Scheme &);

// Inverse reading; pads a trailing zero-amplitude stage when the first
// drift interval is nonempty.
Scheme control_to_scheme(const DiracControl &,
                         AlphaDomain = AlphaDomain::Positive,
                         BetaDomain = BetaDomain::Real);

// compose(later, earlier) runs `earlier` first; with the composition-order
// series below, formal_series(compose(u,v)) = formal_series(u) * formal_series(v).
DiracControl compose(const DiracControl &later, const DiracControl &earlier);

// Homogeneity scaling to horizon 1: tau -> tau/T, amplitude -> a / T^{|c|}.
DiracControl normalize_horizon(const DiracControl &);

// The truncated flow series of the control, with factors in composition
// order (earliest factor rightmost):
//   exp_N((T-tau_k) X0) exp_N(a_k c_k) ... exp_N(a_1 c_1) exp_N(tau_1 X0).
Polynomial<GaussRat> formal_series(const DiracControl &, int degree);

// The written product of a scheme's stages; unlike scheme_to_control this
// accepts negative drift coefficients.
Polynomial<GaussRat> scheme_series(const Scheme &, int degree);

// Regularization oracle: every Dirac mass becomes a constant pulse of
// width eps > 0 on [tau, tau+eps] (the pulse factor is
// exp(eps X0 + a e(c)), computed exactly), so coordinates of the result
// converge to the Dirac values as eps -> 0. Requires eps to fit in the
// gap after each impulse.
Polynomial<GaussRat> regularized_series(const DiracControl &, const Rat &eps, int degree);

enum class CoordinateKind { FirstKind, SecondKind };

struct CoordinateVector {
	const HallBasis *basis = nullptr;
	int degree = 0;
	CoordinateKind kind = CoordinateKind::FirstKind;
	std::vector<GaussRat> values; // aligned with basis->elements()

	GaussRat at(const Bracket &b) const
	{
		int i = basis->index_of(b);
		return i < 0 ? GaussRat(0) : values[static_cast<size_t>(i)];
	}
};

// First kind: coordinates of log_N(formal_series) in the basis.
CoordinateVector zeta_coordinates(const DiracControl &, const HallBasis &, int degree);

// Second kind: the exponents of the descending ordered product
//   formal_series = prod_{b desc} exp_N(xi_b e(b)),
// solved exactly degree by degree (the BCH corrections to a coordinate only
// involve strictly lower degrees).
CoordinateVector xi_coordinates(const DiracControl &, const HallBasis &, int degree);

// prod over basis elements of degree <= v.degree, largest element leftmost.
Polynomial<GaussRat> descending_product(const CoordinateVector &v);

// Triangular polynomial maps between the two kinds (mutually inverse).
CoordinateVector xi_to_zeta(const CoordinateVector &xi);
CoordinateVector zeta_to_xi(const CoordinateVector &zeta);

// Coordinates of the target flow exp(X0+X1): 1 on the generators, 0 elsewhere.
CoordinateVector reference_zeta(const HallBasis &, int degree);

struct OrderResult {
	int order = 0;       // largest verified order (when !at_least)
	bool at_least = false; // no defect found through probed_max+1
	int probed_max = 0;
	int defect_degree = 0;
	std::vector<std::pair<Bracket, GaussRat>> defect; // first-failing coordinates
	std::string summary() const;
};

// Exact symbolic order: after rescaling total time to 1 (alpha_i/lambda,
// beta_i/lambda^{|c_i|}), the order is >= N iff pi_N(log of the scheme
// series) equals X0+X1. Rejects schemes with float-derived coefficients.
OrderResult order_of_scheme(const Scheme &, int n_max);

// Verifies both Prop-3.3-style scaling laws on the computed zeta:
// time scaling by eps > 0 and per-letter amplitude scaling by lambda.
bool homogeneity_check(const DiracControl &, const Rat &eps,
                       const std::vector<Rat> &lambda, const HallBasis &, int degree);

// Shared, lazily constructed bstar bases (2 letters) keyed by degree.
const HallBasis &bstar_basis(int max_degree);

} // namespace liesplit
