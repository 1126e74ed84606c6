#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liesplit/piecewise.hpp"
#include "liesplit/scheme.hpp"

namespace liesplit {

// Result of a coercive obstruction check. When the matching hypotheses
// hold, functional_value is the exact H^{-N}-type defect
//   1/2 int_0^1 (xi_{M_{N-1}}(t) - t^N/N!)^2 dt  (> 0 for Dirac controls)
// and equals identity_value = zeta_{W_N} + (-1)^{N+1} zeta_{M_2N}. The
// M-term sign alternates with N (the repeated integration by parts leaves
// the boundary term (-1)^N xi~_{M_2N}(1)); at N=1 this is the familiar
// zeta_{W_1} + zeta_{M_2}. Either way the combination is strictly positive
// for Dirac controls meeting the hypotheses, so zeta_{W_N} and
// zeta_{M_2N} can never both vanish.
struct ObstructionReport {
	Bracket bracket; // the bad bracket W_N
	Rat functional_value;
	std::vector<std::pair<Bracket, GaussRat>> constraint_residuals;
	enum class Verdict { Obstructed, HypothesesNotMet } verdict =
	    Verdict::HypothesesNotMet;
	Rat identity_value;
	int order_degree = 0; // degree 2N+1 the identity lives at

	bool hypotheses_met() const;
	std::string to_text() const;
};

// Controls are normalized to horizon 1 internally (homogeneity scaling).
// Channel restrictions follow the respective propositions: w1 allows only
// X1; w2 allows {X1, W1}; the general form takes the declared flow set,
// which must avoid {M_1..M_2N, W_N}.
ObstructionReport w1_obstruction(const DiracControl &);
ObstructionReport w2_obstruction(const DiracControl &);
ObstructionReport wN_obstruction(const DiracControl &, int n,
                                 const std::vector<Bracket> &flows);

struct MaxOrderBound {
	bool bounded = false;
	int bound = 0;     // 2N for the smallest applicable N
	int witness_n = 0; // that N
};

// Smallest N with flows disjoint from {M_N..M_2N, W_N} gives order <= 2N;
// unbounded-by-this-criterion if none exists up to search_limit.
MaxOrderBound max_order_bound(const std::vector<Bracket> &flows, int search_limit = 8);

// The linear-dependence statement forced on (f_{M2}, f_{W1}) by an order-3
// relative scheme (degree 3), or on (f_{M4}, f_{W2}) by an order-5 relative
// scheme with f_{W1} = 0 (degree 5).
struct DegeneracyWitness {
	Bracket m_bracket, w_bracket;
	GaussRat m_coeff, w_coeff; // not both zero when hypotheses hold
};

DegeneracyWitness degeneracy_witness(const CoordinateVector &zeta, int degree);

} // namespace liesplit
