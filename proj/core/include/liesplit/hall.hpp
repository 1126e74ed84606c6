#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liesplit/bracket.hpp"
#include "liesplit/errors.hpp"
#include "liesplit/polynomial.hpp"

namespace liesplit {

// Dimension of the degree-n homogeneous component of the free Lie algebra
// over `letters` generators, via the Moebius function.
long long witt_dimension(int letters, int degree);

// The 14 elements X1 < M1 < M2 < M3 < M4 < W1 < (W1,X0) < ((W1,X0),X0)
// < W2 < (X1,W1) < ((X1,W1),X0) < (M1,W1) < Q1 < X0, in this order.
const std::vector<Bracket> &bstar_prefix();

// Total order used by the bstar policy: X0 last, then by number of X1
// letters, then by length, ties broken by recursive comparison with the
// larger subtree first. Restricted to elements of length <= 5 this is
// exactly the order of bstar_prefix(); beyond that it is a documented
// deterministic completion ("bstar-compatible").
int bstar_cmp(const Bracket &a, const Bracket &b);
inline bool bstar_less(const Bracket &a, const Bracket &b) { return bstar_cmp(a, b) < 0; }

enum class HallPolicy { BStar, Lyndon, Custom };

HallPolicy hall_policy_from_name(const std::string &name); // "bstar" | "lyndon"
std::string hall_policy_name(HallPolicy policy);

struct HallViolation {
	enum class Kind {
		MissingGenerator,
		DuplicateElement,
		SubtreeNotMember,
		OrderViolation,      // b1 >= b2 in (b1,b2)
		RightFactorViolation, // b2 = (b3,b4) with b3 > b1
		SelfOrderViolation,  // (b1,b2) <= b1 (third Hall axiom)
		MissingPair,         // admissible pair absent
		WittCountMismatch,
	};
	Kind kind;
	std::string message;
};

// Ordered Hall set truncated at a maximal degree. The realized total order
// is the element's position in `elements()`. Immutable after construction;
// the lazily built per-degree solve cache is guarded by a once_flag, so
// instances may be shared across threads.
class HallBasis {
public:
	static HallBasis generate(int letters, int max_degree, HallPolicy policy);

	// Wraps an explicit element list (used by validation tests and file
	// round-trips). No Hall property is assumed; call validate().
	HallBasis(int letters, int max_degree, std::vector<Bracket> elements,
	          HallPolicy policy = HallPolicy::Custom);

	HallBasis(const HallBasis &) = delete;
	HallBasis &operator=(const HallBasis &) = delete;
	HallBasis(HallBasis &&) = default;

	int letters() const { return letters_; }
	int max_degree() const { return max_degree_; }
	HallPolicy policy() const { return policy_; }

	const std::vector<Bracket> &elements() const { return elements_; }
	int size() const { return static_cast<int>(elements_.size()); }
	int index_of(const Bracket &b) const; // -1 if absent
	const std::vector<int> &degree_elements(int degree) const;
	int count_through_degree(int degree) const;

	// Empty result means the three Hall axioms and the Witt counts hold.
	std::vector<HallViolation> validate() const;

	// One bracket expression per line, prefixed by a header line.
	std::string to_text() const;

	// Exact per-degree solve data: coordinates of a homogeneous Lie element
	// are ainv * (its coefficients at the pivot words).
	struct DegreeSolve {
		std::vector<int> elems;              // basis indices of this degree
		std::vector<Polynomial<Rat>> evals;  // evaluate(b, degree), aligned
		std::vector<Word> pivots;
		std::vector<std::vector<Rat>> ainv;  // row-major k x k
	};
	const DegreeSolve &solve_data(int degree) const;

private:
	struct SolveState {
		std::once_flag once;
		std::vector<DegreeSolve> degrees;
	};

	void build_solve() const;

	int letters_;
	int max_degree_;
	HallPolicy policy_;
	std::vector<Bracket> elements_;
	std::unordered_map<Bracket, int, BracketHash> index_;
	std::vector<std::vector<int>> by_degree_;

	mutable std::unique_ptr<SolveState> solve_ = std::make_unique<SolveState>();
};

// Coordinates of a Lie element relative to a Hall basis: values are aligned
// with basis.elements().
template <class S> struct LieCoordinates {
	const HallBasis *basis = nullptr;
	std::vector<S> values;

	S at(const Bracket &b) const
	{
		int i = basis->index_of(b);
		return i < 0 ? S(0) : values[static_cast<size_t>(i)];
	}

	Polynomial<S> reconstruct(int truncation_degree) const
	{
		Polynomial<S> out(truncation_degree);
		for (size_t i = 0; i < values.size(); ++i)
		{
			if (liesplit::is_zero(values[i]))
				continue;
			Polynomial<S> e = evaluate_as<S>(basis->elements()[i], truncation_degree);
			e.scale(values[i]);
			out += e;
		}
		return out;
	}
};

template <class S> struct LieDecomposition {
	LieCoordinates<S> coordinates;
	Polynomial<S> residual;
	bool is_lie() const { return residual.is_zero(); }
};

// Degree-by-degree exact solve of grade(p, n) against the span of the
// degree-n basis evaluations. The part of p outside that span is returned
// as the residual.
template <class S>
LieDecomposition<S> lie_decompose(const Polynomial<S> &p, const HallBasis &basis)
{
	if (!liesplit::is_zero(p.constant_term()))
		throw std::domain_error("lie coordinates of series with nonzero constant term");
	if (p.truncation_degree() > basis.max_degree())
		throw std::invalid_argument("polynomial degree exceeds basis degree");

	LieDecomposition<S> out{{&basis, std::vector<S>(static_cast<size_t>(basis.size()), S(0))},
	                        Polynomial<S>(p.truncation_degree())};
	for (int n = 1; n <= p.truncation_degree(); ++n)
	{
		auto &g = p.terms_of_degree(n);
		const auto &sd = basis.solve_data(n);
		if (sd.elems.empty())
		{
			for (auto &[w, c] : g)
				out.residual.add_term(w, c);
			continue;
		}
		if (g.empty())
			continue;
		size_t k = sd.elems.size();
		std::vector<S> rhs(k, S(0));
		for (size_t i = 0; i < k; ++i)
		{
			auto it = g.find(sd.pivots[i]);
			if (it != g.end())
				rhs[i] = it->second;
		}
		std::vector<S> x(k, S(0));
		for (size_t i = 0; i < k; ++i)
		{
			S acc(0);
			for (size_t j = 0; j < k; ++j)
			{
				if (liesplit::is_zero(rhs[j]))
					continue;
				acc += scalar_cast<S>(sd.ainv[i][j]) * rhs[j];
			}
			x[i] = acc;
		}
		// residual_n = grade(p, n) - sum x_i e(b_i)
		Polynomial<S> rec(p.truncation_degree());
		for (size_t i = 0; i < k; ++i)
		{
			if (liesplit::is_zero(x[i]))
				continue;
			out.coordinates.values[static_cast<size_t>(sd.elems[i])] = x[i];
			for (auto &[w, c] : sd.evals[i].terms_of_degree(n))
				rec.add_term(w, S(scalar_cast<S>(c) * x[i]));
		}
		for (auto &[w, c] : g)
			rec.add_term(w, S(-c));
		out.residual -= rec;
	}
	return out;
}

// Throwing variant: the "not a Lie element" error carries the residual in
// printed form.
template <class S>
LieCoordinates<S> lie_coordinates(const Polynomial<S> &p, const HallBasis &basis)
{
	auto d = lie_decompose(p, basis);
	if (!d.is_lie())
		throw NotLieElement("not a Lie element", d.residual.str());
	return std::move(d.coordinates);
}

} // namespace liesplit
