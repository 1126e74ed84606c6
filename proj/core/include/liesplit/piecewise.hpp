#pragma once

#include <vector>

#include "liesplit/scalar.hpp"

namespace liesplit {

// Piecewise polynomial in t on [0, 1] with exact rational breakpoints and
// coefficients. Pieces are polynomials in the global variable t, stored by
// ascending degree. Used for the coordinate chains xi_{M_k}(t, u) of Dirac
// controls, which are piecewise polynomial between impulse times.
class PiecewisePoly {
public:
	PiecewisePoly(); // identically zero

	// breaks must satisfy 0 = b_0 < b_1 < ... < b_k = 1; piece i lives on
	// [b_i, b_{i+1}].
	PiecewisePoly(std::vector<Rat> breaks, std::vector<std::vector<Rat>> pieces);

	// Right-continuous step function with value steps[i] on [b_i, b_{i+1});
	// breaks as above.
	static PiecewisePoly step(std::vector<Rat> breaks, std::vector<Rat> steps);

	// A single global polynomial (e.g. t^n / n!).
	static PiecewisePoly global(std::vector<Rat> coeffs);
	static PiecewisePoly monomial(int degree, const Rat &coeff);

	PiecewisePoly operator+(const PiecewisePoly &) const;
	PiecewisePoly operator-(const PiecewisePoly &) const;
	PiecewisePoly operator*(const PiecewisePoly &) const;

	// Running integral int_0^t, continuous across breakpoints.
	PiecewisePoly primitive() const;

	Rat integral() const; // int_0^1

	// Value at t, taken from the piece whose closed interval contains t
	// (right-continuous at interior breakpoints).
	Rat operator()(const Rat &t) const;

	const std::vector<Rat> &breaks() const { return breaks_; }
	const std::vector<std::vector<Rat>> &pieces() const { return pieces_; }

private:
	std::vector<Rat> breaks_;
	std::vector<std::vector<Rat>> pieces_;
};

} // namespace liesplit
