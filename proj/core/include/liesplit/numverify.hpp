#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liesplit/scheme.hpp"

namespace liesplit {

using Vec = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;

// A concrete ODE test system with closed-form flows for the drift f0, the
// controlled field f1 and a hand-derived table of commutator channels, plus
// the exact flow of f0+f1 as reference.
class TestSystem {
public:
	virtual ~TestSystem() = default;

	virtual std::string name() const = 0;
	virtual int dim() const = 0;

	// channel X0 denotes the drift flow e^{s f0}.
	virtual bool supports(const Bracket &channel) const = 0;
	virtual Vec flow(const Bracket &channel, double s, const Vec &x) const = 0;
	virtual Vec reference(double t, const Vec &x) const = 0;
	virtual Vec field(const Bracket &channel, const Vec &x) const = 0;
	virtual Vec default_state() const = 0;

	// Linear systems extend holomorphically; complex-coefficient schemes
	// can only be verified on such systems.
	virtual bool supports_complex() const { return false; }
	virtual VecC flow_complex(const Bracket &, std::complex<double>, const VecC &) const;
	virtual VecC reference_complex(double, const VecC &) const;
};

// LinearPair / LinearPairB: f0 = Ax, f1 = Bx on R^4 with non-commuting
// integer matrices; every bracket channel is available as a matrix
// exponential. Quadratic: the planar system f0 = (0, x1^2), f1 = (1, 0)
// with f_{W1} = (0,2) constant and f_{M2} = 0. QuadraticFull: a 3d
// polynomial cascade with f_{W1} and f_{M2} pointwise independent.
std::vector<std::shared_ptr<const TestSystem>> builtin_systems();
std::shared_ptr<const TestSystem> find_system(const std::string &name);

struct ConvergenceReport {
	std::vector<std::pair<double, double>> samples; // (T, one-step error)
	double slope = 0;
	double intercept = 0;
	double r2 = 0;
	int points_used = 0;
	bool exact = false; // every error at reference precision
	double error_floor = 1e-13;

	// one-step convention: error ~ C T^{order+1}
	double estimated_order() const { return slope - 1; }
	std::string csv() const; // header "T,error", LF endings
	std::string summary() const;
};

std::vector<double> default_grid(); // 2^-3 .. 2^-12

// Composes the scheme's flows at each step size and fits the log-log slope
// of the one-step error against the exact flow.
ConvergenceReport empirical_order(const Scheme &, const TestSystem &,
                                  const std::vector<double> &grid, const Vec &x0);

// n steps of size t_final/n at fixed final time; slope ~ order.
ConvergenceReport empirical_order_multistep(const Scheme &, const TestSystem &,
                                            double t_final,
                                            const std::vector<int> &step_counts,
                                            const Vec &x0);

struct DependenceVerdict {
	Bracket first, second;   // (M2, W1) or (M4, W2)
	bool dependent = false;  // pointwise rank < 2 at every sample
	double max_rank_ratio = 0; // max over samples of sigma_2/sigma_1
};

// Evaluates the two degree-3 (or degree-5) bracket fields at sample points
// and tests the pointwise 2 x d rank.
DependenceVerdict dependence_test(const TestSystem &, int degree);

} // namespace liesplit
