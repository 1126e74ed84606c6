#pragma once

#include <stdexcept>
#include <string>

namespace liesplit {

// Input text could not be parsed. Positions are 1-based; column 0 means
// "whole line".
class ParseError : public std::runtime_error {
public:
	ParseError(const std::string &msg, int line = 0, int column = 0)
	    : std::runtime_error(msg), line_(line), column_(column)
	{}
	int line() const { return line_; }
	int column() const { return column_; }

private:
	int line_, column_;
};

// A polynomial expected to be a Lie element has a nonzero residual after
// projecting onto the Hall basis. The residual is kept in printed form so
// the exception stays scalar-type agnostic.
class NotLieElement : public std::domain_error {
public:
	NotLieElement(const std::string &msg, std::string residual)
	    : std::domain_error(msg), residual_(std::move(residual))
	{}
	const std::string &residual() const { return residual_; }

private:
	std::string residual_;
};

} // namespace liesplit
