#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairgm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedPenaltyGradient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Model { GLasso, CovGraph, BinNet };

enum class Penalty { Square, Exp, Abs };

// Stopping rule for the single-objective solver. CompositeGradMap tests the
// proximal-gradient map, which vanishes at l1-regularized optima; RawGradient
// keeps the smooth-gradient test for fidelity with plain gradient methods.
enum class StopRule { CompositeGradMap, RawGradient };

std::string model_name(Model m);
std::string penalty_name(Penalty p);

}  // namespace fairgm
