#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace growmix {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class non_square_error : public error {
public:
    non_square_error(std::size_t rows, std::size_t cols)
        : error("matrix is not square: " + std::to_string(rows) + "x" + std::to_string(cols)) {}
};

class non_finite_error : public error {
public:
    explicit non_finite_error(const std::string& what) : error("non-finite value in " + what) {}
};

// First off-diagonal entry that violates the sign constraint.
class negative_off_diagonal_error : public error {
public:
    negative_off_diagonal_error(std::size_t i, std::size_t j, double value)
        : error("negative off-diagonal entry at (" + std::to_string(i) + ", " + std::to_string(j) +
                "): " + std::to_string(value)),
          row(i), col(j), value(value) {}
    std::size_t row;
    std::size_t col;
    double value;
};

class dimension_mismatch_error : public error {
public:
    dimension_mismatch_error(std::size_t a, std::size_t b)
        : error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class not_irreducible_error : public error {
public:
    not_irreducible_error() : error("matrix is not irreducible") {}
};

class no_convergence_error : public error {
public:
    no_convergence_error(std::size_t iterations, double last_residual)
        : error("no convergence after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(last_residual) + ")"),
          iterations(iterations), last_residual(last_residual) {}
    std::size_t iterations;
    double last_residual;
};

class non_positive_vector_error : public error {
public:
    explicit non_positive_vector_error(const std::string& name)
        : error(name + " must be positive elementwise") {}
};

class bad_probability_vector_error : public error {
public:
    explicit bad_probability_vector_error(const std::string& why)
        : error("bad probability vector: " + why) {}
};

class bad_beta_error : public error {
public:
    explicit bad_beta_error(double beta)
        : error("beta must exceed 1, got " + std::to_string(beta)) {}
};

class no_common_perron_vector_error : public error {
public:
    explicit no_common_perron_vector_error(double deviation)
        : error("summands do not share a Perron vector (max deviation " +
                std::to_string(deviation) + ")") {}
};

class wrong_conservation_class_error : public error {
public:
    explicit wrong_conservation_class_error(const std::string& expected)
        : error("mixing matrix is not " + expected) {}
};

class spab_not_zero_error : public error {
public:
    explicit spab_not_zero_error(double spab)
        : error("spectral abscissa of A must be zero, got " + std::to_string(spab)) {}
};

class not_heterogeneous_error : public error {
public:
    not_heterogeneous_error() : error("growth rates are uniform") {}
};

class not_stochastic_error : public error {
public:
    explicit not_stochastic_error(const std::string& why) : error("not stochastic: " + why) {}
};

class bad_grid_error : public error {
public:
    explicit bad_grid_error(const std::string& why) : error("bad grid: " + why) {}
};

class exp_overflow_error : public error {
public:
    explicit exp_overflow_error(const std::string& why)
        : error("matrix exponential overflow: " + why) {}
};

// Generic guard for documented call preconditions that have no dedicated type.
class precondition_error : public error {
public:
    explicit precondition_error(const std::string& why) : error(why) {}
};

} // namespace growmix
