#pragma once
#include <stdexcept>

namespace jetalg {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// antiderivative target occurs in a denominator or inside a symbol argument
struct NonElementaryAntiderivative : AlgebraError {
    using AlgebraError::AlgebraError;
};

// an operation required (super-)homogeneous input
struct NonHomogeneousInput : AlgebraError {
    using AlgebraError::AlgebraError;
};

struct ComponentMismatch : AlgebraError {
    using AlgebraError::AlgebraError;
};

} // namespace jetalg
