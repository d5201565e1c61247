#pragma once

#include <functional>
#include <vector>

#include "hypermat/matrix_core.hpp"

namespace hypermat {

enum class QuadratureRule { tanh_sinh, gauss_legendre_adaptive };

struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::tanh_sinh;
    double atol = 1e-12;
    double rtol = 1e-10;
    int max_level = 12; ///< in [4, 16]

    void validate() const;
};

/// Abscissa on (0, 1) together with 1 - u computed without cancellation.
struct UnitNode {
    double u;
    double complement;
};

struct QuadratureResult {
    ComplexMatrix value;
    double error_estimate = 0.0;
    int level = 0;
};

struct BatchQuadratureResult {
    std::vector<ComplexMatrix> values;
    double error_estimate = 0.0;
    int level = 0;
};

using UnitIntegrand = std::function<ComplexMatrix(UnitNode)>;
/// Fills out[0..k) at one node; `out` arrives sized and shaped by the caller.
using BatchIntegrand = std::function<void(UnitNode, std::vector<ComplexMatrix>& out)>;
using SquareIntegrand = std::function<ComplexMatrix(UnitNode, UnitNode)>;
using HalfLineIntegrand = std::function<ComplexMatrix(double)>;
using SegmentIntegrand = std::function<ComplexMatrix(Complex)>;

/// Entry-wise integral over (0, 1). Refines level by level until
/// ||delta||_F <= max(atol, rtol ||I||_F); throws NumericalError at max_level.
QuadratureResult integrate_unit_interval(const UnitIntegrand& f, const QuadratureConfig& cfg = {});
QuadratureResult integrate_unit_interval(const std::function<ComplexMatrix(double)>& f,
                                         const QuadratureConfig& cfg = {});

/// Several integrals sharing one set of nodes; each must meet the tolerance.
BatchQuadratureResult integrate_unit_interval_batch(const BatchIntegrand& f, std::size_t count, Eigen::Index rows,
                                                    const QuadratureConfig& cfg = {});

/// Tensor-product rule over (0, 1)^2.
QuadratureResult integrate_unit_square(const SquareIntegrand& f, const QuadratureConfig& cfg = {});

/// Integral over (0, inf) by the exp-sinh transformation.
QuadratureResult integrate_half_line(const HalfLineIntegrand& f, const QuadratureConfig& cfg = {});

/// Integral along the straight segment from 0 to z, via t = z u.
QuadratureResult integrate_segment(const SegmentIntegrand& f, Complex z, const QuadratureConfig& cfg = {});

} // namespace hypermat
