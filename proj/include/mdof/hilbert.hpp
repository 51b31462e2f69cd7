#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mdof/errors.hpp"

namespace mdof {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Tolerances used across the library. Dimensions stay <= 4096, so round-off
// sits far below all three.
constexpr double kAlgebraTol = 1e-12;  // algebraic identities
constexpr double kMatrixTol  = 1e-10;  // Hermiticity / PSD / trace checks
constexpr double kMetricTol  = 1e-9;   // metric comparisons

enum class Dof { polarization, oam, frequency };

const char* dof_name(Dof d);

struct Factor {
    Dof dof;
    int dim;

    bool operator==(const Factor&) const = default;
};

// Ordered list of tensor factors. The first factor is the most significant
// index (row-major Kronecker convention); concatenation keeps the left
// operand's factors first.
class HilbertLabel {
public:
    HilbertLabel() = default;
    explicit HilbertLabel(std::vector<Factor> factors);

    static HilbertLabel qubits(Dof dof, int count);
    static HilbertLabel single(Dof dof, int dim);

    int dim() const { return dim_; }
    int factor_count() const { return static_cast<int>(factors_.size()); }
    const Factor& factor(int i) const;
    const std::vector<Factor>& factors() const { return factors_; }

    bool all_qubits() const;
    HilbertLabel concat(const HilbertLabel& rhs) const;

    // Indices of the factors carrying the given degree of freedom, in order.
    std::vector<int> factors_of(Dof dof) const;

    bool operator==(const HilbertLabel&) const = default;

private:
    std::vector<Factor> factors_;
    int dim_ = 1;
};

struct StateVector {
    HilbertLabel label;
    Vec amplitudes;

    StateVector() = default;
    StateVector(HilbertLabel l, Vec a);

    double norm() const { return amplitudes.norm(); }
    bool is_normalized(double tol = kAlgebraTol) const;
};

struct DensityMatrix {
    HilbertLabel label;
    Mat entries;
    // Trace < 1 is permitted when this flag is set (survival-probability
    // bookkeeping for lossy evolution).
    bool sub_normalized = false;

    DensityMatrix() = default;
    DensityMatrix(HilbertLabel l, Mat m);

    double trace_real() const { return entries.trace().real(); }
    double hermiticity_residual() const;
    double min_eigenvalue() const;
    bool is_valid(double herm_tol = kMatrixTol, double trace_tol = kMatrixTol,
                  double psd_tol = kMatrixTol) const;
};

struct Operator {
    HilbertLabel label;
    Mat entries;

    Operator() = default;
    Operator(HilbertLabel l, Mat m);

    bool is_hermitian(double tol = kMatrixTol) const;
};

Mat kron(const Mat& a, const Mat& b);

StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

// Unit-norm copy; throws ZeroVector when the norm is below 1e-15.
StateVector normalize(const StateVector& v);

DensityMatrix density_from_pure(const StateVector& psi);

// Trace out every factor not listed in `keep` (kept factors stay in their
// original relative order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
DensityMatrix partial_trace_state(const StateVector& psi, const std::vector<int>& keep);

// Lift a single-factor operator to the full space: I x ... x op x ... x I.
Operator embed(const Operator& op, const HilbertLabel& space, int factor_index);

// op acting on one factor of a full-space matrix/vector, computed without
// materialising the embedded operator.
Mat apply_factor_left(const Mat& op, const Mat& m, const HilbertLabel& space, int factor_index);
Vec apply_factor(const Mat& op, const Vec& v, const HilbertLabel& space, int factor_index);

} // namespace mdof
