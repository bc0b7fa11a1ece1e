#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qcoalg/errors.hpp"

namespace qcoalg {

using Complex = std::complex<double>;

// Default absolute tolerance for validating unitarity, Hermiticity, trace
// normalization and positive semidefiniteness.
inline constexpr double kValidationTol = 1e-9;

// Relative threshold for numerical rank decisions: singular values below
// kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-8;

/// Dense complex matrix, row-major, immutable by convention: every operation
/// returns a fresh value.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    // Row-by-row construction, e.g. CMatrix::from_rows({{1, 0}, {0, 1}}).
    static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static CMatrix identity(std::size_t n);
    static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    const Complex& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Complex& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return data_; }
    std::vector<Complex>& entries() { return data_; }

    bool has_finite_entries() const;
    // Largest |m_ij - I_ij|, used by validation checks.
    double max_abs_deviation_from_identity() const;
    double max_abs() const;

    CMatrix operator+(const CMatrix& other) const;
    CMatrix operator-(const CMatrix& other) const;
    CMatrix operator*(Complex scalar) const;

    bool operator==(const CMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CMatrix dagger(const CMatrix& m);
CMatrix mat_mul(const CMatrix& a, const CMatrix& b);
Complex trace(const CMatrix& m);

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return mat_mul(a, b); }

// Hermiticity deviation max |m - m†|; ShapeError if not square.
double hermiticity_deviation(const CMatrix& m);

/// Square matrix validated to satisfy ||U†U - I||_max <= tol.
class UnitaryOp {
public:
    explicit UnitaryOp(CMatrix m, double tol = kValidationTol);

    const CMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    CMatrix matrix_;
};

/// Hermitian operator with spectrum in [0, 1] (within tol): a fuzzy yes-no
/// measurement.
class Effect {
public:
    explicit Effect(CMatrix m, double tol = kValidationTol);

    const CMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    CMatrix matrix_;
};

/// Positive semidefinite trace-one Hermitian matrix: a mixed quantum state.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix m, double tol = kValidationTol);

    const CMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    CMatrix matrix_;
};

// U rho U†. Trace and positivity are preserved; the result is re-validated.
DensityMatrix conjugate_by(const DensityMatrix& rho, const UnitaryOp& u);

// alpha * a + (1 - alpha) * b, alpha in [0, 1].
DensityMatrix mix_density(double alpha, const DensityMatrix& a, const DensityMatrix& b);

struct HermitianEigen {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // orthonormal columns, same order
};

// Spectral decomposition of a Hermitian matrix. ValidationError if the input
// deviates from Hermitian by more than tol.
HermitianEigen eig_hermitian(const CMatrix& m, double tol = kValidationTol);

// Numerical rank of a list of equal-length real vectors: count of singular
// values above tol * sigma_max. Empty input has rank 0.
std::size_t real_rank(const std::vector<std::vector<double>>& vectors, double tol = kRankTol);

}  // namespace qcoalg
