#include "qcoalg/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcoalg {

namespace {

std::string fmt_deviation(double d) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << d;
    return os.str();
}

using EigenCMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenCMat> as_eigen(const CMatrix& m) {
    return Eigen::Map<const EigenCMat>(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                                       static_cast<Eigen::Index>(m.cols()));
}

void require_square(const CMatrix& m, const char* what) {
    if (!m.is_square()) {
        std::ostringstream os;
        os << what << " requires a square matrix, got " << m.rows() << "x" << m.cols();
        throw ShapeError(os.str());
    }
}

void require_finite(const CMatrix& m, const char* what) {
    if (!m.has_finite_entries()) {
        throw ValidationError(std::string(what) + ": matrix has non-finite entries");
    }
}

}  // namespace

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    CMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("from_rows: ragged row lengths");
        std::size_t j = 0;
        for (const Complex& v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool CMatrix::has_finite_entries() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double CMatrix::max_abs_deviation_from_identity() const {
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const Complex expect = (i == j) ? Complex(1.0) : Complex(0.0);
            dev = std::max(dev, std::abs(at(i, j) - expect));
        }
    }
    return dev;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix addition: shape mismatch");
    CMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix subtraction: shape mismatch");
    CMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
    return out;
}

CMatrix CMatrix::operator*(Complex scalar) const {
    CMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * scalar;
    return out;
}

CMatrix dagger(const CMatrix& m) {
    CMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(j, i) = std::conj(m.at(i, j));
    return out;
}

CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "mat_mul: shape mismatch " << a.rows() << "x" << a.cols() << " * " << b.rows() << "x"
           << b.cols();
        throw ShapeError(os.str());
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
        }
    }
    return out;
}

Complex trace(const CMatrix& m) {
    require_square(m, "trace");
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
}

double hermiticity_deviation(const CMatrix& m) {
    require_square(m, "hermiticity check");
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            dev = std::max(dev, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
    return dev;
}

UnitaryOp::UnitaryOp(CMatrix m, double tol) : matrix_(std::move(m)) {
    require_square(matrix_, "UnitaryOp");
    require_finite(matrix_, "UnitaryOp");
    const double dev = mat_mul(dagger(matrix_), matrix_).max_abs_deviation_from_identity();
    if (dev > tol) {
        throw ValidationError("unitarity deviation " + fmt_deviation(dev));
    }
}

Effect::Effect(CMatrix m, double tol) : matrix_(std::move(m)) {
    require_square(matrix_, "Effect");
    require_finite(matrix_, "Effect");
    const double hdev = hermiticity_deviation(matrix_);
    if (hdev > tol) {
        throw ValidationError("effect hermiticity deviation " + fmt_deviation(hdev));
    }
    const HermitianEigen eig = eig_hermitian(matrix_, tol);
    const double lo = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    const double hi = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    if (lo < -tol || hi > 1.0 + tol) {
        throw ValidationError("effect spectrum outside [0,1]: eigenvalue range [" +
                              fmt_deviation(lo) + ", " + fmt_deviation(hi) + "]");
    }
}

DensityMatrix::DensityMatrix(CMatrix m, double tol) : matrix_(std::move(m)) {
    require_square(matrix_, "DensityMatrix");
    require_finite(matrix_, "DensityMatrix");
    const double hdev = hermiticity_deviation(matrix_);
    if (hdev > tol) {
        throw ValidationError("density hermiticity deviation " + fmt_deviation(hdev));
    }
    const double tr_dev = std::abs(trace(matrix_) - Complex(1.0));
    if (tr_dev > tol) {
        throw ValidationError("density trace deviation " + fmt_deviation(tr_dev));
    }
    const HermitianEigen eig = eig_hermitian(matrix_, tol);
    const double lambda_min = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    if (lambda_min < -tol) {
        throw ValidationError("density not positive semidefinite: smallest eigenvalue " +
                              fmt_deviation(lambda_min));
    }
}

DensityMatrix conjugate_by(const DensityMatrix& rho, const UnitaryOp& u) {
    if (rho.dim() != u.dim()) {
        std::ostringstream os;
        os << "conjugate_by: dimension mismatch, state " << rho.dim() << " vs operator " << u.dim();
        throw ShapeError(os.str());
    }
    return DensityMatrix(mat_mul(mat_mul(u.matrix(), rho.matrix()), dagger(u.matrix())));
}

DensityMatrix mix_density(double alpha, const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw ShapeError("mix_density: dimension mismatch");
    if (alpha < 0.0 || alpha > 1.0) throw ValidationError("mix_density: weight outside [0,1]");
    return DensityMatrix(a.matrix() * Complex(alpha) + b.matrix() * Complex(1.0 - alpha));
}

HermitianEigen eig_hermitian(const CMatrix& m, double tol) {
    require_square(m, "eig_hermitian");
    require_finite(m, "eig_hermitian");
    const double hdev = hermiticity_deviation(m);
    if (hdev > tol) {
        throw ValidationError("eig_hermitian: hermiticity deviation " + fmt_deviation(hdev));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(m.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(as_eigen(m));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eig_hermitian: eigendecomposition did not converge");
    }
    HermitianEigen out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.eigenvectors = CMatrix(m.rows(), m.rows());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.eigenvectors.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                solver.eigenvectors()(i, j);
    return out;
}

std::size_t real_rank(const std::vector<std::vector<double>>& vectors, double tol) {
    if (vectors.empty()) return 0;
    const std::size_t n = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != n) throw ShapeError("real_rank: vectors have unequal lengths");
    }
    if (n == 0) return 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = tol * sv(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

}  // namespace qcoalg
