#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace tgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Bad input: wrong dimensions, missing parameters, invalid configuration.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A radicand that should be a squared length came out negative.
struct ComplexBranchError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iterative solve did not converge, or a matrix that must be invertible is not.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tube, collinearity and gradient-line flavour: n, f, p.
enum class Kind { neutral, future, past };

std::string to_string(Kind k);
// Accepts "n"/"f"/"p" and the long names.
Kind kind_from_string(const std::string& s);

// Dense rank-3 array, index order (i,k,l), row-major.
struct Tensor3 {
    int d = 0;
    std::vector<double> v;

    Tensor3() = default;
    explicit Tensor3(int dim) : d(dim), v(static_cast<size_t>(dim) * dim * dim, 0.0) {}

    double& operator()(int i, int k, int l) { return v[(static_cast<size_t>(i) * d + k) * d + l]; }
    double operator()(int i, int k, int l) const { return v[(static_cast<size_t>(i) * d + k) * d + l]; }

    double max_abs() const;
    // max |T(i,k,l) - T(i,l,k)|
    double lower_asymmetry() const;
};

// Dense rank-4 array, index order (i,k,l,m), row-major.
struct Tensor4 {
    int d = 0;
    std::vector<double> v;

    Tensor4() = default;
    explicit Tensor4(int dim) : d(dim), v(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int i, int k, int l, int m) {
        return v[((static_cast<size_t>(i) * d + k) * d + l) * d + m];
    }
    double operator()(int i, int k, int l, int m) const {
        return v[((static_cast<size_t>(i) * d + k) * d + l) * d + m];
    }

    double max_abs() const;
};

double max_abs_diff(const Tensor3& a, const Tensor3& b);
double max_abs_diff(const Tensor4& a, const Tensor4& b);

}  // namespace tgeom
