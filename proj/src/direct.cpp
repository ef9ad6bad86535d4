#include "decmg/multigrid.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <stdexcept>

namespace decmg {

namespace {

Eigen::SparseMatrix<double> to_eigen_pinned(const SparseOperator& A, bool pin_vertex0) {
    if (A.rows() != A.cols()) throw std::invalid_argument("direct solver: square matrix required");
    const int n = A.rows();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nnz() + 1);
    const auto& cp = A.col_ptr();
    const auto& ri = A.row_idx();
    const auto& v = A.values();
    for (int j = 0; j < n; ++j) {
        for (int k = cp[j]; k < cp[j + 1]; ++k) {
            if (pin_vertex0 && (ri[k] == 0 || j == 0)) continue;
            trips.emplace_back(ri[k], j, v[k]);
        }
    }
    if (pin_vertex0) trips.emplace_back(0, 0, 1.0);
    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    return M;
}

} // namespace

struct PinnedDirectSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

PinnedDirectSolver::PinnedDirectSolver(const SparseOperator& A,
                                       std::vector<double> weights)
    : impl_(new Impl), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != A.rows()) {
        throw std::invalid_argument("PinnedDirectSolver: weight length mismatch");
    }
    weight_total_ = 0.0;
    for (double w : weights_) weight_total_ += w;
    Eigen::SparseMatrix<double> M = to_eigen_pinned(A, true);
    impl_->lu.compute(M);
    if (impl_->lu.info() != Eigen::Success) {
        throw std::runtime_error("PinnedDirectSolver: singular coarse factorization after pinning");
    }
}

PinnedDirectSolver::PinnedDirectSolver() = default;
PinnedDirectSolver::~PinnedDirectSolver() = default;
PinnedDirectSolver::PinnedDirectSolver(PinnedDirectSolver&&) noexcept = default;
PinnedDirectSolver& PinnedDirectSolver::operator=(PinnedDirectSolver&&) noexcept = default;

std::vector<double> PinnedDirectSolver::solve(const std::vector<double>& b) const {
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] = b[i];
    // project rhs to weighted mean zero, release the pinned row
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += weights_[i] * rhs[i];
    mean /= weight_total_;
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] -= mean;
    rhs[0] = 0.0;
    Eigen::VectorXd y = impl_->lu.solve(rhs);
    double ymean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ymean += weights_[i] * y[i];
    ymean /= weight_total_;
    std::vector<double> out(b.size());
    for (Eigen::Index i = 0; i < n; ++i) out[i] = y[i] - ymean;
    return out;
}

struct DirectSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

DirectSolver::DirectSolver(const SparseOperator& A) : impl_(new Impl) {
    Eigen::SparseMatrix<double> M = to_eigen_pinned(A, false);
    impl_->lu.compute(M);
    if (impl_->lu.info() != Eigen::Success) {
        throw std::runtime_error("DirectSolver: factorization failed");
    }
}

DirectSolver::DirectSolver() = default;
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

std::vector<double> DirectSolver::solve(const std::vector<double>& b) const {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = b[i];
    Eigen::VectorXd y = impl_->lu.solve(rhs);
    return std::vector<double>(y.data(), y.data() + y.size());
}

} // namespace decmg
