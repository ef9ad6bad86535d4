#include "decmg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace decmg {

SparseOperator SparseOperator::from_triplets(int rows, int cols,
                                             const std::vector<int>& ri,
                                             const std::vector<int>& ci,
                                             const std::vector<double>& v,
                                             std::string tag) {
    if (ri.size() != ci.size() || ri.size() != v.size()) {
        throw std::invalid_argument("from_triplets: length mismatch");
    }
    SparseOperator A(rows, cols);
    A.tag_ = std::move(tag);

    const std::size_t nnz_in = ri.size();
    std::vector<std::size_t> order(nnz_in);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ci[a] != ci[b]) return ci[a] < ci[b];
        return ri[a] < ri[b];
    });

    A.row_idx_.reserve(nnz_in);
    A.values_.reserve(nnz_in);
    std::vector<int> count(cols, 0);
    int prev_col = -1, prev_row = -1;
    for (std::size_t k = 0; k < nnz_in; ++k) {
        const std::size_t s = order[k];
        if (ri[s] < 0 || ri[s] >= rows || ci[s] < 0 || ci[s] >= cols) {
            throw std::out_of_range("from_triplets: index out of range");
        }
        if (ci[s] == prev_col && ri[s] == prev_row) {
            A.values_.back() += v[s];  // duplicate entry, accumulate
        } else {
            A.row_idx_.push_back(ri[s]);
            A.values_.push_back(v[s]);
            ++count[ci[s]];
            prev_col = ci[s];
            prev_row = ri[s];
        }
    }
    A.col_ptr_.assign(cols + 1, 0);
    for (int j = 0; j < cols; ++j) A.col_ptr_[j + 1] = A.col_ptr_[j] + count[j];
    A.finalize_csr();
    return A;
}

SparseOperator SparseOperator::identity(int n, std::string tag) {
    SparseOperator A(n, n);
    A.tag_ = std::move(tag);
    A.row_idx_.resize(n);
    A.values_.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        A.row_idx_[i] = i;
        A.col_ptr_[i + 1] = i + 1;
    }
    A.finalize_csr();
    return A;
}

SparseOperator SparseOperator::diagonal(const std::vector<double>& d, std::string tag) {
    const int n = static_cast<int>(d.size());
    SparseOperator A = identity(n, std::move(tag));
    A.values_ = d;
    A.csr_values_ = d;
    return A;
}

bool SparseOperator::structure_ok() const {
    if (static_cast<int>(col_ptr_.size()) != cols_ + 1) return false;
    if (col_ptr_.front() != 0 || col_ptr_.back() != static_cast<int>(row_idx_.size()))
        return false;
    for (int j = 0; j < cols_; ++j) {
        if (col_ptr_[j] > col_ptr_[j + 1]) return false;
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            if (row_idx_[k] < 0 || row_idx_[k] >= rows_) return false;
            if (k > col_ptr_[j] && row_idx_[k] <= row_idx_[k - 1]) return false;
        }
    }
    return true;
}

void SparseOperator::finalize_csr() {
    row_ptr_.assign(rows_ + 1, 0);
    col_idx_.resize(values_.size());
    csr_values_.resize(values_.size());
    for (int r : row_idx_) ++row_ptr_[r + 1];
    for (int i = 0; i < rows_; ++i) row_ptr_[i + 1] += row_ptr_[i];
    std::vector<int> next(row_ptr_.begin(), row_ptr_.end() - 1);
    for (int j = 0; j < cols_; ++j) {
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            const int dst = next[row_idx_[k]]++;
            col_idx_[dst] = j;
            csr_values_[dst] = values_[k];
        }
    }
}

SparseOperator SparseOperator::transposed(std::string tag) const {
    SparseOperator T(cols_, rows_);
    T.tag_ = tag.empty() ? tag_ + "^T" : std::move(tag);
    // CSR arrays of A are exactly the CSC arrays of A^T.
    T.col_ptr_ = row_ptr_;
    T.row_idx_ = col_idx_;
    T.values_ = csr_values_;
    T.finalize_csr();
    return T;
}

SparseOperator SparseOperator::multiply(const SparseOperator& rhs, std::string tag) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("multiply: shape mismatch");
    const int m = rows_, n = rhs.cols_;
    std::vector<int> ri, ci;
    std::vector<double> v;
    std::vector<double> acc(m, 0.0);
    std::vector<int> marker(m, -1);
    std::vector<int> touched;
    for (int j = 0; j < n; ++j) {
        touched.clear();
        for (int kb = rhs.col_ptr_[j]; kb < rhs.col_ptr_[j + 1]; ++kb) {
            const int k = rhs.row_idx_[kb];
            const double bv = rhs.values_[kb];
            for (int ka = col_ptr_[k]; ka < col_ptr_[k + 1]; ++ka) {
                const int i = row_idx_[ka];
                if (marker[i] != j) {
                    marker[i] = j;
                    acc[i] = 0.0;
                    touched.push_back(i);
                }
                acc[i] += values_[ka] * bv;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int i : touched) {
            ri.push_back(i);
            ci.push_back(j);
            v.push_back(acc[i]);
        }
    }
    return from_triplets(m, n, ri, ci, v, std::move(tag));
}

SparseOperator SparseOperator::scaled(double s) const {
    SparseOperator A = *this;
    for (double& x : A.values_) x *= s;
    for (double& x : A.csr_values_) x *= s;
    return A;
}

SparseOperator SparseOperator::minus(const SparseOperator& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("minus: shape mismatch");
    std::vector<int> ri, ci;
    std::vector<double> v;
    for (int j = 0; j < cols_; ++j) {
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            ri.push_back(row_idx_[k]); ci.push_back(j); v.push_back(values_[k]);
        }
        for (int k = rhs.col_ptr_[j]; k < rhs.col_ptr_[j + 1]; ++k) {
            ri.push_back(rhs.row_idx_[k]); ci.push_back(j); v.push_back(-rhs.values_[k]);
        }
    }
    return from_triplets(rows_, cols_, ri, ci, v, tag_);
}

SparseOperator SparseOperator::scale_rows(const std::vector<double>& d) const {
    if (static_cast<int>(d.size()) != rows_)
        throw std::invalid_argument("scale_rows: length mismatch");
    SparseOperator A = *this;
    for (std::size_t k = 0; k < A.values_.size(); ++k) A.values_[k] *= d[A.row_idx_[k]];
    A.finalize_csr();
    return A;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::fabs(x));
    return m;
}

std::vector<double> SparseOperator::diagonal_vector() const {
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (int j = 0; j < cols_ && j < rows_; ++j) {
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            if (row_idx_[k] == j) { d[j] = values_[k]; break; }
            if (row_idx_[k] > j) break;
        }
    }
    return d;
}

void SparseOperator::apply_serial(const double* x, double* y) const {
    std::fill(y, y + rows_, 0.0);
    for (int j = 0; j < cols_; ++j) {
        const double xj = x[j];
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            y[row_idx_[k]] += values_[k] * xj;
        }
    }
}

void SparseOperator::apply(const double* x, double* y) const {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            s += csr_values_[k] * x[col_idx_[k]];
        }
        y[i] = s;
    }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("apply: length mismatch for " + tag_);
    std::vector<double> y(rows_);
    apply(x.data(), y.data());
    return y;
}

void SparseOperator::apply_transpose(const double* x, double* y) const {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            s += values_[k] * x[row_idx_[k]];
        }
        y[j] = s;
    }
}

std::vector<double> SparseOperator::apply_transpose(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != rows_)
        throw std::invalid_argument("apply_transpose: length mismatch for " + tag_);
    std::vector<double> y(cols_);
    apply_transpose(x.data(), y.data());
    return y;
}

void SparseOperator::write_matrix_market(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
    if (!tag_.empty()) std::fprintf(f, "%% %s\n", tag_.c_str());
    std::fprintf(f, "%d %d %lld\n", rows_, cols_, static_cast<long long>(nnz()));
    for (int j = 0; j < cols_; ++j) {
        for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
            std::fprintf(f, "%d %d %.17g\n", row_idx_[k] + 1, j + 1, values_[k]);
        }
    }
    std::fclose(f);
}

} // namespace decmg
