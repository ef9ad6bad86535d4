#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace decmg {

/// Sparse matrix in compressed sparse column form. Column pointers are
/// monotone and row indices are strictly increasing within each column.
/// A CSR mirror is built on finalize() so row-wise kernels (mat-vec,
/// Gauss-Seidel) do not have to scatter through columns.
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(int rows, int cols) : rows_(rows), cols_(cols), col_ptr_(cols + 1, 0) {}

    /// Assemble from (row, col, value) triplets; duplicates are summed.
    static SparseOperator from_triplets(int rows, int cols,
                                        const std::vector<int>& ri,
                                        const std::vector<int>& ci,
                                        const std::vector<double>& v,
                                        std::string tag = {});

    static SparseOperator identity(int n, std::string tag = "I");
    static SparseOperator diagonal(const std::vector<double>& d, std::string tag = {});

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }
    const std::string& tag() const { return tag_; }
    void set_tag(std::string t) { tag_ = std::move(t); }

    const std::vector<int>& col_ptr() const { return col_ptr_; }
    const std::vector<int>& row_idx() const { return row_idx_; }
    const std::vector<double>& values() const { return values_; }

    // CSR mirror (valid after finalize()).
    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& csr_values() const { return csr_values_; }

    /// Checks the CSC structural invariants (monotone pointers, strictly
    /// increasing in-column row indices, indices in range).
    bool structure_ok() const;

    SparseOperator transposed(std::string tag = {}) const;
    SparseOperator multiply(const SparseOperator& rhs, std::string tag = {}) const;
    SparseOperator scaled(double s) const;
    /// this - rhs, same shape required.
    SparseOperator minus(const SparseOperator& rhs) const;
    /// Left-multiplication by a diagonal matrix: diag(d) * this.
    SparseOperator scale_rows(const std::vector<double>& d) const;

    double max_abs() const;
    std::vector<double> diagonal_vector() const;

    /// y = A x, serial reference through the CSC arrays (scatter form).
    void apply_serial(const double* x, double* y) const;
    /// y = A x, row-parallel through the CSR mirror. Each output entry is
    /// produced by exactly one thread with a fixed in-row order, so results
    /// are bitwise identical for any thread count.
    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    /// y = A^T x (gather over columns, parallel and deterministic).
    void apply_transpose(const double* x, double* y) const;
    std::vector<double> apply_transpose(const std::vector<double>& x) const;

    /// Matrix Market coordinate-format export (1-indexed, general).
    void write_matrix_market(const std::string& path) const;

private:
    void finalize_csr();

    int rows_ = 0, cols_ = 0;
    std::vector<int> col_ptr_{0};
    std::vector<int> row_idx_;
    std::vector<double> values_;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> csr_values_;
    std::string tag_;
};

} // namespace decmg
