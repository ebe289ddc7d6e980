#ifndef GELKIT_DATASET_HPP
#define GELKIT_DATASET_HPP

#include <string>

#include "gelkit/types.hpp"

namespace gelkit {

// Immutable rectangular sample: n rows of Nx-dimensional observations.
class Dataset {
public:
    explicit Dataset(Matrix rows);

    /// Load comma-separated reals, one observation per line. A first line
    /// that does not parse as numbers is treated as a header and skipped.
    static Dataset from_csv(const std::string& path);

    int n() const { return static_cast<int>(rows_.rows()); }
    int n_x() const { return static_cast<int>(rows_.cols()); }
    const Matrix& rows() const { return rows_; }
    Vector row(int i) const { return rows_.row(i).transpose(); }

private:
    Matrix rows_;
};

} // namespace gelkit

#endif
