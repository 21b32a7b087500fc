#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "mifht/error.hpp"

namespace mifht {

enum class ThetaClass {
  spd_symmetric,
  symmetric_invertible_diagonal,
  invertible_diagonal,
  uniform,
  degenerate_diagonal,
};

[[nodiscard]] constexpr std::string_view to_string(ThetaClass c) noexcept {
  switch (c) {
    case ThetaClass::spd_symmetric: return "spd-symmetric";
    case ThetaClass::symmetric_invertible_diagonal: return "symmetric-invertible-diagonal";
    case ThetaClass::invertible_diagonal: return "invertible-diagonal";
    case ThetaClass::uniform: return "uniform";
    case ThetaClass::degenerate_diagonal: return "degenerate-diagonal";
  }
  return "unknown";
}

/// Real n x n interaction matrix, split as diagonal plus off-diagonal part.
/// Classification precedence: degenerate diagonal, uniform (all ones, n >= 2),
/// symmetric positive definite, symmetric, general invertible diagonal.
class ThetaMatrix {
 public:
  ThetaMatrix() = default;

  explicit ThetaMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
      throw Error(ErrorKind::schema, "interaction matrix must be square and non-empty");
    if (!entries_.allFinite()) throw Error(ErrorKind::non_finite, "interaction matrix has non-finite entries");
    class_ = classify();
  }

  [[nodiscard]] static ThetaMatrix uniform(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    return ThetaMatrix(Eigen::MatrixXd::Ones(m, m));
  }
  [[nodiscard]] static ThetaMatrix identity(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    return ThetaMatrix(Eigen::MatrixXd::Identity(m, m));
  }

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  [[nodiscard]] double operator()(std::size_t j, std::size_t k) const {
    return entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  [[nodiscard]] ThetaClass classification() const noexcept { return class_; }

  [[nodiscard]] Eigen::MatrixXd diagonal_part() const { return entries_.diagonal().asDiagonal(); }
  [[nodiscard]] Eigen::MatrixXd off_diagonal_part() const { return entries_ - diagonal_part(); }
  [[nodiscard]] bool is_diagonal() const { return off_diagonal_part().cwiseAbs().maxCoeff() == 0.0; }

  [[nodiscard]] bool is_symmetric() const {
    const double scale = entries_.cwiseAbs().maxCoeff();
    return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
  }

  /// Throws DegenerateDiagonalError when some theta_jj = 0.
  void require_invertible_diagonal() const {
    for (Eigen::Index j = 0; j < entries_.rows(); ++j)
      if (entries_(j, j) == 0.0)
        throw Error(ErrorKind::degenerate_diagonal,
                    "theta_" + std::to_string(j + 1) + std::to_string(j + 1) +
                        " = 0; degenerate-diagonal interaction matrices are not supported");
  }

  void require_symmetric() const {
    if (!is_symmetric()) throw Error(ErrorKind::symmetry, "interaction matrix is not symmetric");
  }

  /// Smallest eigenvalue of the symmetric part.
  [[nodiscard]] double min_symmetric_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (entries_ + entries_.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  [[nodiscard]] ThetaClass classify() const {
    for (Eigen::Index j = 0; j < entries_.rows(); ++j)
      if (entries_(j, j) == 0.0) return ThetaClass::degenerate_diagonal;
    if (entries_.rows() >= 2 && (entries_.array() == 1.0).all()) return ThetaClass::uniform;
    if (is_symmetric()) {
      Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (entries_ + entries_.transpose()));
      if (llt.info() == Eigen::Success) return ThetaClass::spd_symmetric;
      return ThetaClass::symmetric_invertible_diagonal;
    }
    return ThetaClass::invertible_diagonal;
  }

  Eigen::MatrixXd entries_;
  ThetaClass class_ = ThetaClass::degenerate_diagonal;
};

}  // namespace mifht

