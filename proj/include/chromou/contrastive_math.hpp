#pragma once

// Loss functions for silhouette / camouflage alignment, over caller-supplied
// embeddings. Batches are matrices with one embedding per row; row i of the
// camouflage batch and row i of the silhouette batch form a positive pair and
// every other silhouette row is a negative for it.

#include <Eigen/Core>
#include <cmath>
#include <span>

#include "chromou/errors.hpp"

namespace chromou::contrastive {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Elementwise mean of the patch embeddings (rows).
template <typename Derived>
RowVector<typename Derived::Scalar> avg_pool(const Eigen::MatrixBase<Derived>& patches) {
  if (patches.rows() == 0 || patches.cols() == 0) throw InputError("average pooling needs at least one patch");
  if (!patches.allFinite()) throw InputError("patch embeddings must be finite");
  return patches.colwise().mean();
}

namespace detail {

template <typename DC, typename DO, typename Scalar>
void check_batch(const Eigen::MatrixBase<DC>& camouflage, const Eigen::MatrixBase<DO>& silhouette, Scalar tau) {
  if (!(tau > Scalar(0))) throw ParameterError("temperature must be positive");
  if (camouflage.rows() < 2) throw InputError("contrastive batch needs at least two pairs");
  if (camouflage.rows() != silhouette.rows() || camouflage.cols() != silhouette.cols() || camouflage.cols() < 1) {
    throw InputError("camouflage and silhouette batches must share shape");
  }
  if (!camouflage.allFinite() || !silhouette.allFinite()) throw InputError("embeddings must be finite");
}

// Row-wise log-sum-exp of the similarity logits x_C_i . x_O_j / tau.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_logsumexp(const Matrix<Scalar>& logits) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> peak = logits.rowwise().maxCoeff();
  return peak.array() + (logits.colwise() - peak).array().exp().rowwise().sum().log();
}

}  // namespace detail

/// L = -sum_i log( h(c_i, o_i) / sum_j h(c_i, o_j) ), h(x, y) = exp(x.y / tau),
/// evaluated with log-sum-exp. Embeddings are used as given, not normalised.
template <typename DC, typename DO>
typename DC::Scalar info_nce(const Eigen::MatrixBase<DC>& camouflage, const Eigen::MatrixBase<DO>& silhouette,
                             typename DC::Scalar tau) {
  using Scalar = typename DC::Scalar;
  detail::check_batch(camouflage, silhouette, tau);
  const Matrix<Scalar> logits = (camouflage * silhouette.transpose()) / tau;
  return (detail::row_logsumexp<Scalar>(logits) - logits.diagonal()).sum();
}

template <typename Scalar>
struct InfoNceGradient {
  Scalar loss;
  Matrix<Scalar> d_camouflage;
  Matrix<Scalar> d_silhouette;
};

/// Loss together with its gradient with respect to both embedding batches.
template <typename DC, typename DO>
InfoNceGradient<typename DC::Scalar> info_nce_gradient(const Eigen::MatrixBase<DC>& camouflage,
                                                       const Eigen::MatrixBase<DO>& silhouette,
                                                       typename DC::Scalar tau) {
  using Scalar = typename DC::Scalar;
  detail::check_batch(camouflage, silhouette, tau);
  const Matrix<Scalar> logits = (camouflage * silhouette.transpose()) / tau;
  const auto lse = detail::row_logsumexp<Scalar>(logits);
  // dL/dlogits = softmax(logits) - I
  Matrix<Scalar> residual = (logits.colwise() - lse).array().exp().matrix();
  residual.diagonal().array() -= Scalar(1);
  return {(lse - logits.diagonal()).sum(), residual * silhouette / tau, residual.transpose() * camouflage / tau};
}

/// -sum_i log p_i over the response tokens.
template <typename Scalar>
Scalar autoregressive_nll(std::span<const Scalar> token_probs) {
  Scalar total(0);
  for (Scalar p : token_probs) {
    if (!(p > Scalar(0)) || p > Scalar(1)) throw InputError("token probabilities must lie in (0, 1]");
    total -= std::log(p);
  }
  return total;
}

/// alpha * l_con + (1 - alpha) * l_vlm, alpha in [0, 1].
template <typename Scalar>
Scalar total_loss(Scalar l_con, Scalar l_vlm, Scalar alpha) {
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw ParameterError("alpha must lie in [0, 1]");
  if (alpha == Scalar(0)) return l_vlm;
  if (alpha == Scalar(1)) return l_con;
  return alpha * l_con + (Scalar(1) - alpha) * l_vlm;
}

}  // namespace chromou::contrastive
