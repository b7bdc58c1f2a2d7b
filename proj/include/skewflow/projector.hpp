#pragma once

#include <functional>
#include <string>
#include <vector>

#include "skewflow/axioms.hpp"

namespace skewflow {

/// x -> P_k(x), a projection on the fiber {x} x R^p.
template <typename Scalar>
struct ProjectorFamily {
  int label = 1;
  Eigen::Index dim = 1;
  std::function<Matrix<Scalar>(const StateProfile<Scalar>&)> evaluate;

  Matrix<Scalar> operator()(const StateProfile<Scalar>& x) const { return evaluate(x); }

  static ProjectorFamily constant(Matrix<Scalar> projection, int label) {
    if (projection.rows() != projection.cols())
      throw std::invalid_argument("projector must be square");
    ProjectorFamily family;
    family.label = label;
    family.dim = projection.rows();
    family.evaluate = [projection = std::move(projection)](const StateProfile<Scalar>&) { return projection; };
    return family;
  }

  /// Orthogonal projection onto the listed coordinate axes.
  static ProjectorFamily coordinate(Eigen::Index dim, const std::vector<Eigen::Index>& indices, int label) {
    Matrix<Scalar> projection = Matrix<Scalar>::Zero(dim, dim);
    for (auto i : indices) {
      if (i < 0 || i >= dim)
        throw std::invalid_argument("coordinate projector index " + std::to_string(i) +
                                    " out of range for dimension " + std::to_string(dim));
      projection(i, i) = Scalar(1);
    }
    return constant(std::move(projection), label);
  }
};

/// A candidate set of 2 or 3 projector families. Compatibility with a system
/// is established by check_family_algebra and check_intertwining.
template <typename Scalar>
struct CompatibleFamilySet {
  std::vector<ProjectorFamily<Scalar>> families;

  std::size_t size() const { return families.size(); }
  const ProjectorFamily<Scalar>& operator[](std::size_t k) const { return families[k]; }

  static CompatibleFamilySet coordinate(Eigen::Index dim, const std::vector<std::vector<Eigen::Index>>& partition) {
    CompatibleFamilySet set;
    int label = 1;
    for (const auto& block : partition)
      set.families.push_back(ProjectorFamily<Scalar>::coordinate(dim, block, label++));
    return set;
  }
};

template <typename Scalar>
void require_family_shape(const CompatibleFamilySet<Scalar>& set, Eigen::Index dim) {
  if (set.size() != 2 && set.size() != 3)
    throw std::invalid_argument("family set must hold 2 or 3 projector families, got " +
                                std::to_string(set.size()));
  for (const auto& family : set.families)
    if (family.dim != dim)
      throw std::invalid_argument("projector family " + std::to_string(family.label) + " has dimension " +
                                  std::to_string(family.dim) + ", expected " + std::to_string(dim));
}

/// Numerical rank by singular-value thresholding.
template <typename Scalar>
Eigen::Index projector_rank(const Matrix<Scalar>& projection, Scalar threshold = Scalar(1e-8)) {
  Eigen::JacobiSVD<Matrix<Scalar>> svd(projection);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++rank;
  return rank;
}

/// Idempotence, partition of the identity, and pairwise annihilation at every
/// sampled state. Also reports the rank defect |sum rank P_k - p|.
template <typename Scalar>
AxiomReport<Scalar> check_family_algebra(const CompatibleFamilySet<Scalar>& set,
                                         const std::vector<StateProfile<Scalar>>& states, Scalar tol) {
  if (set.size() != 2 && set.size() != 3)
    throw std::invalid_argument("family set must hold 2 or 3 projector families");
  if (states.empty())
    throw std::invalid_argument("check_family_algebra: no sampled states");
  const Eigen::Index dim = set[0].dim;
  require_family_shape(set, dim);
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(dim, dim);

  Scalar idempotence = 0, partition = 0, annihilation = 0, rank_defect = 0;
  for (const auto& x : states) {
    std::vector<Matrix<Scalar>> p;
    for (const auto& family : set.families) {
      p.push_back(family(x));
      if (p.back().rows() != dim || p.back().cols() != dim)
        throw std::invalid_argument("projector family returned a matrix of the wrong size");
    }
    Matrix<Scalar> sum = Matrix<Scalar>::Zero(dim, dim);
    Eigen::Index rank_sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      idempotence = std::max(idempotence, (p[i] * p[i] - p[i]).cwiseAbs().maxCoeff());
      sum += p[i];
      rank_sum += projector_rank<Scalar>(p[i]);
      for (std::size_t j = 0; j < p.size(); ++j)
        if (i != j) annihilation = std::max(annihilation, (p[i] * p[j]).cwiseAbs().maxCoeff());
    }
    partition = std::max(partition, (sum - eye).cwiseAbs().maxCoeff());
    rank_defect = std::max(rank_defect, Scalar(std::abs(rank_sum - dim)));
  }
  AxiomReport<Scalar> report;
  report.residuals = {{"idempotence", idempotence},
                      {"partition", partition},
                      {"annihilation", annihilation},
                      {"rank_defect", rank_defect}};
  report.tol = tol;
  report.samples = states.size();
  report.finish();
  return report;
}

/// Residuals of P_k(phi(t,s,x)) Phi(t,s,x) v = Phi(t,s,x) P_k(x) v over sampled
/// (t, s, x) and test vectors, scaled by max(1, |Phi v|). Also reports the
/// invariance residual |(I - P_k(phi)) Phi P_k(x)|.
template <typename Scalar>
AxiomReport<Scalar> check_intertwining(const SkewEvolutionSystem<Scalar>& sys, const CompatibleFamilySet<Scalar>& set,
                                       const AxiomGrid<Scalar>& samples, const std::vector<Vector<Scalar>>& vectors,
                                       Scalar tol) {
  require_family_shape(set, sys.dim);
  if (samples.empty())
    throw std::invalid_argument("check_intertwining: empty sample grid");
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(sys.dim, sys.dim);
  Scalar intertwining = 0, invariance = 0;
  for (const auto& sample : samples) {
    const Matrix<Scalar> op = evaluate_cocycle(sys, sample.t, sample.s, sample.x);
    const auto image = evaluate_semiflow(sys, sample.t, sample.s, sample.x);
    for (const auto& family : set.families) {
      const Matrix<Scalar> p_src = family(sample.x);
      const Matrix<Scalar> p_dst = family(image);
      const Matrix<Scalar> left = p_dst * op;
      const Matrix<Scalar> right = op * p_src;
      const Scalar op_scale = std::max(Scalar(1), op.cwiseAbs().maxCoeff());
      invariance = std::max(invariance, ((eye - p_dst) * right).cwiseAbs().maxCoeff() / op_scale);
      for (const auto& v : vectors) {
        if (v.size() != sys.dim)
          throw std::invalid_argument("check_intertwining: test vector dimension mismatch");
        const Scalar scale = std::max(Scalar(1), fiber_norm(op * v));
        intertwining = std::max(intertwining, fiber_norm(left * v - right * v) / scale);
      }
    }
  }
  AxiomReport<Scalar> report;
  report.residuals = {{"intertwining", intertwining}, {"invariance", invariance}};
  report.tol = tol;
  report.samples = samples.size();
  report.finish();
  return report;
}

}  // namespace skewflow
