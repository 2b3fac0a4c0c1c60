#pragma once

#include <stdexcept>
#include <vector>

#include "jetcalc/reduction.hpp"

namespace jetcalc {

/// Built-in evaluation recipes for the factorization and equivariance
/// verifiers. Natural operators consume jets only through equivariant
/// primitives (curvature differentials, tensor products, contractions,
/// symmetrizations); the non-natural probes read raw jet coordinates and
/// serve as negative controls.
inline std::vector<SampleOperator> builtinOperators() {
  std::vector<SampleOperator> ops;

  // R[Lambda] at the origin.
  ops.push_back({"curvC0", true, 1, 0, -1,
                 [](const RTensor& lam, const RTensor&, const RTensor*) {
                   return formalCurvatureClassical(lam, 0);
                 }});

  // Covariant differential of R[K] at the origin.
  ops.push_back({"covCurvL1", true, 0, 2, -1,
                 [](const RTensor& lam, const RTensor& k, const RTensor*) {
                   return formalCurvatureLinear(&lam, k, 1);
                 }});

  // Second covariant differential of R[Lambda], symmetrized over the two
  // appended slots.
  ops.push_back({"symCovCurvC2", true, 3, 0, -1,
                 [](const RTensor& lam, const RTensor&, const RTensor*) {
                   return formalCurvatureClassical(lam, 2).symmetrizedOver({4, 5}, false);
                 }});

  // Fiber trace of R[K] at the origin, squared as a tensor product.
  ops.push_back({"trR2", true, 0, 1, -1,
                 [](const RTensor&, const RTensor& k, const RTensor*) {
                   RTensor f = formalCurvatureLinear(static_cast<const RTensor*>(nullptr), k, 0).contracted(0, 1);
                   return tensorProduct(f, f);
                 }});

  // Ricci-type contraction of R[Lambda] at the origin.
  ops.push_back({"ricciC0", true, 1, 0, -1,
                 [](const RTensor& lam, const RTensor&, const RTensor*) {
                   return formalCurvatureClassical(lam, 0).contracted(0, 2);
                 }});

  // Contracted covariant differentials of both curvatures, multiplied.
  ops.push_back({"mixedWU1", true, 2, 2, -1,
                 [](const RTensor& lam, const RTensor& k, const RTensor*) {
                   RTensor a = formalCurvatureClassical(lam, 1).contracted(0, 1);
                   RTensor b = formalCurvatureLinear(&lam, k, 1).contracted(0, 1);
                   return tensorProduct(a, b);
                 }});

  // Second covariant differential of the field at the origin.
  ops.push_back({"covPhi2", true, 1, 1, 2,
                 [](const RTensor& lam, const RTensor& k, const RTensor* phi) {
                   bool hasFiber = false;
                   for (SlotKind s : phi->slots()) hasFiber |= slotIsFiber(s);
                   return iteratedCovariantDifferential(*phi, hasFiber ? &k : nullptr,
                                                        &lam, 2)
                       .originData();
                 }});

  // Field value tensored with R[K] at the origin.
  ops.push_back({"phiTensorU0", true, 0, 1, 0,
                 [](const RTensor&, const RTensor& k, const RTensor* phi) {
                   return tensorProduct(phi->originData(),
                                        formalCurvatureLinear(static_cast<const RTensor*>(nullptr), k, 0));
                 }});

  // Non-natural probe: the raw jet coordinate K_1^1_{1,11} as a scalar.
  ops.push_back({"rawK111d11", false, 0, 2, -1,
                 [](const RTensor&, const RTensor& k, const RTensor*) {
                   RTensor out(k.dim(), k.fiberDim(), {}, 0);
                   out.atFlat(0) = RSeries::constant(
                       k.dim(), 0, k.jetCoordinate({0, 0, 0}, MultiIndex({0, 0})));
                   return out;
                 }});

  // Non-natural probe on the field: raw first-component coordinate.
  ops.push_back({"rawPhi1d1", false, 0, 0, 1,
                 [](const RTensor&, const RTensor&, const RTensor* phi) {
                   std::vector<int> idx(phi->slotCount(), 0);
                   RTensor out(phi->dim(), phi->fiberDim(), {}, 0);
                   out.atFlat(0) = RSeries::constant(
                       phi->dim(), 0, phi->jetCoordinate(idx, MultiIndex({0})));
                   return out;
                 }});

  return ops;
}

inline const SampleOperator& findOperator(const std::vector<SampleOperator>& ops,
                                          const std::string& name) {
  for (const auto& op : ops)
    if (op.name == name) return op;
  throw std::invalid_argument("unknown sample operator '" + name + "'");
}

}  // namespace jetcalc
