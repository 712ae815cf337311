#pragma once

#include <stdexcept>
#include <string>

namespace tl {

// every failure carries the name of its error kind so the CLI can report it
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + (msg.empty() ? "" : ": " + msg)), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define TL_DEFINE_ERROR(Name)                                           \
  struct Name : Error {                                                 \
    explicit Name(const std::string& msg = "") : Error(#Name, msg) {}   \
  };

TL_DEFINE_ERROR(NotAUnit)
TL_DEFINE_ERROR(NoIntegerSolution)
TL_DEFINE_ERROR(NotSymmetric)
TL_DEFINE_ERROR(ShapeMismatch)
TL_DEFINE_ERROR(NotAComplex)
TL_DEFINE_ERROR(NotAChainMap)
TL_DEFINE_ERROR(NotAcyclic)
TL_DEFINE_ERROR(NotEquivalence)
TL_DEFINE_ERROR(RouteMismatch)
TL_DEFINE_ERROR(NonSymmetricHomologyPairing)
TL_DEFINE_ERROR(DimensionNotDivisibleBy4)
TL_DEFINE_ERROR(NotUnimodular)
TL_DEFINE_ERROR(NotEven)
TL_DEFINE_ERROR(NotFiltered)
TL_DEFINE_ERROR(BadBounds)
TL_DEFINE_ERROR(NotAdmissible)
TL_DEFINE_ERROR(AlphaNotInvertible)
TL_DEFINE_ERROR(NotContractible)
TL_DEFINE_ERROR(NotSplit)
TL_DEFINE_ERROR(UnknownSuite)
TL_DEFINE_ERROR(SchemaError)

#undef TL_DEFINE_ERROR

}  // namespace tl
