#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace ifslab {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point is outside the domain of a chart or map.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two maps that must share a chart do not.
class ChartMismatch : public Error {
public:
    using Error::Error;
};

/// A flow trajectory left the unit square by more than the clamp tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// A spec object (bump geometry, separator, map parameters) violates its
/// declared invariants.
class SpecError : public Error {
public:
    using Error::Error;
};

/// A continuum has nonempty interior at grid scale.
class NotEmptyInterior : public Error {
public:
    using Error::Error;
};

/// A continuum is not essential in the given band.
class NotAnnular : public Error {
public:
    using Error::Error;
};

/// A grid column misses a continuum; the caller must refine the resolution.
class ColumnMiss : public Error {
public:
    using Error::Error;
};

/// A family member meets the forbidden horizontal margins.
class MarginViolation : public Error {
public:
    using Error::Error;
};

/// All box counts are equal; no slope can be fitted.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// An orbit left the annulus band during iteration.
class EscapedBand : public Error {
public:
    using Error::Error;
};

/// Circle detection accepted no candidate.
class NoneFound : public Error {
public:
    using Error::Error;
};

/// A family sequence is too short or not monotone under the vertical order.
class NotMonotone : public Error {
public:
    using Error::Error;
};

/// A point cloud is not totally ordered by the coordinatewise order; carries
/// one violating pair.
class NotChain : public Error {
public:
    NotChain(const std::string& msg, std::array<double, 3> a, std::array<double, 3> b)
        : Error(msg), first(a), second(b) {}
    std::array<double, 3> first{};
    std::array<double, 3> second{};
};

/// The translation search ran out of samples; carries the best margin seen.
class BudgetExhausted : public Error {
public:
    BudgetExhausted(const std::string& msg, double margin, std::array<double, 3> t)
        : Error(msg), best_margin(margin), best_translation(t) {}
    double best_margin = 0;
    std::array<double, 3> best_translation{};
};

/// Pairwise separation verification found pairs without a witnessing column.
class VerificationFailed : public Error {
public:
    VerificationFailed(const std::string& msg, int failing)
        : Error(msg), failing_pairs(failing) {}
    int failing_pairs = 0;
};

}  // namespace ifslab
