#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gaussopt {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

enum class Kind { boson, fermion };
enum class Basis { qp, aab };

inline const char* to_string(Kind k) { return k == Kind::boson ? "boson" : "fermion"; }
inline const char* to_string(Basis b) { return b == Basis::qp ? "qp" : "aab"; }

enum class ErrorCode {
    DimensionMismatch,
    InvalidState,
    NotInGroup,
    RankDeficient,
    DifferentComponent,
    AmbiguousSqrt,
    NonNormalizable,
    PureModeDivergence,
    SingularDistribution,
    SingularPositionBlock,
    NotPositive,
    NotRestricted,
    DegenerateSymplecticForm,
    TooManyModes,
    ParseError,
    InvalidConfig,
};

inline const char* to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DifferentComponent: return "DifferentComponent";
    case ErrorCode::AmbiguousSqrt: return "AmbiguousSqrt";
    case ErrorCode::NonNormalizable: return "NonNormalizable";
    case ErrorCode::PureModeDivergence: return "PureModeDivergence";
    case ErrorCode::SingularDistribution: return "SingularDistribution";
    case ErrorCode::SingularPositionBlock: return "SingularPositionBlock";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotRestricted: return "NotRestricted";
    case ErrorCode::DegenerateSymplecticForm: return "DegenerateSymplecticForm";
    case ErrorCode::TooManyModes: return "TooManyModes";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& msg)
{
    if (!ok)
        throw Error(code, msg);
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m)
{
    return m.size() ? static_cast<double>(m.cwiseAbs().maxCoeff()) : 0.0;
}

} // namespace gaussopt
