#pragma once

#include <stdexcept>
#include <string>

namespace equidist {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDomain : Error { using Error::Error; };
struct PointOutside : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct DegenerateBasis : Error { using Error::Error; };
struct RegionTooLarge : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct UnboundedDomain : Error { using Error::Error; };
struct InvalidGrid : Error { using Error::Error; };
struct TooManyFlagged : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct EmptyField : Error { using Error::Error; };
struct OpenContour : Error { using Error::Error; };
struct NonConvex : Error { using Error::Error; };
struct CenterOutside : Error { using Error::Error; };
struct DegenerateFit : Error { using Error::Error; };
struct FrameSingular : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace equidist
