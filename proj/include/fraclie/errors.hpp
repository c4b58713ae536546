#pragma once

#include <stdexcept>
#include <string>

namespace fraclie {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define FRACLIE_ERROR(Name)            \
  struct Name : Error {                \
    explicit Name(const std::string& m) \
        : Error(#Name ": " + m) {}     \
  }

FRACLIE_ERROR(CyclicBinding);
FRACLIE_ERROR(FractionalChain);
FRACLIE_ERROR(NonPolynomial);
FRACLIE_ERROR(NegativeIndex);
FRACLIE_ERROR(UndecidableExponent);
FRACLIE_ERROR(ExponentOutOfDomain);
FRACLIE_ERROR(SemanticError);
FRACLIE_ERROR(ShapeViolation);
FRACLIE_ERROR(DegreeInsufficient);
FRACLIE_ERROR(TemplateResidual);
FRACLIE_ERROR(NotTranslation);
FRACLIE_ERROR(NotScaling);
FRACLIE_ERROR(SingularInput);
FRACLIE_ERROR(DivisionByZero);

#undef FRACLIE_ERROR

struct SyntaxError : Error {
  SyntaxError(const std::string& m, int line, int col)
      : Error("SyntaxError at " + std::to_string(line) + ":" + std::to_string(col) + ": " + m),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace fraclie
