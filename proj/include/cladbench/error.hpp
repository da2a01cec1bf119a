#pragma once

#include <stdexcept>
#include <string>

namespace clad {

// Broad classes used by the CLI to choose an exit code.
enum class ErrorClass { Usage, Data, Internal };

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ErrorClass cls = ErrorClass::Data)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define CLAD_DEFINE_ERROR(Name, Cls)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(what, Cls) {}      \
  }

CLAD_DEFINE_ERROR(ConfigError, ErrorClass::Usage);
CLAD_DEFINE_ERROR(SpecError, ErrorClass::Usage);
CLAD_DEFINE_ERROR(UnsupportedKindError, ErrorClass::Usage);

CLAD_DEFINE_ERROR(DegenerateRecordError, ErrorClass::Data);
CLAD_DEFINE_ERROR(ParseError, ErrorClass::Data);
CLAD_DEFINE_ERROR(ValidationError, ErrorClass::Data);
CLAD_DEFINE_ERROR(IntegrityError, ErrorClass::Data);
CLAD_DEFINE_ERROR(SplitError, ErrorClass::Data);
CLAD_DEFINE_ERROR(EmptyInputError, ErrorClass::Data);
CLAD_DEFINE_ERROR(DomainError, ErrorClass::Data);
CLAD_DEFINE_ERROR(ShapeError, ErrorClass::Data);
CLAD_DEFINE_ERROR(TaskError, ErrorClass::Data);
CLAD_DEFINE_ERROR(UndefinedMetricError, ErrorClass::Data);
CLAD_DEFINE_ERROR(NumericalError, ErrorClass::Data);
CLAD_DEFINE_ERROR(IoError, ErrorClass::Data);
CLAD_DEFINE_ERROR(SearchExhaustedError, ErrorClass::Data);

CLAD_DEFINE_ERROR(InternalError, ErrorClass::Internal);

#undef CLAD_DEFINE_ERROR

}  // namespace clad
