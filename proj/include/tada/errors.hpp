#pragma once

#include <stdexcept>
#include <string>

namespace tada {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TADA_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                          \
    explicit Name(const std::string& msg = #Name) : Error(msg) {} \
  }

TADA_DEFINE_ERROR(LengthMismatch);
TADA_DEFINE_ERROR(DegenerateArtifact);
TADA_DEFINE_ERROR(DegenerateClean);
TADA_DEFINE_ERROR(DegenerateTruth);
TADA_DEFINE_ERROR(NonPowerOfTwoLength);
TADA_DEFINE_ERROR(InvalidCount);
TADA_DEFINE_ERROR(DegenerateSpan);
TADA_DEFINE_ERROR(ShapeMismatch);
TADA_DEFINE_ERROR(DegenerateBatch);
TADA_DEFINE_ERROR(OddLength);
TADA_DEFINE_ERROR(InvalidProbability);
TADA_DEFINE_ERROR(WindowTooLarge);
TADA_DEFINE_ERROR(InvalidTaps);
TADA_DEFINE_ERROR(MissingCalibration);
TADA_DEFINE_ERROR(InsufficientData);
TADA_DEFINE_ERROR(MissingModels);
TADA_DEFINE_ERROR(EmptyCorpus);
TADA_DEFINE_ERROR(IoError);
TADA_DEFINE_ERROR(NonFiniteData);

#undef TADA_DEFINE_ERROR

}  // namespace tada
