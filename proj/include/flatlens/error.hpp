#pragma once
#include <stdexcept>
#include <string>

namespace flatlens {

enum class Errc {
  DegenerateLattice,
  ParallelGrazing,
  NotOnBoundary,
  DirectionOutward,
  OutOfTimeRange,
  DegenerateImpact,
  OutsideLens,
  CenterSingular,
  StepTooLarge,
  NotParallelogram,
  BadChip,
  NotOnFold,
  CorrespondenceMissing,
  UnknownName,
  TravelCapExceeded,
  TooFewSamples,
  InvalidWeights,
  LatticeMismatch,
  NotAdmissible,
  BadSection,
  SaddleConnectionDetected,
  ExactPeriodicity,
  NonIntegerCocycle,
  BadInput,
  DeformationBlocked,
  ImproperCenters,
  SlitParallelToW,
  TangentialHit,
  DiscontinuityHit,
  SectionThroughSingularity,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

}  // namespace flatlens
