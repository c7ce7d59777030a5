#include "photon_ur/parallel.hpp"
#include "photon_ur/types.hpp"

#include <cstdlib>

namespace photon_ur {

const char *to_string(Axis axis) {
  switch (axis) {
  case Axis::x:
    return "x";
  case Axis::y:
    return "y";
  case Axis::z:
    return "z";
  }
  return "?";
}

Axis parse_axis(const std::string &name) {
  if (name == "x")
    return Axis::x;
  if (name == "y")
    return Axis::y;
  if (name == "z")
    return Axis::z;
  throw Error(ErrorKind::invalid_argument, "unknown axis '" + name + "'");
}

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::invalid_argument:
    return "invalid_argument";
  case ErrorKind::string_singularity:
    return "string_singularity";
  case ErrorKind::evaluation:
    return "evaluation";
  case ErrorKind::undefined_mean:
    return "undefined_mean";
  case ErrorKind::convergence:
    return "convergence";
  case ErrorKind::cutoff:
    return "cutoff";
  case ErrorKind::numeric:
    return "numeric";
  case ErrorKind::truncation:
    return "truncation";
  case ErrorKind::syntax:
    return "syntax";
  case ErrorKind::unknown_identifier:
    return "unknown_identifier";
  case ErrorKind::config:
    return "config";
  }
  return "unknown";
}

int max_threads() {
  int cap = 1;
#ifdef _OPENMP
  cap = omp_get_max_threads();
#endif
  if (const char *env = std::getenv("PHOTON_UR_THREADS")) {
    char *end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && requested > 0 && requested < cap)
      cap = static_cast<int>(requested);
  }
  return cap;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values)
      s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace photon_ur
