#include "tailasym/paired_sample.hpp"

#include <cmath>
#include <string>

#include "tailasym/errors.hpp"

namespace tailasym {

std::string_view scale_name(Scale s) {
  switch (s) {
  case Scale::Raw: return "raw";
  case Scale::Uniform: return "uniform";
  case Scale::Pseudo: return "pseudo";
  }
  return "raw";
}

void PairedSample::validate() const {
  if (x1.size() != x2.size())
    throw DataError("paired sample: column lengths differ (" + std::to_string(x1.size()) + " vs " +
                    std::to_string(x2.size()) + ")");
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double a = x1[i];
    const double b = x2[i];
    if (!std::isfinite(a) || !std::isfinite(b))
      throw DataError("paired sample: non-finite value in row " + std::to_string(i + 1));
    if (scale != Scale::Raw && !(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
      throw DataError("paired sample: row " + std::to_string(i + 1) + " outside [0, 1] on the " +
                      std::string(scale_name(scale)) + " scale");
  }
}

} // namespace tailasym
