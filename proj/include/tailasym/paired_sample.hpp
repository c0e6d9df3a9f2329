#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace tailasym {

enum class Scale { Raw, Uniform, Pseudo };

std::string_view scale_name(Scale s);

/// n observation pairs. Uniform-scale entries lie in [0, 1]; pseudo-scale
/// entries are rank / (n + 1).
struct PairedSample {
  std::vector<double> x1;
  std::vector<double> x2;
  Scale scale = Scale::Raw;

  std::size_t size() const { return x1.size(); }
  bool empty() const { return x1.empty(); }

  /// Checks equal lengths and the scale's range; throws DataError.
  void validate() const;

  /// Swap the two coordinates.
  PairedSample swapped() const { return {x2, x1, scale}; }
};

} // namespace tailasym
