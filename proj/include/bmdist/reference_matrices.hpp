#pragma once

#include <optional>
#include <string>

#include "bmdist/numeric/matrix.hpp"
#include "bmdist/numeric/matrix_io.hpp"

namespace bmdist {

// Best known generators for dimensions 3 to 8 (published values in
// comments). Dimensions 3, 4, 7, 8 are exact; 5 and 6 are decimals as printed.
namespace reference {

// r = 9/5
inline constexpr const char* kDim3 = R"(3
1 1 -1/3
-1/3 1 1
1 -1/3 1
)";

// r = 2
inline constexpr const char* kDim4 = R"(4
1 1 1 -1
-1 1 1 1
1 -1 1 1
1 1 -1 1
)";

// r ~ 2.32871
inline constexpr const char* kDim5 = R"(5
0.792559 1 0.0387439 -1 -0.704555
1 0.792092 0.999411 0.855944 1
-1 -0.0773263 1 -1 0.888962
0.925403 -1 1 -0.115724 -0.822648
1 -0.79255 -0.999989 -0.856439 1
)";

// r = 13/5
inline constexpr const char* kDim7 = R"(7
1 1 1 1 1 1 1
1 0 1 -1 -1 1 -1
1 1 0 1 -1 -1 -1
1 -1 1 0 1 -1 -1
1 -1 -1 1 0 1 -1
1 1 -1 -1 1 0 -1
1 -1 -1 -1 -1 -1 1
)";

// r = 5/2; a Hadamard matrix.
inline constexpr const char* kDim8 = R"(8
1 1 1 1 1 1 1 1
-1 -1 -1 1 -1 1 1 1
-1 1 -1 -1 1 -1 1 1
-1 1 1 -1 -1 1 -1 1
-1 1 1 1 -1 -1 1 -1
-1 -1 1 1 1 -1 -1 1
-1 1 -1 1 1 1 -1 -1
-1 -1 1 -1 1 1 1 -1
)";

inline constexpr double kDim6X = 0.324842;
inline constexpr double kDim6Y = -0.434446;

}  // namespace reference

// The two-parameter dimension-6 pattern; (x, y) = (0.324842, -0.434446)
// gives r ~ 2.4488.
inline RealMatrix dim6_circulant(double x, double y) {
  return RealMatrix{
      {1, 1, 1, 1, 1, 1},    {-1, x, 1, y, -1, 1}, {-1, 1, x, 1, y, -1},
      {-1, -1, 1, x, 1, y},  {-1, y, -1, 1, x, 1}, {-1, 1, y, -1, 1, x},
  };
}

inline std::optional<Matrix> reference_matrix(int n) {
  switch (n) {
    case 3:
      return read_matrix_string(reference::kDim3);
    case 4:
      return read_matrix_string(reference::kDim4);
    case 5:
      return read_matrix_string(reference::kDim5);
    case 6:
      return Matrix(dim6_circulant(reference::kDim6X, reference::kDim6Y));
    case 7:
      return read_matrix_string(reference::kDim7);
    case 8:
      return read_matrix_string(reference::kDim8);
    default:
      return std::nullopt;
  }
}

// Published radius for dimensions 3..8, as printed.
inline std::optional<std::string> reference_value(int n) {
  switch (n) {
    case 3:
      return "9/5";
    case 4:
      return "2";
    case 5:
      return "2.32871";
    case 6:
      return "2.4488";
    case 7:
      return "2.6";
    case 8:
      return "2.5";
    default:
      return std::nullopt;
  }
}

}  // namespace bmdist
