#include "nslab/grid.hpp"

namespace nslab {

WaveGrid make_grid(int n, double length) {
    if (n < 4) throw Error("N must be at least 4 (got " + std::to_string(n) + ")");
    if (n % 2 != 0) throw Error("N must be even (got " + std::to_string(n) + ")");
    if (!(length > 0.0)) throw Error("period length must be positive");
    return WaveGrid{n, length};
}

}  // namespace nslab
