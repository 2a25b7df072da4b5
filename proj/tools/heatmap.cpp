#include <algorithm>
#include <cmath>
#include <fstream>

#include "commands.hpp"
#include "popcov/error.hpp"

namespace popcov::app {

void write_heatmap(const std::filesystem::path& path, const SymMat& a, int cell) {
    const std::size_t m = a.dim();
    if (cell <= 0) cell = std::max(1, 240 / static_cast<int>(m));
    const auto packed = a.packed();
    const auto [lo_it, hi_it] = std::minmax_element(packed.begin(), packed.end());
    const double lo = *lo_it, span = *hi_it - *lo_it;

    const std::size_t side = m * static_cast<std::size_t>(cell);
    std::vector<unsigned char> pixels(side * side);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double t = span > 0.0 ? (a(i, j) - lo) / span : 0.0;
            const auto level = static_cast<unsigned char>(std::lround(255.0 * t));
            for (int r = 0; r < cell; ++r)
                std::fill_n(pixels.begin() + static_cast<long>((i * cell + r) * side + j * cell), cell, level);
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << "P5\n" << side << ' ' << side << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace popcov::app
